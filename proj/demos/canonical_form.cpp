// Hides a Wilson-form point behind a random change of basis and recovers
// its (x_i, y_ii) pairs.

#include <cstdio>

#include "cmt/cmt.hpp"

int main() {
  using namespace cmt;
  const std::vector<cplx> x{0.0, 1.0, {0.5, 2.0}};
  const std::vector<cplx> d{{1.0, -1.0}, 3.0, {0.0, 0.25}};
  const CMPoint wilson = point_with_X_spectrum(x, d);

  const CMatrix a{{1.0, 0.3, 0.0}, {-0.2, 1.0, 0.4}, {0.1, 0.0, 1.0}};
  const CMatrix a_inv = inverse(a);
  const CMPoint hidden{a * wilson.x * a_inv, a * wilson.y * a_inv};

  std::printf("membership residual %.2e\n", verify_membership(hidden).residual);
  for (const auto& [xi, yi] : canonicalize(hidden).pairs)
    std::printf("x = %+.6f%+.6fi   y_ii = %+.6f%+.6fi\n", xi.real(), xi.imag(), yi.real(), yi.imag());
}
