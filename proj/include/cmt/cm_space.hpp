#pragma once

// Points of the Calogero-Moser space C_n: pairs (X, Y) with rank([X,Y] + I) = 1
// up to simultaneous conjugation, together with the Wilson normal form that
// decides equality on the locus where X has simple spectrum.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "cmt/core.hpp"
#include "cmt/linalg.hpp"
#include "cmt/matrix.hpp"

namespace cmt {

struct CMPoint {
  CMatrix x;
  CMatrix y;

  std::size_t size() const noexcept { return x.size(); }
  friend bool operator==(const CMPoint&, const CMPoint&) = default;
};

struct MembershipCheck {
  bool member = false;
  double residual = 0.0;  // second pivot of [X,Y]+I relative to its norm
};

inline MembershipCheck verify_membership(const CMatrix& x, const CMatrix& y, double tol = kDefaultTolerances.rank) {
  CMatrix r = commutator(x, y);
  r.add_identity(1.0);
  if (r.size() == 1) return {true, 0.0};
  const auto piv = relative_pivots(r);
  const double residual = piv[1];
  return {piv[0] > tol && residual <= tol, residual};
}

inline MembershipCheck verify_membership(const CMPoint& p, double tol = kDefaultTolerances.rank) {
  return verify_membership(p.x, p.y, tol);
}

/// Wilson-form off-diagonal part: w_ij = 1 / (x_i - x_j), zero diagonal.
inline CMatrix wilson_offdiagonal(std::span<const cplx> x) {
  CMatrix w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (i != j) w(i, j) = 1.0 / (x[i] - x[j]);
  return w;
}

/// The point (diag(lambdas), W(lambdas) + diag(diag_y)).
inline CMPoint point_with_X_spectrum(std::span<const cplx> lambdas, std::span<const cplx> diag_y,
                                     double spec_eps = kDefaultTolerances.spec) {
  if (lambdas.size() != diag_y.size()) throw Error(ErrorCode::SizeMismatch, "spectrum and diagonal differ in length");
  if (lambdas.empty()) throw Error(ErrorCode::InvalidArgument, "empty spectrum");
  if (min_separation(lambdas) <= spec_eps)
    throw Error(ErrorCode::RepeatedEigenvalue, "X eigenvalues must be pairwise distinct");
  CMatrix y = wilson_offdiagonal(lambdas);
  for (std::size_t i = 0; i < diag_y.size(); ++i) y(i, i) = diag_y[i];
  return {CMatrix::diagonal(lambdas), std::move(y)};
}

/// Random member of C_n, deterministic in seed: a Wilson-form point with
/// well separated X-spectrum conjugated by a random well-conditioned matrix.
inline CMPoint random_point(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be positive");
  Rng rng(seed);
  std::vector<cplx> lambdas;
  const double min_gap = 0.25 * scale;
  while (lambdas.size() < n) {
    const cplx z = rng.in_disk(scale * (1.0 + 0.3 * static_cast<double>(n)));
    if (std::all_of(lambdas.begin(), lambdas.end(), [&](cplx w) { return std::abs(z - w) > min_gap; }))
      lambdas.push_back(z);
  }
  std::vector<cplx> d(n);
  for (auto& z : d) z = rng.in_disk(scale);
  const CMPoint wilson = point_with_X_spectrum(lambdas, d);
  if (n == 1) return wilson;

  for (;;) {
    CMatrix a = CMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) += rng.in_disk(0.6);
    if (condition_inf(a) > 30.0) continue;
    const CMatrix a_inv = inverse(a);
    return {a * wilson.x * a_inv, a * wilson.y * a_inv};
  }
}

/// (X, Y) -> (Y^T, X^T); preserves membership since [Y^T, X^T] = [X, Y]^T.
inline CMPoint transpose_swap(const CMPoint& p) { return {p.y.transpose(), p.x.transpose()}; }

struct CanonicalForm {
  std::size_t n = 0;
  std::vector<std::pair<cplx, cplx>> pairs;  // (x_i, y_ii), canonical order on x
};

/// The representative with X diagonal and the rank-one factor of [X,Y]+I
/// normalised to all ones, so that y_ij = 1/(x_i - x_j) off the diagonal.
struct WilsonFrame {
  CMatrix x;
  CMatrix y;
  double wilson_residual = 0.0;  // max relative deviation from 1/(x_i - x_j)
  CanonicalForm form;
};

inline WilsonFrame wilson_frame(const CMPoint& p, const Tolerances& tols = kDefaultTolerances) {
  const std::size_t n = p.size();
  EigenDecomposition ed;
  try {
    ed = eigen_decompose(p.x, tols);
  } catch (const Error& e) {
    throw Error(ErrorCode::NotSimpleSpectrum, std::string("X has no certified simple spectrum (") + e.what() + ")");
  }
  const CMatrix y0 = ed.basis_inverse * p.y * ed.basis;
  const std::vector<cplx>& xs = ed.eigenvalues;

  CMatrix r = commutator(CMatrix::diagonal(xs), y0);
  r.add_identity(1.0);
  // R = v w^T: v from the largest column, w from the row where v peaks.
  std::size_t col = 0;
  double best = -1.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(r(i, j));
    if (s > best) {
      best = s;
      col = j;
    }
  }
  std::vector<cplx> v(n);
  std::size_t row = 0;
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = r(i, col);
    if (std::abs(v[i]) > std::abs(v[row])) row = i;
  }
  std::vector<cplx> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = r(row, j) / r(row, col);
  // v_i w_i = 1; the torus element diag(1/v_i) turns the factor into all ones.
  CMatrix y(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) y(i, j) = y0(i, j) * v[j] / v[i];

  WilsonFrame frame{CMatrix::diagonal(xs), y, 0.0, {n, {}}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const cplx expected = 1.0 / (xs[i] - xs[j]);
      const double dev = std::abs(y(i, j) - expected) / std::max(1.0, std::abs(expected));
      frame.wilson_residual = std::max(frame.wilson_residual, dev);
    }
  if (!(frame.wilson_residual <= tols.wilson))
    throw Error(ErrorCode::WilsonFormViolation, "off-diagonal entries deviate from 1/(x_i - x_j)");
  for (std::size_t i = 0; i < n; ++i) frame.form.pairs.emplace_back(xs[i], y0(i, i));
  canonical_sort(frame.form.pairs, [](const auto& pr) { return pr.first; }, tols.spec);
  return frame;
}

inline CanonicalForm canonicalize(const CMPoint& p, const Tolerances& tols = kDefaultTolerances) {
  return wilson_frame(p, tols).form;
}

struct PointComparison {
  bool same = false;
  double distance = 0.0;
};

/// Greedy nearest-x alignment of two canonical forms; distance is the max
/// over matched pairs of max(|dx|, |dd|).
inline double canonical_distance(const CanonicalForm& a, const CanonicalForm& b) {
  if (a.n != b.n) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.pairs.size(), false);
  double dist = 0.0;
  for (const auto& [x, d] : a.pairs) {
    std::size_t pick = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.pairs.size(); ++j)
      if (!used[j] && std::abs(b.pairs[j].first - x) < best) {
        best = std::abs(b.pairs[j].first - x);
        pick = j;
      }
    used[pick] = true;
    dist = std::max({dist, best, std::abs(b.pairs[pick].second - d)});
  }
  return dist;
}

inline PointComparison same_point(const CMPoint& p, const CMPoint& q, double tol = kDefaultTolerances.canon,
                                  const Tolerances& tols = kDefaultTolerances) {
  if (p.size() != q.size()) return {false, std::numeric_limits<double>::infinity()};
  const double dist = canonical_distance(canonicalize(p, tols), canonicalize(q, tols));
  return {dist <= tol, dist};
}

struct Block {
  std::size_t n = 0;
  std::vector<CMPoint> points;
  friend bool operator==(const Block&, const Block&) = default;
};

struct Configuration {
  std::vector<Block> blocks;

  std::size_t point_count() const {
    std::size_t c = 0;
    for (const auto& b : blocks) c += b.points.size();
    return c;
  }
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// Checks membership and blockwise distinctness (at 10 * canon tolerance).
/// Distinctness is only decidable here for points whose X has simple spectrum.
inline void validate_configuration(const Configuration& c, const Tolerances& tols = kDefaultTolerances) {
  for (std::size_t b = 0; b < c.blocks.size(); ++b) {
    const auto& block = c.blocks[b];
    for (std::size_t i = 0; i < block.points.size(); ++i) {
      const auto& p = block.points[i];
      if (p.x.size() != block.n || p.y.size() != block.n)
        throw Error(ErrorCode::SizeMismatch, "point size differs from its block size");
      if (!verify_membership(p, tols.membership).member)
        throw Error(ErrorCode::PreconditionViolated, "block " + std::to_string(b) + " point " + std::to_string(i) +
                                                         " is not a member of C_n");
      for (std::size_t j = 0; j < i; ++j) {
        bool dup = false;
        try {
          dup = same_point(p, block.points[j], 10.0 * tols.canon, tols).same;
        } catch (const Error& e) {
          // off the simple-spectrum locus; the engine re-checks after diagonalising
          if (e.code() != ErrorCode::NotSimpleSpectrum) throw;
        }
        if (dup) throw Error(ErrorCode::DuplicatePoints, "block " + std::to_string(b) + " repeats a point");
      }
    }
  }
}

}  // namespace cmt
