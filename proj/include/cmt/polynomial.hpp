#pragma once

// Univariate polynomials over C, with coefficients stored lowest degree first.

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "cmt/core.hpp"
#include "cmt/matrix.hpp"

namespace cmt {

/// Polynomial with complex coefficients, lowest degree first. Trailing
/// coefficients at or below the strip threshold are removed, so the zero
/// polynomial has no coefficients and degree() == -1.
class Poly {
 public:
  static constexpr int kZeroDegree = -1;

  Poly() = default;
  explicit Poly(std::vector<cplx> coeffs, double strip_eps = kDefaultTolerances.coeff)
      : c_(std::move(coeffs)) {
    while (!c_.empty() && std::abs(c_.back()) <= strip_eps) c_.pop_back();
  }

  static Poly constant(cplx c) { return Poly({c}); }
  static Poly identity() { return Poly({cplx{0.0}, cplx{1.0}}); }

  /// prod (x - r) over the given roots.
  static Poly from_roots(std::span<const cplx> roots) {
    std::vector<cplx> c{1.0};
    for (const cplx r : roots) {
      c.push_back(0.0);
      for (std::size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
      c[0] = -r * c[0];
    }
    return Poly(std::move(c), 0.0);
  }

  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  const std::vector<cplx>& coeffs() const noexcept { return c_; }
  cplx leading() const { return c_.empty() ? cplx{} : c_.back(); }
  cplx operator[](std::size_t k) const { return k < c_.size() ? c_[k] : cplx{}; }

  /// Coefficient 1-norm.
  double norm1() const {
    double s = 0.0;
    for (const cplx z : c_) s += std::abs(z);
    return s;
  }

  Poly operator-() const {
    auto c = c_;
    for (auto& z : c) z = -z;
    return Poly(std::move(c), 0.0);
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<cplx> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a[k] + b[k];
    return Poly(std::move(c));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<cplx> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(c), 0.0);
  }
  friend Poly operator*(cplx s, const Poly& p) {
    auto c = p.c_;
    for (auto& z : c) z *= s;
    return Poly(std::move(c));
  }

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  std::vector<cplx> c_;
};

inline cplx eval_scalar(const Poly& p, cplx z) {
  cplx acc = 0.0;
  const auto& c = p.coeffs();
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
  return acc;
}

/// Horner evaluation p(M); the constant term contributes c0 * I.
inline CMatrix eval_matrix(const Poly& p, const CMatrix& m) {
  const std::size_t n = m.size();
  const auto& c = p.coeffs();
  if (c.empty()) return CMatrix(n);
  CMatrix acc = CMatrix::identity(n) * c.back();
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    acc = acc * m;
    acc.add_identity(c[k]);
  }
  return acc;
}

inline Poly derivative(const Poly& p) {
  const auto& c = p.coeffs();
  if (c.size() <= 1) return {};
  std::vector<cplx> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
  return Poly(std::move(d), 0.0);
}

/// Sylvester matrix of (p, q): deg q shifted copies of p followed by deg p
/// shifted copies of q, coefficients highest degree first.
inline CMatrix sylvester_matrix(const Poly& p, const Poly& q) {
  const auto m = static_cast<std::size_t>(p.degree());
  const auto k = static_cast<std::size_t>(q.degree());
  CMatrix s(m + k);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t j = 0; j <= m; ++j) s(r, r + j) = p[m - j];
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t j = 0; j <= k; ++j) s(k + r, r + j) = q[k - j];
  return s;
}

/// Res(p, q) = lc(p)^deg(q) * prod q(a) over the roots a of p.
inline cplx resultant(const Poly& p, const Poly& q) {
  if (p.is_zero() || q.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "resultant of a zero polynomial");
  if (p.degree() == 0 && q.degree() == 0) return 1.0;
  return determinant(sylvester_matrix(p, q));
}

/// A boolean verdict together with the numeric witness it was based on.
struct Certified {
  bool ok = false;
  double value = 0.0;
};

inline Certified has_simple_roots(const Poly& p, double tol) {
  if (p.degree() < 1) throw Error(ErrorCode::InvalidArgument, "has_simple_roots needs degree >= 1");
  const double scale = std::pow(std::abs(p.leading()), 2 * p.degree() - 1);
  const double value = std::abs(resultant(p, derivative(p))) / scale;
  return {value > tol, value};
}

/// Barycentric weights w_j = 1 / prod_{k != j} (x_j - x_k).
inline std::vector<cplx> barycentric_weights(std::span<const cplx> nodes) {
  std::vector<cplx> w(nodes.size(), 1.0);
  for (std::size_t j = 0; j < nodes.size(); ++j)
    for (std::size_t k = 0; k < nodes.size(); ++k)
      if (k != j) w[j] /= nodes[j] - nodes[k];
  return w;
}

inline cplx barycentric_eval(std::span<const cplx> nodes, std::span<const cplx> weights,
                             std::span<const cplx> values, cplx z) {
  cplx num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const cplx diff = z - nodes[j];
    if (diff == cplx{}) return values[j];
    const cplx t = weights[j] / diff;
    num += t * values[j];
    den += t;
  }
  return num / den;
}

namespace detail {

// Monomial coefficients of sum_j w_j f_j * prod_{k != j}(x - x_k).
inline std::vector<cplx> lagrange_coefficients(std::span<const cplx> nodes, std::span<const cplx> weights,
                                               std::span<const cplx> values) {
  const std::size_t n = nodes.size();
  const auto full = Poly::from_roots(nodes).coeffs();  // degree n, monic
  std::vector<cplx> out(n, 0.0);
  std::vector<cplx> quotient(n);
  for (std::size_t j = 0; j < n; ++j) {
    // synthetic division of prod(x - x_k) by (x - x_j)
    cplx carry = full[n];
    for (std::size_t k = n; k-- > 0;) {
      quotient[k] = carry;
      carry = full[k] + carry * nodes[j];
    }
    const cplx scale = weights[j] * values[j];
    for (std::size_t k = 0; k < n; ++k) out[k] += scale * quotient[k];
  }
  return out;
}

inline void require_separated(std::span<const cplx> nodes, double eps) {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if (std::abs(nodes[i] - nodes[j]) <= eps)
        throw Error(ErrorCode::DuplicateNodes, "interpolation nodes coincide within tolerance");
}

}  // namespace detail

/// Interpolation data: the unique polynomial of degree < size() through
/// (nodes[i], values[i]).
struct SpectrumTargets {
  std::vector<cplx> nodes;
  std::vector<cplx> values;

  void add(cplx node, cplx value) {
    nodes.push_back(node);
    values.push_back(value);
  }
  std::size_t size() const noexcept { return nodes.size(); }
};

/// Lagrange interpolation through barycentric weights, followed by two
/// rounds of residual correction in monomial form.
inline Poly interpolate(const SpectrumTargets& t, double spec_eps = kDefaultTolerances.spec) {
  if (t.nodes.size() != t.values.size()) throw Error(ErrorCode::SizeMismatch, "nodes and values differ in length");
  if (t.nodes.empty()) return {};
  detail::require_separated(t.nodes, spec_eps);
  const auto w = barycentric_weights(t.nodes);
  auto coeffs = detail::lagrange_coefficients(t.nodes, w, t.values);
  std::vector<cplx> residual(t.size());
  for (int round = 0; round < 2; ++round) {
    const Poly current(coeffs, 0.0);
    for (std::size_t j = 0; j < t.size(); ++j) residual[j] = t.values[j] - eval_scalar(current, t.nodes[j]);
    const auto fix = detail::lagrange_coefficients(t.nodes, w, residual);
    for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] += fix[k];
  }
  return Poly(std::move(coeffs));
}

/// One congruence p == p_i (mod prod over spectrum of (x - lambda)).
struct CrtBlock {
  std::vector<cplx> spectrum;
  Poly poly;
};

/// Polynomial agreeing with each block polynomial on that block's spectrum.
/// The moduli are squarefree with known roots, so the combination is an
/// interpolation over the union of the spectra.
inline Poly crt_combine(std::span<const CrtBlock> blocks, double spec_eps = kDefaultTolerances.spec) {
  SpectrumTargets t;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    detail::require_separated(blocks[b].spectrum, spec_eps);
    for (std::size_t c = 0; c < b; ++c)
      for (const cplx u : blocks[b].spectrum)
        for (const cplx v : blocks[c].spectrum)
          if (std::abs(u - v) <= spec_eps)
            throw Error(ErrorCode::SpectraCollide, "two blocks share a spectral node");
    for (const cplx lambda : blocks[b].spectrum) t.add(lambda, eval_scalar(blocks[b].poly, lambda));
  }
  return interpolate(t, spec_eps);
}

/// Backward-error style residual |p(z)| / sum |c_k| max(1,|z|)^k.
inline double root_residual(const Poly& p, cplx z) {
  const double r = std::max(1.0, std::abs(z));
  double scale = 0.0, pow = 1.0;
  for (const cplx c : p.coeffs()) {
    scale += std::abs(c) * pow;
    pow *= r;
  }
  return scale == 0.0 ? 0.0 : std::abs(eval_scalar(p, z)) / scale;
}

/// All deg(p) roots by Aberth-Ehrlich iteration (Gauss-Seidel updates).
inline std::vector<cplx> roots(const Poly& p, double tol = kDefaultTolerances.root,
                               int max_iter = kDefaultTolerances.root_max_iter) {
  const int n = p.degree();
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "roots needs degree >= 1");
  const auto& c = p.coeffs();
  if (n == 1) return {-c[0] / c[1]};

  const Poly dp = derivative(p);
  const cplx centre = -c[n - 1] / (static_cast<double>(n) * c[n]);
  double radius = std::pow(std::abs(eval_scalar(p, centre) / c[n]), 1.0 / n);
  if (!(radius > 0.0) || !std::isfinite(radius)) radius = 1.0;
  std::vector<cplx> z(n);
  for (int k = 0; k < n; ++k)
    z[k] = centre + std::polar(radius, 2.0 * std::numbers::pi * k / n + 0.4);

  for (int iter = 0; iter < max_iter; ++iter) {
    double max_step = 0.0, max_mag = 1.0;
    for (int i = 0; i < n; ++i) {
      const cplx pv = eval_scalar(p, z[i]);
      if (pv == cplx{}) continue;
      const cplx ratio = pv / eval_scalar(dp, z[i]);
      cplx repulsion = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i) repulsion += 1.0 / (z[i] - z[j]);
      cplx step = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = 1e-8 * std::max(1.0, std::abs(z[i]));
      z[i] -= step;
      max_step = std::max(max_step, std::abs(step));
      max_mag = std::max(max_mag, std::abs(z[i]));
    }
    if (max_step <= 4.0 * std::numeric_limits<double>::epsilon() * max_mag) break;
  }
  for (const cplx r : z)
    if (!(root_residual(p, r) <= tol)) throw Error(ErrorCode::NonConvergence, "root iteration did not converge");
  return z;
}

}  // namespace cmt
