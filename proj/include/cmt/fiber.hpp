#pragma once

// Solving for a point of C_n with both spectra prescribed. With X = diag(x)
// fixed, the Wilson form leaves only the diagonal d of Y free; we solve
// charpoly(W(x) + diag(d)) = prod (t - mu_j) for d.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "cmt/cm_space.hpp"
#include "cmt/core.hpp"
#include "cmt/linalg.hpp"
#include "cmt/matrix.hpp"
#include "cmt/polynomial.hpp"

namespace cmt {

struct FiberOptions {
  std::uint64_t seed = 0;
  int max_restarts = 32;
  double residual_tol = 1e-10;  // on scaled coefficients
};

namespace fiber_detail {

// Equation system in the reduced unknowns u = (d_0..d_{n-2}); the trace
// equation fixes d_{n-1} = sum(mu) - sum(u).
class FiberSystem {
 public:
  FiberSystem(std::span<const cplx> x, std::span<const cplx> mu)
      : n_(x.size()), w_(wilson_offdiagonal(x)), target_(Poly::from_roots(mu).coeffs()) {
    trace_ = std::accumulate(mu.begin(), mu.end(), cplx{});
    scale_ = 1.0;
    for (const cplx m : mu) scale_ = std::max(scale_, std::abs(m));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (i != j) scale_ = std::max(scale_, std::abs(w_(i, j)));
  }

  std::size_t unknowns() const { return n_ - 1; }

  std::vector<cplx> expand(std::span<const cplx> u) const {
    std::vector<cplx> d(u.begin(), u.end());
    d.push_back(trace_ - std::accumulate(u.begin(), u.end(), cplx{}));
    return d;
  }

  CMatrix matrix(std::span<const cplx> d, cplx s) const {
    CMatrix y = w_ * s;
    for (std::size_t i = 0; i < n_; ++i) y(i, i) = d[i];
    return y;
  }

  /// Scaled coefficient residuals for t^0..t^{n-1} (the last one is the trace).
  std::vector<cplx> residual(std::span<const cplx> d, cplx s) const {
    const Poly cp = char_poly(matrix(d, s), n_);
    std::vector<cplx> r(n_);
    for (std::size_t j = 0; j < n_; ++j) r[j] = (cp[j] - target_[j]) / std::pow(scale_, static_cast<double>(n_ - j));
    return r;
  }

  /// Reduced residual and Jacobian. d/dd_k det(tI - Y) = -charpoly(Y without row/col k).
  void linearize(std::span<const cplx> u, cplx s, std::vector<cplx>& f, CMatrix& jac) const {
    const auto d = expand(u);
    const CMatrix y = matrix(d, s);
    const auto full = residual(d, s);
    const std::size_t m = n_ - 1;
    f.assign(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(m));
    CMatrix jd(n_);  // rows: equations 0..n-1, cols: d_k
    for (std::size_t k = 0; k < n_; ++k) {
      CMatrix minor(m);
      for (std::size_t i = 0, ii = 0; i < n_; ++i) {
        if (i == k) continue;
        for (std::size_t j = 0, jj = 0; j < n_; ++j) {
          if (j == k) continue;
          minor(ii, jj++) = y(i, j);
        }
        ++ii;
      }
      const Poly mp = char_poly(minor, n_);
      for (std::size_t j = 0; j < n_; ++j) jd(j, k) = -mp[j] / std::pow(scale_, static_cast<double>(n_ - j));
    }
    jac = CMatrix(m);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k) jac(j, k) = jd(j, k) - jd(j, n_ - 1);
  }

  double norm(std::span<const cplx> f) const {
    double s = 0.0;
    for (const cplx z : f) s = std::max(s, std::abs(z));
    return s;
  }

 private:
  std::size_t n_;
  CMatrix w_;
  std::vector<cplx> target_;
  cplx trace_;
  double scale_;
};

// Damped Newton from u at fixed s. Returns the number of iterations used,
// or nullopt if it failed to converge.
inline std::optional<int> newton(const FiberSystem& sys, std::vector<cplx>& u, cplx s, int max_iter, double step_tol) {
  std::vector<cplx> f;
  CMatrix jac;
  for (int it = 0; it < max_iter; ++it) {
    sys.linearize(u, s, f, jac);
    const double f0 = sys.norm(f);
    const auto lu = lu_factor(jac);
    if (lu.singular) return std::nullopt;
    for (auto& z : f) z = -z;
    const auto delta = lu_solve(lu, f);
    double step = 0.0, mag = 1.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      step = std::max(step, std::abs(delta[k]));
      mag = std::max(mag, std::abs(u[k]));
    }
    if (!std::isfinite(step)) return std::nullopt;
    double lambda = 1.0;
    std::vector<cplx> trial(u.size());
    for (int damp = 0; damp < 6; ++damp, lambda *= 0.5) {
      for (std::size_t k = 0; k < u.size(); ++k) trial[k] = u[k] + lambda * delta[k];
      std::vector<cplx> ft;
      CMatrix jt;
      sys.linearize(trial, s, ft, jt);
      if (sys.norm(ft) < f0 || f0 < 1e-14) break;
    }
    u = trial;
    if (lambda * step <= step_tol * mag) return it + 1;
  }
  return std::nullopt;
}

}  // namespace fiber_detail

/// Diagonal d such that (diag(x), W(x) + diag(d)) has Y-spectrum mu.
/// Continuation from s = 0 (where d is a permutation of mu) to s = 1 along
/// s(tau) = tau + i*gamma*tau*(1 - tau), with a damped Newton corrector and
/// randomized restarts.
inline std::vector<cplx> fiber_solve(std::span<const cplx> x, std::span<const cplx> mu, const FiberOptions& opt = {}) {
  const std::size_t n = x.size();
  if (mu.size() != n) throw Error(ErrorCode::SizeMismatch, "fiber_solve: spectra differ in size");
  if (n == 0) return {};
  if (min_separation(x) <= kDefaultTolerances.spec || min_separation(mu) <= kDefaultTolerances.spec)
    throw Error(ErrorCode::PreconditionViolated, "fiber_solve needs simple spectra");
  if (n == 1) return {mu[0]};

  const fiber_detail::FiberSystem sys(x, mu);
  Rng rng(opt.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int attempt = 0; attempt < opt.max_restarts; ++attempt) {
    const double gamma = attempt == 0 ? 0.5 : rng.uniform(-1.5, 1.5);
    if (attempt > 0)
      for (std::size_t k = n - 1; k > 0; --k) std::swap(order[k], order[rng.index(k + 1)]);
    std::vector<cplx> u(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) u[k] = mu[order[k]];
    auto path = [gamma](double tau) { return cplx{tau, gamma * tau * (1.0 - tau)}; };

    double tau = 0.0, h = 0.05;
    std::vector<cplx> prev = u;
    double prev_tau = 0.0;
    bool ok = true;
    while (tau < 1.0) {
      const double next = std::min(1.0, tau + h);
      std::vector<cplx> guess = u;
      if (tau > prev_tau) {  // secant predictor
        const double ratio = (next - tau) / (tau - prev_tau);
        for (std::size_t k = 0; k < u.size(); ++k) guess[k] = u[k] + ratio * (u[k] - prev[k]);
      }
      const auto iters = fiber_detail::newton(sys, guess, path(next), 6, 1e-11);
      if (iters) {
        prev = u;
        prev_tau = tau;
        u = guess;
        tau = next;
        if (*iters <= 3) h = std::min(0.2, h * 1.5);
      } else {
        h *= 0.5;
        if (h < 1e-6) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;
    fiber_detail::newton(sys, u, 1.0, 20, 1e-15);
    const auto d = sys.expand(u);
    if (sys.norm(sys.residual(d, 1.0)) <= opt.residual_tol) return d;
  }
  throw Error(ErrorCode::NonConvergence, "fiber_solve exhausted its restarts");
}

}  // namespace cmt
