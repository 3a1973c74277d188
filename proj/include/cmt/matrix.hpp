#pragma once

// Dense square complex matrices and the elimination kernels built on them.

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numeric>
#include <span>
#include <vector>

#include "cmt/core.hpp"

namespace cmt {

class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(std::size_t n) : n_(n), a_(n * n, cplx{0.0, 0.0}) {}
  CMatrix(std::size_t n, std::vector<cplx> entries) : n_(n), a_(std::move(entries)) {
    if (a_.size() != n * n) throw Error(ErrorCode::SizeMismatch, "entry count is not n*n");
  }
  CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) : n_(rows.size()) {
    a_.reserve(n_ * n_);
    for (const auto& row : rows) {
      if (row.size() != n_) throw Error(ErrorCode::SizeMismatch, "matrix must be square");
      a_.insert(a_.end(), row.begin(), row.end());
    }
  }

  static CMatrix identity(std::size_t n) {
    CMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static CMatrix diagonal(std::span<const cplx> d) {
    CMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t size() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }

  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  std::span<const cplx> entries() const noexcept { return a_; }

  std::vector<cplx> diagonal_entries() const {
    std::vector<cplx> d(n_);
    for (std::size_t i = 0; i < n_; ++i) d[i] = (*this)(i, i);
    return d;
  }

  cplx trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  CMatrix transpose() const {
    CMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Maximum absolute row sum.
  double norm_inf() const {
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n_; ++j) row += std::abs((*this)(i, j));
      best = std::max(best, row);
    }
    return best;
  }

  double max_abs() const {
    double best = 0.0;
    for (const auto& z : a_) best = std::max(best, std::abs(z));
    return best;
  }

  bool all_finite() const {
    return std::all_of(a_.begin(), a_.end(),
                       [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
  }

  CMatrix& operator+=(const CMatrix& o) {
    require_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& o) {
    require_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  CMatrix& operator*=(cplx s) {
    for (auto& z : a_) z *= s;
    return *this;
  }

  /// Adds s to every diagonal entry.
  CMatrix& add_identity(cplx s) {
    for (std::size_t i = 0; i < n_; ++i) (*this)(i, i) += s;
    return *this;
  }

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
  friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    a.require_same(b);
    const std::size_t n = a.n_;
    CMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend std::vector<cplx> operator*(const CMatrix& a, std::span<const cplx> v) {
    if (v.size() != a.n_) throw Error(ErrorCode::SizeMismatch, "matrix-vector size mismatch");
    std::vector<cplx> out(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t j = 0; j < a.n_; ++j) out[i] += a(i, j) * v[j];
    return out;
  }

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  void require_same(const CMatrix& o) const {
    if (o.n_ != n_) throw Error(ErrorCode::SizeMismatch, "matrix sizes differ");
  }

  std::size_t n_ = 0;
  std::vector<cplx> a_;
};

/// Row-pivoted LU factorisation, PA = LU with unit lower L stored below the diagonal.
struct LuFactors {
  CMatrix lu;
  std::vector<std::size_t> perm;
  int sign = 1;
  bool singular = false;
};

inline LuFactors lu_factor(const CMatrix& m) {
  const std::size_t n = m.size();
  LuFactors f{m, std::vector<std::size_t>(n), 1, false};
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
  CMatrix& a = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(f.perm[k], f.perm[p]);
      f.sign = -f.sign;
    }
    if (a(k, k) == cplx{}) {
      f.singular = true;
      continue;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx l = a(i, k) / a(k, k);
      a(i, k) = l;
      if (l == cplx{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
    }
  }
  return f;
}

inline std::vector<cplx> lu_solve(const LuFactors& f, std::span<const cplx> b) {
  const std::size_t n = f.lu.size();
  if (f.singular) throw Error(ErrorCode::ConditioningFailure, "singular system");
  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx s = b[f.perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    cplx s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s / f.lu(i, i);
  }
  return x;
}

inline std::vector<cplx> solve(const CMatrix& a, std::span<const cplx> b) { return lu_solve(lu_factor(a), b); }

inline cplx determinant(const CMatrix& m) {
  if (m.empty()) return 1.0;
  const auto f = lu_factor(m);
  cplx d = static_cast<double>(f.sign);
  for (std::size_t i = 0; i < m.size(); ++i) d *= f.lu(i, i);
  return d;
}

inline CMatrix inverse(const CMatrix& m) {
  const std::size_t n = m.size();
  const auto f = lu_factor(m);
  if (f.singular) throw Error(ErrorCode::ConditioningFailure, "matrix is singular");
  CMatrix inv(n);
  std::vector<cplx> e(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), cplx{});
    e[j] = 1.0;
    const auto col = lu_solve(f, e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

/// Gaussian elimination with complete pivoting. Pivots come out in
/// non-increasing magnitude order for well-behaved inputs; the row and
/// column permutations are recorded so that null vectors can be recovered.
struct CompletePivoting {
  CMatrix reduced;  // upper triangular in permuted coordinates
  std::vector<std::size_t> row_perm;
  std::vector<std::size_t> col_perm;
  std::vector<double> pivots;  // |pivot| per elimination step
};

inline CompletePivoting complete_pivoting(const CMatrix& m) {
  const std::size_t n = m.size();
  CompletePivoting r{m, std::vector<std::size_t>(n), std::vector<std::size_t>(n), {}};
  std::iota(r.row_perm.begin(), r.row_perm.end(), std::size_t{0});
  std::iota(r.col_perm.begin(), r.col_perm.end(), std::size_t{0});
  CMatrix& a = r.reduced;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pi = k, pj = k;
    double best = -1.0;
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < n; ++j)
        if (std::abs(a(i, j)) > best) {
          best = std::abs(a(i, j));
          pi = i;
          pj = j;
        }
    if (pi != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pi, j));
      std::swap(r.row_perm[k], r.row_perm[pi]);
    }
    if (pj != k) {
      for (std::size_t i = 0; i < n; ++i) std::swap(a(i, k), a(i, pj));
      std::swap(r.col_perm[k], r.col_perm[pj]);
    }
    r.pivots.push_back(best);
    if (best == 0.0) continue;
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx l = a(i, k) / a(k, k);
      a(i, k) = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
    }
  }
  return r;
}

/// ||A||_inf * ||A^-1||_inf, or +inf for a singular matrix.
inline double condition_inf(const CMatrix& a) {
  try {
    return a.norm_inf() * inverse(a).norm_inf();
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace cmt
