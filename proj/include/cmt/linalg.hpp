#pragma once

// Matrix invariants for the Calogero-Moser code. Eigenvalues come from
// characteristic polynomial roots, not from an iterative eigensolver.

#include <algorithm>
#include <cmath>
#include <vector>

#include "cmt/core.hpp"
#include "cmt/matrix.hpp"
#include "cmt/polynomial.hpp"

namespace cmt {

inline CMatrix commutator(const CMatrix& x, const CMatrix& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::SizeMismatch, "commutator of different sizes");
  return x * y - y * x;
}

/// Pivot magnitudes under complete pivoting, divided by ||M||_inf.
inline std::vector<double> relative_pivots(const CMatrix& m) {
  const double scale = m.norm_inf();
  auto piv = complete_pivoting(m).pivots;
  for (auto& p : piv) p = scale > 0.0 ? p / scale : 0.0;
  return piv;
}

/// Number of pivots above tol * ||M||_inf.
inline std::size_t rank(const CMatrix& m, double tol = kDefaultTolerances.rank) {
  std::size_t r = 0;
  for (const double p : relative_pivots(m))
    if (p > tol) ++r;
  return r;
}

/// det(xI - M) by the Faddeev-LeVerrier recursion.
inline Poly char_poly(const CMatrix& m, std::size_t size_cap = kDefaultTolerances.size_cap) {
  const std::size_t n = m.size();
  if (n > size_cap) throw Error(ErrorCode::SizeCap, "matrix exceeds the characteristic-polynomial size cap");
  std::vector<cplx> c(n + 1);
  c[n] = 1.0;
  CMatrix aux(n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    aux = m * aux;
    aux.add_identity(c[n - k + 1]);
    c[n - k] = -(m * aux).trace() / static_cast<double>(k);
  }
  return Poly(std::move(c), 0.0);
}

inline std::vector<cplx> eigenvalues(const CMatrix& m, double tol = kDefaultTolerances.root,
                                     std::size_t size_cap = kDefaultTolerances.size_cap) {
  return roots(char_poly(m, size_cap), tol);
}

/// Lexicographic (real, imag) order, with parts closer than eps treated as equal.
inline bool canonical_less(cplx a, cplx b, double eps = kDefaultTolerances.spec) {
  if (a.real() < b.real() - eps) return true;
  if (b.real() < a.real() - eps) return false;
  return a.imag() < b.imag() - eps;
}

/// Insertion sort by canonical_less; stays well defined although the
/// tolerant comparison is not transitive.
template <typename T, typename Key>
void canonical_sort(std::vector<T>& items, Key key, double eps = kDefaultTolerances.spec) {
  for (std::size_t i = 1; i < items.size(); ++i)
    for (std::size_t j = i; j > 0 && canonical_less(key(items[j]), key(items[j - 1]), eps); --j)
      std::swap(items[j], items[j - 1]);
}

struct EigenDecomposition {
  std::vector<cplx> eigenvalues;
  CMatrix basis;          // columns are eigenvectors
  CMatrix basis_inverse;

  CMatrix reconstruct() const { return basis * CMatrix::diagonal(eigenvalues) * basis_inverse; }
};

inline double min_separation(std::span<const cplx> v) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) best = std::min(best, std::abs(v[i] - v[j]));
  return best;
}

namespace detail {

// Unit null vector of a (numerically) rank n-1 matrix from complete pivoting.
inline std::vector<cplx> null_vector(const CMatrix& a) {
  const std::size_t n = a.size();
  const auto cp = complete_pivoting(a);
  std::vector<cplx> yp(n);
  yp[n - 1] = 1.0;
  for (std::size_t i = n - 1; i-- > 0;) {
    cplx s = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) s -= cp.reduced(i, j) * yp[j];
    yp[i] = cp.reduced(i, i) == cplx{} ? cplx{} : s / cp.reduced(i, i);
  }
  std::vector<cplx> v(n);
  for (std::size_t k = 0; k < n; ++k) v[cp.col_perm[k]] = yp[k];
  return v;
}

inline void normalize(std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx z : v) s += std::norm(z);
  s = std::sqrt(s);
  if (s > 0.0)
    for (auto& z : v) z /= s;
}

}  // namespace detail

/// Eigenbasis of a matrix with simple spectrum.
inline EigenDecomposition eigen_decompose(const CMatrix& m, const Tolerances& tols = kDefaultTolerances) {
  const std::size_t n = m.size();
  auto lambdas = eigenvalues(m, tols.root, tols.size_cap);
  const double scale = std::max(1.0, m.norm_inf());
  if (min_separation(lambdas) <= tols.spec * scale)
    throw Error(ErrorCode::DefectiveOrClustered, "spectrum is not simple");
  canonical_sort(lambdas, [](cplx z) { return z; }, tols.spec);

  CMatrix basis(n);
  for (std::size_t k = 0; k < n; ++k) {
    CMatrix shifted = m;
    shifted.add_identity(-lambdas[k]);
    auto v = detail::null_vector(shifted);
    detail::normalize(v);
    // one step of inverse iteration, nudged off the exact eigenvalue
    CMatrix near = shifted;
    near.add_identity(-std::numeric_limits<double>::epsilon() * scale);
    const auto f = lu_factor(near);
    if (!f.singular) {
      auto w = lu_solve(f, v);
      detail::normalize(w);
      if (std::all_of(w.begin(), w.end(), [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }))
        v = std::move(w);
    }
    for (std::size_t i = 0; i < n; ++i) basis(i, k) = v[i];
  }
  if (condition_inf(basis) > 1e12) throw Error(ErrorCode::ConditioningFailure, "eigenbasis is near-singular");
  CMatrix basis_inverse = inverse(basis);
  const CMatrix frame = basis_inverse * m * basis;
  for (std::size_t k = 0; k < n; ++k) lambdas[k] = frame(k, k);

  EigenDecomposition ed{std::move(lambdas), std::move(basis), std::move(basis_inverse)};
  if ((ed.reconstruct() - m).norm_inf() > tols.recon * scale)
    throw Error(ErrorCode::ConditioningFailure, "eigen reconstruction error above tolerance");
  return ed;
}

inline Certified is_simple_spectrum(const CMatrix& m, double tol, std::size_t size_cap = kDefaultTolerances.size_cap) {
  if (m.size() == 1) return {true, 1.0};
  return has_simple_roots(char_poly(m, size_cap), tol);
}

/// |Res(charpoly M, charpoly N)| > tol; both are monic so no degree rescaling is needed.
inline Certified spectra_disjoint(const CMatrix& m, const CMatrix& n, double tol,
                                  std::size_t size_cap = kDefaultTolerances.size_cap) {
  const double value = std::abs(resultant(char_poly(m, size_cap), char_poly(n, size_cap)));
  return {value > tol, value};
}

inline CMatrix conjugate(const CMatrix& m, const CMatrix& a, const CMatrix& a_inv, double tol = 1e-9) {
  if (m.size() != a.size() || a.size() != a_inv.size())
    throw Error(ErrorCode::SizeMismatch, "conjugate: sizes differ");
  const double err = (a * a_inv - CMatrix::identity(a.size())).norm_inf();
  if (err > tol * std::max(1.0, a.norm_inf() * a_inv.norm_inf()))
    throw Error(ErrorCode::NotInverse, "conjugator and inverse do not multiply to I");
  return a * m * a_inv;
}

}  // namespace cmt
