#include <gtest/gtest.h>

#include "cmt/linalg.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace cmt;
using testing_support::near;

namespace {

CMatrix diag(std::initializer_list<cplx> d) { return CMatrix::diagonal(std::vector<cplx>(d)); }

const CMatrix kSwap{{0.0, 1.0}, {1.0, 0.0}};
const CMatrix kJordan{{0.0, 1.0}, {0.0, 0.0}};

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Commutator, VanishesOnCommutingPairs) {
  Rng rng(1);
  const auto m = testing_support::random_matrix(rng, 4);
  EXPECT_LE(commutator(m, m).max_abs(), 1e-15);
  EXPECT_EQ(commutator(m, CMatrix::identity(4)), CMatrix(4));
}

TEST(Commutator, DiagonalTimesAnything) {
  // [diag(x), Y]_ij = (x_i - x_j) y_ij
  Rng rng(2);
  const std::vector<cplx> x{1.0, {0.0, 2.0}, -3.0};
  const auto y = testing_support::random_matrix(rng, 3);
  const auto c = commutator(CMatrix::diagonal(x), y);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_TRUE(near(c(i, j), (x[i] - x[j]) * y(i, j), 1e-14));
}

TEST(Rank, Examples) {
  EXPECT_EQ(rank(CMatrix{{1.0, 1.0}, {1.0, 1.0}}), 1u);
  EXPECT_EQ(rank(CMatrix::identity(5)), 5u);
  EXPECT_EQ(rank(CMatrix(3)), 0u);
}

TEST(Rank, InvariantUnderConjugation) {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const std::size_t r = 1 + trial % n;
    // Product of n x r and r x n random factors has rank r.
    CMatrix m(n);
    for (std::size_t k = 0; k < r; ++k) {
      std::vector<cplx> u(n), v(n);
      for (auto& z : u) z = rng.in_disk(1.0);
      for (auto& z : v) z = rng.in_disk(1.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) += u[i] * v[j];
    }
    ASSERT_EQ(rank(m), r);
    const auto a = testing_support::random_conjugator(rng, n, 1e3);
    EXPECT_EQ(rank(conjugate(m, a, inverse(a))), r);
  }
}

TEST(CharPoly, Examples) {
  const Poly p = char_poly(diag({1.0, 2.0}));
  EXPECT_EQ(p, Poly(std::vector<cplx>{2.0, -3.0, 1.0}));
  EXPECT_EQ(char_poly(CMatrix(4)), Poly(std::vector<cplx>{0.0, 0.0, 0.0, 0.0, 1.0}));
}

TEST(CharPoly, CompanionMatrixRecoversPolynomial) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 7;
    std::vector<cplx> c(n + 1);
    for (std::size_t k = 0; k < n; ++k) c[k] = rng.in_disk(1.0);
    c[n] = 1.0;
    CMatrix comp(n);
    for (std::size_t i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (std::size_t i = 0; i < n; ++i) comp(i, n - 1) = -c[i];
    const Poly p = char_poly(comp);
    for (std::size_t k = 0; k <= n; ++k) EXPECT_TRUE(near(p[k], c[k], 1e-11));
  }
}

TEST(CharPoly, AgreesWithLeibnizDeterminant) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const auto m = testing_support::random_matrix(rng, n);
    const Poly p = char_poly(m);
    for (int s = 0; s < 3; ++s) {
      const cplx z = rng.in_disk(2.0);
      const cplx expected = oracle::char_poly_at(m, z);
      EXPECT_LE(std::abs(eval_scalar(p, z) - expected), 1e-10 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST(CharPoly, CayleyHamilton) {
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const auto m = testing_support::random_matrix(rng, n, 2.0);
    const double bound = 1e-7 * std::max(1.0, std::pow(m.norm_inf(), static_cast<double>(n)));
    EXPECT_LE(eval_matrix(char_poly(m), m).norm_inf(), bound);
  }
}

TEST(CharPoly, SizeCap) {
  EXPECT_EQ(code_of([] { char_poly(CMatrix::identity(5), 4); }), ErrorCode::SizeCap);
}

TEST(Eigenvalues, Examples) {
  EXPECT_LE(oracle::multiset_distance(eigenvalues(diag({3.0, 5.0})), {3.0, 5.0}), 1e-12);
  EXPECT_LE(oracle::multiset_distance(eigenvalues(kSwap), {1.0, -1.0}), 1e-12);
  CMatrix jordan3(3);
  jordan3(0, 1) = jordan3(1, 2) = 1.0;
  for (const cplx z : eigenvalues(jordan3)) EXPECT_LE(std::abs(z), 1e-12);
}

TEST(Eigenvalues, ConjugationInvariant) {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const auto lambdas = testing_support::distinct_points(rng, n, 2.0, 0.2);
    const auto a = testing_support::random_conjugator(rng, n);
    const auto m = conjugate(CMatrix::diagonal(lambdas), a, inverse(a));
    EXPECT_LE(oracle::multiset_distance(eigenvalues(m), lambdas), 1e-8);
  }
}

TEST(EigenDecompose, DiagonalInput) {
  const auto ed = eigen_decompose(diag({2.0, -1.0, {0.0, 1.0}}));
  // Canonical order: -1, i, 2.
  EXPECT_TRUE(near(ed.eigenvalues[0], -1.0, 1e-12));
  EXPECT_TRUE(near(ed.eigenvalues[1], {0.0, 1.0}, 1e-12));
  EXPECT_TRUE(near(ed.eigenvalues[2], 2.0, 1e-12));
  // Each basis column is a scaled standard vector.
  for (std::size_t j = 0; j < 3; ++j) {
    int nonzero = 0;
    for (std::size_t i = 0; i < 3; ++i) nonzero += std::abs(ed.basis(i, j)) > 1e-12;
    EXPECT_EQ(nonzero, 1);
  }
}

TEST(EigenDecompose, SwapMatrix) {
  const auto ed = eigen_decompose(kSwap);
  ASSERT_TRUE(near(ed.eigenvalues[0], -1.0, 1e-12));
  ASSERT_TRUE(near(ed.eigenvalues[1], 1.0, 1e-12));
  // Directions (1,-1) and (1,1), compared up to scaling.
  EXPECT_TRUE(near(ed.basis(0, 0) + ed.basis(1, 0), 0.0, 1e-12));
  EXPECT_TRUE(near(ed.basis(0, 1) - ed.basis(1, 1), 0.0, 1e-12));
  EXPECT_LE((ed.reconstruct() - kSwap).norm_inf(), 1e-12);
}

TEST(EigenDecompose, JordanBlockIsDefective) {
  EXPECT_EQ(code_of([] { eigen_decompose(kJordan); }), ErrorCode::DefectiveOrClustered);
}

TEST(EigenDecompose, ReconstructsRandomSimpleSpectrumMatrices) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const auto lambdas = testing_support::distinct_points(rng, n, 2.0, 0.3);
    const auto a = testing_support::random_conjugator(rng, n);
    const auto m = conjugate(CMatrix::diagonal(lambdas), a, inverse(a));
    const auto ed = eigen_decompose(m);
    EXPECT_LE((ed.reconstruct() - m).norm_inf(), 1e-8 * m.norm_inf());
    EXPECT_LE((ed.basis * ed.basis_inverse - CMatrix::identity(n)).norm_inf(), 1e-9);
  }
}

TEST(SimpleSpectrum, Examples) {
  EXPECT_TRUE(is_simple_spectrum(diag({0.0, 1.0}), 1e-8).ok);
  EXPECT_FALSE(is_simple_spectrum(kJordan, 1e-8).ok);
  Rng rng(9);
  const auto a = testing_support::random_conjugator(rng, 3);
  EXPECT_TRUE(is_simple_spectrum(conjugate(diag({1.0, 2.0, 3.0}), a, inverse(a)), 1e-8).ok);
}

TEST(SpectraDisjoint, Examples) {
  EXPECT_TRUE(spectra_disjoint(diag({0.0, 1.0}), diag({2.0, 3.0}), 1e-8).ok);
  EXPECT_FALSE(spectra_disjoint(diag({0.0, 1.0}), diag({1.0, 5.0}), 1e-8).ok);
}

TEST(SpectraDisjoint, PlantedSharedEigenvalueAndSymmetry) {
  Rng rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 4;
    auto l1 = testing_support::distinct_points(rng, n, 2.0, 0.2);
    auto l2 = testing_support::distinct_points(rng, n, 2.0, 0.2);
    const bool plant = trial % 2 == 0;
    if (plant) l2[0] = l1[n - 1];
    const auto a = testing_support::random_conjugator(rng, n), b = testing_support::random_conjugator(rng, n);
    const auto m1 = conjugate(CMatrix::diagonal(l1), a, inverse(a));
    const auto m2 = conjugate(CMatrix::diagonal(l2), b, inverse(b));
    const auto fwd = spectra_disjoint(m1, m2, 1e-6), bwd = spectra_disjoint(m2, m1, 1e-6);
    EXPECT_EQ(fwd.ok, bwd.ok);
    EXPECT_NEAR(fwd.value, bwd.value, 1e-9 * std::max(1.0, fwd.value));
    if (plant) {
      EXPECT_FALSE(fwd.ok);
    }
  }
}

TEST(Conjugate, IdentityAndCharPolyInvariance) {
  Rng rng(11);
  const auto m = testing_support::random_matrix(rng, 4);
  EXPECT_EQ(conjugate(m, CMatrix::identity(4), CMatrix::identity(4)), m);
  const auto a = testing_support::random_conjugator(rng, 4);
  const Poly before = char_poly(m), after = char_poly(conjugate(m, a, inverse(a)));
  for (int k = 0; k <= 4; ++k) EXPECT_TRUE(near(before[k], after[k], 1e-9));
}

TEST(Conjugate, RejectsWrongInverse) {
  const CMatrix a{{1.0, 1.0}, {0.0, 1.0}};
  EXPECT_EQ(code_of([&] { conjugate(kSwap, a, a); }), ErrorCode::NotInverse);
}

TEST(CanonicalOrder, TolerantLexicographic) {
  EXPECT_TRUE(canonical_less({1.0, 5.0}, {2.0, 0.0}));
  EXPECT_TRUE(canonical_less({1.0, 0.0}, {1.0 + 1e-12, 1.0}));
  EXPECT_FALSE(canonical_less({1.0, 1.0}, {1.0, 1.0}));
  std::vector<cplx> v{{2.0, 0.0}, {1.0, 3.0}, {1.0, -3.0}};
  canonical_sort(v, [](cplx z) { return z; });
  EXPECT_EQ(v, (std::vector<cplx>{{1.0, -3.0}, {1.0, 3.0}, {2.0, 0.0}}));
}
