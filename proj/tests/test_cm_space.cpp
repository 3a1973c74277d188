#include <gtest/gtest.h>

#include "cmt/cm_space.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace cmt;
using testing_support::near;

namespace {

CMPoint conjugated(const CMPoint& p, const CMatrix& a) {
  const CMatrix ai = inverse(a);
  return {a * p.x * ai, a * p.y * ai};
}

CMatrix shifted_commutator(const CMPoint& p) {
  CMatrix r = commutator(p.x, p.y);
  r.add_identity(1.0);
  return r;
}

}  // namespace

TEST(Membership, Examples) {
  EXPECT_TRUE(verify_membership(CMatrix{{3.0}}, CMatrix{{-7.0}}).member);
  const cplx a{0.4, 1.0}, b{-2.0, 0.0};
  const CMatrix x{{0.0, 0.0}, {0.0, 1.0}};
  const CMatrix y{{a, -1.0}, {1.0, b}};
  // Direct computation: [X,Y] + I = [[1,1],[1,1]].
  const CMatrix ones{{1.0, 1.0}, {1.0, 1.0}};
  EXPECT_EQ(shifted_commutator({x, y}), ones);
  EXPECT_TRUE(verify_membership(x, y).member);
  const auto zeroed = verify_membership(x, CMatrix(2));
  EXPECT_FALSE(zeroed.member);
  EXPECT_GT(zeroed.residual, 0.5);
}

TEST(PointWithXSpectrum, Examples) {
  const cplx a{1.0, 2.0}, b{-0.5, 0.0};
  const std::vector<cplx> l01{0.0, 1.0}, d{a, b};
  const auto p = point_with_X_spectrum(l01, d);
  EXPECT_EQ(p.y, (CMatrix{{a, -1.0}, {1.0, b}}));

  const std::vector<cplx> one{{2.0, 1.0}}, d1{{0.0, -3.0}};
  const auto q = point_with_X_spectrum(one, d1);
  EXPECT_EQ(q.x, (CMatrix{{cplx{2.0, 1.0}}}));
  EXPECT_EQ(q.y, (CMatrix{{cplx{0.0, -3.0}}}));

  const std::vector<cplx> l012{0.0, 1.0, 2.0}, zero3(3);
  const auto r = point_with_X_spectrum(l012, zero3);
  const CMatrix expected_y{{0.0, -1.0, -0.5}, {1.0, 0.0, -1.0}, {0.5, 1.0, 0.0}};
  EXPECT_EQ(r.y, expected_y);
  EXPECT_LE(oracle::rank_one_defect(shifted_commutator(r)), 1e-12);
  EXPECT_LE(verify_membership(r).residual, 1e-12);
}

TEST(PointWithXSpectrum, RejectsRepeatedEigenvalues) {
  const std::vector<cplx> l{1.0, 1.0}, d{0.0, 0.0};
  try {
    point_with_X_spectrum(l, d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RepeatedEigenvalue);
  }
}

TEST(PointWithXSpectrum, AlwaysMembers) {
  Rng rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const auto l = testing_support::distinct_points(rng, n, 2.0, 0.1);
    const auto d = testing_support::distinct_points(rng, n, 2.0, 0.0);
    const auto p = point_with_X_spectrum(l, d);
    EXPECT_LE(verify_membership(p).residual, 1e-10);
    EXPECT_LE(oracle::rank_one_defect(shifted_commutator(p)), 1e-10);
  }
}

TEST(RandomPoint, DeterministicMembersWithDistinctSeeds) {
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto p = random_point(n, 42), q = random_point(n, 42), r = random_point(n, 43);
    EXPECT_EQ(p.x, q.x);
    EXPECT_EQ(p.y, q.y);
    EXPECT_TRUE(verify_membership(p).member);
    EXPECT_LE(oracle::rank_one_defect(shifted_commutator(p)), 1e-9);
    EXPECT_FALSE(same_point(p, r).same);
  }
}

TEST(TransposeSwap, InvolutionAndMembership) {
  const auto one = transpose_swap(CMPoint{CMatrix{{2.0}}, CMatrix{{5.0}}});
  EXPECT_EQ(one.x, CMatrix{{5.0}});
  EXPECT_EQ(one.y, CMatrix{{2.0}});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = random_point(2 + seed % 4, seed);
    const auto twice = transpose_swap(transpose_swap(p));
    EXPECT_EQ(twice.x, p.x);
    EXPECT_EQ(twice.y, p.y);
    EXPECT_TRUE(verify_membership(transpose_swap(p)).member);
  }
}

TEST(Canonicalize, WilsonPointIsAlreadyNormal) {
  const std::vector<cplx> l{2.0, {0.0, 1.0}, -1.0}, d{10.0, 20.0, 30.0};
  const auto f = canonicalize(point_with_X_spectrum(l, d));
  ASSERT_EQ(f.n, 3u);
  const std::vector<std::pair<cplx, cplx>> expected{{-1.0, 30.0}, {{0.0, 1.0}, 20.0}, {2.0, 10.0}};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_TRUE(near(f.pairs[i].first, expected[i].first, 1e-9));
    EXPECT_TRUE(near(f.pairs[i].second, expected[i].second, 1e-9));
  }
}

TEST(Canonicalize, InvariantUnderConjugationAndTorus) {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const auto l = testing_support::distinct_points(rng, n, 2.0, 0.3);
    const auto d = testing_support::distinct_points(rng, n, 1.0, 0.0);
    const auto base = point_with_X_spectrum(l, d);
    const auto f0 = canonicalize(base);

    const auto a = testing_support::random_conjugator(rng, n);
    EXPECT_LE(canonical_distance(f0, canonicalize(conjugated(base, a))), 1e-7);

    std::vector<cplx> t(n);
    for (auto& z : t) z = rng.in_annulus(0.5, 2.0);
    const auto torus = conjugated(base, CMatrix::diagonal(t));
    const auto frame = wilson_frame(torus);
    EXPECT_LE(canonical_distance(f0, frame.form), 1e-8);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) {
          EXPECT_TRUE(near(frame.y(i, j), 1.0 / (frame.x(i, i) - frame.x(j, j)), 1e-7));
        }
  }
}

TEST(Canonicalize, NeedsSimpleSpectrum) {
  const CMPoint nilpotent{CMatrix{{0.0, 1.0}, {0.0, 0.0}}, CMatrix{{0.0, 0.0}, {1.0, 0.0}}};
  ASSERT_TRUE(verify_membership(nilpotent).member);
  try {
    canonicalize(nilpotent);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSimpleSpectrum);
  }
}

TEST(SamePoint, Examples) {
  Rng rng(14);
  const auto p = random_point(3, 77);
  const auto a = testing_support::random_conjugator(rng, 3);
  EXPECT_TRUE(same_point(p, conjugated(p, a)).same);

  const std::vector<cplx> l{0.0, 1.0, 3.0}, d{1.0, 2.0, 3.0};
  auto d2 = d;
  d2[1] += 1.0;
  const auto cmp = same_point(point_with_X_spectrum(l, d), point_with_X_spectrum(l, d2));
  EXPECT_FALSE(cmp.same);
  EXPECT_NEAR(cmp.distance, 1.0, 1e-9);
}

TEST(SamePoint, OneDimensionalIsCoordinateEquality) {
  const CMPoint a{CMatrix{{1.0}}, CMatrix{{2.0}}};
  const CMPoint b{CMatrix{{1.0}}, CMatrix{{2.0 + 1e-9}}};
  const CMPoint c{CMatrix{{1.0}}, CMatrix{{2.1}}};
  EXPECT_TRUE(same_point(a, b).same);
  EXPECT_FALSE(same_point(a, c).same);
  EXPECT_NEAR(same_point(a, c).distance, 0.1, 1e-12);
}

TEST(ValidateConfiguration, RejectsDuplicatesAndNonMembers) {
  const auto p = random_point(2, 5);
  Configuration dup{{Block{2, {p, p}}}};
  try {
    validate_configuration(dup);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicatePoints);
  }
  Configuration bad{{Block{2, {CMPoint{p.x, CMatrix(2)}}}}};
  try {
    validate_configuration(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PreconditionViolated);
  }
  EXPECT_NO_THROW(validate_configuration(Configuration{{Block{2, {p, random_point(2, 6)}}}}));
}
