// SPDX-License-Identifier: Apache-2.0
#include <random>

#include <gtest/gtest.h>

#include "risce/error.hpp"
#include "risce/simulation.hpp"
#include "risce/tensor.hpp"

using namespace risce;

namespace {

CMatrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  return rayleigh_channel(rows, cols, seed);
}

Tensor3 random_tensor(Index i, Index j, Index k, std::uint64_t seed) {
  Rng rng(seed);
  Tensor3 t(i, j, k);
  for (Index c = 0; c < k; ++c) t.set_frontal_slice(c, complex_gaussian(i, j, rng));
  return t;
}

// Brute-force column-wise Kronecker product.
CMatrix naive_khatri_rao(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols());
  for (Index n = 0; n < a.cols(); ++n)
    for (Index k = 0; k < a.rows(); ++k)
      for (Index m = 0; m < b.rows(); ++m) out(k * b.rows() + m, n) = a(k, n) * b(m, n);
  return out;
}

}  // namespace

TEST(Tensor3, LayoutIsModeOneFastest) {
  Tensor3 t(2, 3, 4);
  t(1, 2, 3) = {5.0, -1.0};
  EXPECT_EQ(t(1, 2, 3), Complex(5.0, -1.0));
  EXPECT_EQ(t.size(), 24);
  EXPECT_EQ(t.frontal_slice(3)(1, 2), Complex(5.0, -1.0));
  EXPECT_THROW(Tensor3(0, 1, 1), DimensionError);
}

TEST(KhatriRao, Identity) {
  const CMatrix i2 = CMatrix::Identity(2, 2);
  CMatrix expected = CMatrix::Zero(4, 2);
  expected(0, 0) = 1.0;
  expected(3, 1) = 1.0;
  EXPECT_EQ(khatri_rao(i2, i2), expected);
}

TEST(KhatriRao, SingleRows) {
  CMatrix a(1, 2), b(1, 2);
  a << 1.0, 2.0;
  b << 3.0, 4.0;
  CMatrix expected(1, 2);
  expected << 3.0, 8.0;
  EXPECT_EQ(khatri_rao(a, b), expected);
}

TEST(KhatriRao, MatchesBruteForce) {
  const CMatrix a = random_matrix(3, 2, 1);
  const CMatrix b = random_matrix(4, 2, 2);
  EXPECT_EQ(khatri_rao(a, b), naive_khatri_rao(a, b));
  EXPECT_THROW(khatri_rao(a, random_matrix(4, 3, 3)), DimensionError);
}

TEST(KhatriRao, GenericFactorsHaveFullColumnRank) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CMatrix kr = khatri_rao(random_matrix(3, 6, seed), random_matrix(2, 6, seed + 100));
    EXPECT_EQ(pseudo_inverse(kr).rank, 6) << seed;
  }
}

TEST(Unfold, ScalarTensor) {
  Tensor3 t(1, 1, 1);
  t(0, 0, 0) = {2.0, 3.0};
  for (int mode = 1; mode <= 3; ++mode) {
    const CMatrix m = unfold(t, mode);
    ASSERT_EQ(m.size(), 1);
    EXPECT_EQ(m(0, 0), Complex(2.0, 3.0));
  }
  EXPECT_THROW(unfold(t, 4), DomainError);
}

TEST(Unfold, RankOneMatchesTripleLoop) {
  const CMatrix h = random_matrix(2, 1, 11), g = random_matrix(2, 1, 12), s = random_matrix(2, 1, 13);
  Tensor3 t(2, 2, 2);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j)
      for (Index k = 0; k < 2; ++k) t(i, j, k) = h(i, 0) * g(j, 0) * s(k, 0);
  const CMatrix expected = h * khatri_rao(s, g).transpose();
  const CMatrix m1 = unfold(t, 1);
  for (Index r = 0; r < 2; ++r)
    for (Index c = 0; c < 4; ++c) EXPECT_NEAR(std::abs(m1(r, c) - expected(r, c)), 0.0, 1e-15);
}

TEST(Unfold, FoldRoundTripIsExact) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<Index> dim(1, 8);
  for (int trial = 0; trial < 60; ++trial) {
    const Index i = dim(rng), j = dim(rng), k = dim(rng);
    const Tensor3 t = random_tensor(i, j, k, 1000 + trial);
    for (int mode = 1; mode <= 3; ++mode) EXPECT_EQ(fold(unfold(t, mode), mode, t.dims()), t);
  }
}

TEST(Fold, DegenerateShapesAndMismatch) {
  const CMatrix one = CMatrix::Constant(1, 1, Complex(4.0, 0.0));
  EXPECT_EQ(fold(one, 2, {1, 1, 1})(0, 0, 0), Complex(4.0, 0.0));
  CMatrix row(1, 5);
  for (Index c = 0; c < 5; ++c) row(0, c) = static_cast<double>(c);
  const Tensor3 t = fold(row, 1, {1, 5, 1});
  for (Index j = 0; j < 5; ++j) EXPECT_EQ(t(0, j, 0), Complex(static_cast<double>(j), 0.0));
  EXPECT_EQ(unfold(t, 2), row.transpose());
  EXPECT_THROW(fold(row, 1, {1, 4, 1}), DimensionError);
}

TEST(CpReconstruct, Trivial) {
  const CMatrix one = CMatrix::Ones(1, 1);
  EXPECT_EQ(cp_reconstruct(one, one, one)(0, 0, 0), Complex(1.0, 0.0));
  EXPECT_THROW(cp_reconstruct(random_matrix(2, 2, 1), random_matrix(2, 3, 2), random_matrix(2, 2, 3)),
               DimensionError);
}

TEST(CpReconstruct, FrontalSlicesAndUnfoldings) {
  const CMatrix h = random_matrix(3, 2, 21), g = random_matrix(4, 2, 22), s = random_matrix(5, 2, 23);
  const Tensor3 t = cp_reconstruct(h, g, s);
  for (Index k = 0; k < 5; ++k) {
    const CMatrix slice = h * s.row(k).transpose().asDiagonal() * g.transpose();
    EXPECT_LT((t.frontal_slice(k) - slice).norm(), 1e-12);
  }
  EXPECT_LT((unfold(t, 1) - h * khatri_rao(s, g).transpose()).norm(), 1e-12);
  EXPECT_LT((unfold(t, 2) - g * khatri_rao(s, h).transpose()).norm(), 1e-12);
  EXPECT_LT((unfold(t, 3) - s * khatri_rao(g, h).transpose()).norm(), 1e-12);
}

TEST(CpReconstruct, ScalingIndeterminacy) {
  const CMatrix h = random_matrix(3, 2, 31), g = random_matrix(4, 2, 32), s = random_matrix(5, 2, 33);
  const CVector delta = random_matrix(2, 1, 34).col(0);
  const Tensor3 a = cp_reconstruct(h, g, s);
  const Tensor3 b = cp_reconstruct(h * delta.asDiagonal(), g * delta.cwiseInverse().asDiagonal(), s);
  EXPECT_LT((unfold(a, 1) - unfold(b, 1)).norm(), 1e-12);
}

TEST(PseudoInverse, IdentityAndSingularDiagonal) {
  const CMatrix i3 = CMatrix::Identity(3, 3);
  const auto p = pseudo_inverse(i3);
  EXPECT_LT((p.matrix - i3).norm(), 1e-15);
  EXPECT_EQ(p.rank, 3);

  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 2.0;
  const auto q = pseudo_inverse(d);
  EXPECT_EQ(q.rank, 1);
  EXPECT_NEAR(std::abs(q.matrix(0, 0) - 0.5), 0.0, 1e-15);
  EXPECT_EQ(std::abs(q.matrix(1, 1)), 0.0);
  EXPECT_EQ(pseudo_inverse(CMatrix::Zero(2, 3)).rank, 0);
}

TEST(PseudoInverse, FullRankTallIsLeftInverse) {
  const CMatrix a = random_matrix(6, 4, 41);
  const auto p = pseudo_inverse(a);
  EXPECT_EQ(p.rank, 4);
  EXPECT_LT((p.matrix * a - CMatrix::Identity(4, 4)).norm(), 1e-9);
}

// Property: the four Penrose identities on random and rank-deficient inputs.
TEST(PseudoInverse, PenroseIdentities) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<Index> dim(1, 9);
  for (int trial = 0; trial < 100; ++trial) {
    const Index rows = dim(rng), cols = dim(rng);
    const Index rank = std::uniform_int_distribution<Index>(1, std::min(rows, cols))(rng);
    const CMatrix a = random_matrix(rows, rank, 500 + trial) * random_matrix(rank, cols, 900 + trial);
    const auto p = pseudo_inverse(a);
    const CMatrix& x = p.matrix;
    const double scale = a.norm() * x.norm();
    EXPECT_EQ(p.rank, rank);
    EXPECT_LT((a * x * a - a).norm(), 1e-9 * a.norm() * scale);
    EXPECT_LT((x * a * x - x).norm(), 1e-9 * x.norm() * scale);
    EXPECT_LT(((a * x).adjoint() - a * x).norm(), 1e-9 * scale);
    EXPECT_LT(((x * a).adjoint() - x * a).norm(), 1e-9 * scale);
  }
}
