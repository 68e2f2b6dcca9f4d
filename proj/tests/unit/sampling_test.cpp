#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "thetalab/sampling.hpp"

namespace thetalab {
namespace {

TEST(Rng, SameSeedSameStream) {
  Rng a(99);
  Rng b(99);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next(), b.next());
  Rng c(100);
  EXPECT_NE(Rng(99).next(), c.next());
}

TEST(Rng, UniformRanges) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(rng.below(7), 7U);
  }
  EXPECT_EQ(rng.below(0), 0U);
}

TEST(Sampling, DiagonalBox) {
  Rng rng(2);
  for (const auto& t : random_diagonal(50, rng)) {
    EXPECT_GE(t.imag(), 0.8);
    EXPECT_LE(t.imag(), 2.0);
    EXPECT_LE(std::abs(t.real()), 0.5);
  }
}

TEST(Sampling, GenericDiagonalIsGeneric) {
  Rng rng(3);
  for (int l = 0; l <= 3; ++l) EXPECT_TRUE(is_generic(generic_diagonal(5, l, rng), l));
}

TEST(Sampling, OffDiagonalDirection) {
  Rng rng(4);
  const auto d = random_offdiagonal_direction(4, rng);
  EXPECT_TRUE(d.isApprox(d.transpose()));
  EXPECT_DOUBLE_EQ(d.cwiseAbs().maxCoeff(), 1.0);
  for (int a = 0; a < 4; ++a) EXPECT_EQ(d(a, a), cplx(0));
}

TEST(Sampling, PeriodMatrixIsWellConditioned) {
  Rng rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const auto tau = random_period_matrix(4, rng);
    const Eigen::MatrixXd im = tau.entries().imag();
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(im).eigenvalues().minCoeff(), 0.3 - 1e-12);
  }
}

TEST(Sampling, CharacteristicsCoverTheGroup) {
  Rng rng(6);
  std::vector<int> hits(16, 0);
  for (int i = 0; i < 2000; ++i) {
    const auto m = random_characteristic(2, rng);
    ++hits[static_cast<std::size_t>(m.eps() | (m.delta() << 2))];
  }
  for (int h : hits) EXPECT_GT(h, 0);
}

}  // namespace
}  // namespace thetalab
