#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "thetalab/sampling.hpp"
#include "thetalab/symp.hpp"
#include "thetalab/theta.hpp"

namespace thetalab {
namespace {

using lcplx = std::complex<long double>;

// Direct lattice sum in long double over the box |p_a| <= radius.
cplx direct_sum(const Characteristic& m, const PeriodMatrix& tau, const CVector& z, const MultiIndex& d,
                int radius) {
  const int g = tau.genus();
  const long double pi = std::numbers::pi_v<long double>;
  const lcplx i(0, 1);
  std::vector<int> p(static_cast<std::size_t>(g), -radius);
  lcplx total = 0;
  while (true) {
    std::vector<long double> n(static_cast<std::size_t>(g));
    for (int a = 0; a < g; ++a) n[a] = p[a] + 0.5L * m.eps_bit(a);
    lcplx expo = 0;
    for (int a = 0; a < g; ++a) {
      for (int b = 0; b < g; ++b) expo += pi * i * n[a] * lcplx(tau(a, b)) * n[b];
      expo += 2.0L * pi * i * n[a] * (lcplx(z(a)) + 0.5L * m.delta_bit(a));
    }
    lcplx term = std::exp(expo);
    for (int a = 0; a < g; ++a) {
      for (int k = 0; k < d[a]; ++k) term *= 2.0L * pi * i * n[a];
    }
    total += term;
    int a = 0;
    while (a < g && p[a] == radius) p[a++] = -radius;
    if (a == g) break;
    ++p[a];
  }
  return {static_cast<double>(total.real()), static_cast<double>(total.imag())};
}

TEST(PeriodMatrix, ValidatesInput) {
  CMatrix nonsym(2, 2);
  nonsym << cplx(0, 1), 0.1, 0.2, cplx(0, 1);
  EXPECT_THROW(PeriodMatrix{nonsym}, PeriodMatrixError);
  CMatrix indefinite(2, 2);
  indefinite << cplx(0, 1), cplx(0, 2), cplx(0, 2), cplx(0, 1);
  EXPECT_THROW(PeriodMatrix{indefinite}, PeriodMatrixError);
  EXPECT_NEAR(PeriodMatrix::diagonal({cplx(0, 2), cplx(0.3, 0.5)}).min_imag_eigenvalue(), 0.5, 1e-14);
}

TEST(PeriodMatrix, JsonRoundTrip) {
  Rng rng(1);
  const auto tau = random_period_matrix(3, rng);
  const auto back = PeriodMatrix::from_json(tau.to_json());
  EXPECT_EQ(back.entries(), tau.entries());
  EXPECT_THROW(PeriodMatrix::from_json(nlohmann::json::parse(R"({"g": 2, "entries": [[[0,1]]]})")),
               PeriodMatrixError);
}

TEST(Eval, ThetaNullAtI) {
  const auto tau = PeriodMatrix::diagonal({cplx(0, 1), cplx(0, 1)});
  const cplx v = theta_constant(Characteristic::zero(2), tau);
  const cplx one = direct_sum(Characteristic::zero(1), PeriodMatrix::diagonal({cplx(0, 1)}), CVector::Zero(1),
                              {0}, 20);
  EXPECT_NEAR(one.real(), 1.0864348112133080, 1e-14);
  EXPECT_NEAR(std::abs(v - one * one), 0.0, 1e-12);
}

TEST(Eval, MatchesDirectSumWithDerivatives) {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const int g = 1 + static_cast<int>(rng.below(3));
    const auto tau = random_period_matrix(g, rng);
    const auto m = random_characteristic(g, rng);
    CVector z(g);
    for (int a = 0; a < g; ++a) z(a) = 0.3 * rng.unit_box();
    MultiIndex d(static_cast<std::size_t>(g), 0);
    for (int k = 0; k < 3; ++k) ++d[rng.below(static_cast<std::uint64_t>(g))];
    const cplx expected = direct_sum(m, tau, z, d, g == 3 ? 10 : 20);
    const auto res = eval(m, tau, z, d);
    EXPECT_LT(std::abs(res.value - expected), 1e-10 * std::max(1.0, std::abs(expected))) << "rep " << rep;
  }
}

TEST(Eval, ExtendedAgreesWithDouble) {
  Rng rng(2);
  const auto tau = random_period_matrix(3, rng);
  ThetaOptions ext;
  ext.precision = Precision::Extended;
  const auto m = Characteristic::zero(3);
  EXPECT_NEAR(std::abs(theta_constant(m, tau) - theta_constant(m, tau, ext)), 0.0, 1e-12);
}

TEST(Eval, OddConstantsAndEvenGradientsVanish) {
  Rng rng(4);
  for (int rep = 0; rep < 30; ++rep) {
    const int g = 1 + static_cast<int>(rng.below(4));
    const auto tau = random_period_matrix(g, rng);
    const auto m = random_characteristic(g, rng);
    if (m.is_even()) {
      EXPECT_LT(gradient(m, tau).cwiseAbs().maxCoeff(), 1e-11);
    } else {
      EXPECT_LT(std::abs(theta_constant(m, tau)), 1e-11);
      EXPECT_LT(std::abs(tau_derivative(m, tau, 0, g - 1)), 1e-11);
    }
  }
}

TEST(Eval, ParitySymmetryInZ) {
  Rng rng(6);
  for (int rep = 0; rep < 200; ++rep) {
    const int g = 1 + static_cast<int>(rng.below(3));
    const auto tau = random_period_matrix(g, rng);
    const auto m = random_characteristic(g, rng);
    CVector z(g);
    for (int a = 0; a < g; ++a) z(a) = 0.5 * rng.unit_box();
    const MultiIndex none(static_cast<std::size_t>(g), 0);
    const ThetaOptions opts;
    const cplx diff = eval(m, tau, -z, none).value - static_cast<double>(parity_sign(m)) * eval(m, tau, z, none).value;
    ASSERT_LT(std::abs(diff), 10 * opts.tol);
  }
}

TEST(Eval, FactorizesOverBlocks) {
  Rng rng(8);
  for (int rep = 0; rep < 30; ++rep) {
    const auto t1 = random_period_matrix(2, rng);
    const auto t2 = random_period_matrix(2, rng);
    CMatrix big = CMatrix::Zero(4, 4);
    big.topLeftCorner(2, 2) = t1.entries();
    big.bottomRightCorner(2, 2) = t2.entries();
    const auto m1 = random_characteristic(2, rng);
    const auto m2 = random_characteristic(2, rng);
    const cplx whole = theta_constant(m1.direct_sum(m2), PeriodMatrix(big));
    EXPECT_LT(std::abs(whole - theta_constant(m1, t1) * theta_constant(m2, t2)), 1e-11);
  }
}

TEST(Eval, DiagonalProductFormula) {
  Rng rng(9);
  for (int rep = 0; rep < 30; ++rep) {
    const auto t = random_diagonal(4, rng);
    const auto m = random_characteristic(4, rng);
    cplx prod = 1;
    for (int a = 0; a < 4; ++a) prod *= theta_constant(m.column(a), PeriodMatrix::diagonal({t[a]}));
    EXPECT_LT(std::abs(theta_constant(m, PeriodMatrix::diagonal(t)) - prod), 1e-11);
  }
}

TEST(Eval, MonotoneInTolerance) {
  Rng rng(10);
  const auto tau = random_period_matrix(3, rng);
  const auto m = Characteristic::parse("[100;110]");
  double tol = 1e-4;
  cplx prev = eval(m, tau, CVector::Zero(3), {0, 0, 0}, {tol}).value;
  for (int i = 0; i < 8; ++i) {
    tol /= 2;
    const cplx next = eval(m, tau, CVector::Zero(3), {0, 0, 0}, {tol}).value;
    EXPECT_LE(std::abs(next - prev), 2 * tol);
    prev = next;
  }
}

TEST(Eval, ReportsUnreachableTolerance) {
  ThetaOptions opts;
  opts.max_radius = 1;
  const auto tau = PeriodMatrix::diagonal({cplx(0, 0.3), cplx(0, 0.3)});
  EXPECT_THROW(theta_constant(Characteristic::zero(2), tau, opts), ThetaError);
  EXPECT_THROW(eval(Characteristic::zero(2), tau, CVector::Zero(2), {4, 3}), ThetaError);
}

TEST(TailBound, DecreasesWithRadius) {
  double prev = tail_bound(3, 0.8, 0.0, 2, 1);
  for (int r = 2; r < 10; ++r) {
    const double next = tail_bound(3, 0.8, 0.0, 2, r);
    EXPECT_LT(next, prev);
    prev = next;
  }
}

TEST(Hessian, NormalFormAtDiagonal) {
  const std::vector<cplx> t = {cplx(0.1, 1.1), cplx(-0.2, 0.9), cplx(0.3, 1.3), cplx(0.05, 1.0)};
  const auto m0 = normal_form(4, 2);
  const auto h = hessian(m0, PeriodMatrix::diagonal(t));
  const auto odd = Characteristic::parse("[1;1]");
  const auto even = Characteristic::zero(1);
  const auto d1 = genus1_derivatives(odd, t[0], 1)[1];
  const auto d2 = genus1_derivatives(odd, t[1], 1)[1];
  const cplx expected = d1 * d2 * genus1_derivatives(even, t[2], 0)[0] * genus1_derivatives(even, t[3], 0)[0];
  EXPECT_LT(std::abs(h(0, 1) - expected), 1e-11);
  EXPECT_LT(std::abs(h(0, 1) - h(1, 0)), 1e-14);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if ((a == 0 && b == 1) || (a == 1 && b == 0)) continue;
      EXPECT_LT(std::abs(h(a, b)), 1e-11) << a << "," << b;
    }
  }
  EXPECT_EQ(numerical_rank(h, 1e-8), 2);
}

TEST(TauDerivative, TripleCharacteristicSupport) {
  const std::vector<cplx> t = {cplx(0.1, 1.1), cplx(-0.2, 0.9), cplx(0.3, 1.3), cplx(0.05, 1.0)};
  const auto m = triple_characteristic(special_fundamental_system(4), 0, 1, 2);
  const auto grad = tau_gradient(m, PeriodMatrix::diagonal(t));
  for (int a = 0; a < 4; ++a) {
    for (int b = a; b < 4; ++b) {
      if (a == 0 && b == 2) {
        EXPECT_GT(std::abs(grad(a, b)), 1e-3);
      } else {
        EXPECT_LT(std::abs(grad(a, b)), 1e-11) << a << "," << b;
      }
    }
  }
}

TEST(TauDerivative, MatchesFiniteDifferences) {
  Rng rng(12);
  for (int rep = 0; rep < 40; ++rep) {
    const int g = 1 + static_cast<int>(rng.below(4));
    const auto tau = random_period_matrix(g, rng);
    Characteristic m = random_characteristic(g, rng);
    while (!m.is_even()) m = random_characteristic(g, rng);
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(g)));
    const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(g)));
    const double h = 1e-5;
    const cplx fd = (theta_constant(m, tau.with_entry(j, k, tau(j, k) + h)) -
                     theta_constant(m, tau.with_entry(j, k, tau(j, k) - h))) /
                    (2 * h);
    const cplx exact = tau_derivative(m, tau, j, k);
    EXPECT_LT(std::abs(fd - exact), 1e-6 * std::abs(exact)) << "rep " << rep;
  }
}

TEST(NumericalRank, ThresholdDefinition) {
  EXPECT_EQ(numerical_rank(CMatrix::Zero(3, 3), 1e-8), 0);
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1;
  m(1, 1) = 1e-12;
  EXPECT_EQ(numerical_rank(m, 1e-8), 1);
  EXPECT_EQ(numerical_rank(CMatrix::Identity(3, 3), 1e-8), 3);
}

TEST(Genus1, DerivativesMatchGeneralEvaluation) {
  const cplx t(0.2, 1.1);
  const auto m = Characteristic::parse("[1;0]");
  const auto ds = genus1_derivatives(m, t, 4);
  const auto tau = PeriodMatrix::diagonal({t});
  for (int k = 0; k <= 4; ++k) {
    EXPECT_LT(std::abs(ds[k] - eval(m, tau, CVector::Zero(1), {k}).value), 1e-11);
  }
}

}  // namespace
}  // namespace thetalab
