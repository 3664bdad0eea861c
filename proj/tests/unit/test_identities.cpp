#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

#include "cornerlab/identities.hpp"
#include "cornerlab/rng.hpp"

using namespace cornerlab;

namespace {

constexpr double kPi = std::numbers::pi;

// Composite Simpson on [a, b] with m (even) panels.
template <class F>
double simpson(F f, double a, double b, int m) {
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST(PiFourier, EqualsPiAndIsScaleInvariant) {
  CounterRng rng(5, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d = 1 + trial % 3;
    std::vector<double> xi(d), eta(d), xi2(d), eta2(d);
    for (std::size_t i = 0; i < d; ++i) {
      xi[i] = rng.next_uniform(-2, 2);
      eta[i] = rng.next_uniform(-2, 2);
      xi2[i] = 2 * xi[i];
      eta2[i] = 2 * eta[i];
    }
    const double a = std::exp(rng.next_uniform(std::log(0.25), std::log(4.0)));
    const double b = std::exp(rng.next_uniform(std::log(0.25), std::log(4.0)));
    const auto r = verify_pifourier(xi, eta, a, b);
    EXPECT_NEAR(r.value, kPi, 1e-9);
    EXPECT_NEAR(verify_pifourier(xi2, eta2, a, b).value, r.value, 1e-9);
  }
  const std::vector<double> zero{0.0};
  EXPECT_THROW(verify_pifourier(zero, zero, 1, 1), std::invalid_argument);
}

TEST(TelPair, EqualsOne) {
  const std::vector<double> xi{1.0}, eta{-1.0};
  EXPECT_NEAR(verify_tel_pair(1.0, xi, eta).value, 1.0, 1e-10);
  const std::vector<double> xi3{0.3, -1.2, 2.0}, eta3{0.5, 0.1, -0.7};
  for (double a : {0.25, 1.0, 3.7}) EXPECT_NEAR(verify_tel_pair(a, xi3, eta3).value, 1.0, 1e-10);
  EXPECT_THROW(verify_tel_pair(0.0, xi, eta), std::invalid_argument);
}

TEST(SchwartzGauss, RhsMatchesIncompleteGamma) {
  const std::vector<double> radii{0.0, 0.5, 1.0, 10.0, 100.0};
  for (double nu : {1.0, 3.0, 5.0}) {
    const auto rep = verify_schwartzgauss(nu, radii);
    ASSERT_EQ(rep.rows.size(), radii.size());
    EXPECT_NEAR(rep.rows[0].rhs, 1.0 / nu, 1e-12);
    EXPECT_NEAR(rep.rows[0].ratio, nu, 1e-10);
    for (std::size_t i = 1; i < radii.size(); ++i) {
      const double r = radii[i];
      const double x = kPi * r * r;
      const double closed = 0.5 * std::pow(x, -nu / 2) * boost::math::tgamma_lower(nu / 2, x);
      EXPECT_NEAR(rep.rows[i].rhs, closed, 1e-10 * closed) << "nu=" << nu << " r=" << r;
      EXPECT_NEAR(rep.rows[i].lhs, std::pow(1 + r, -nu), 1e-15);
    }
    EXPECT_NEAR(rep.limit_constant, 0.5 * std::pow(kPi, -nu / 2) * std::tgamma(nu / 2), 1e-14);
    EXPECT_LT(rep.constant_error, 1e-3);
    EXPECT_NEAR(rep.ratio_spread, rep.ratio_max / rep.ratio_min, 1e-12);
  }
}

TEST(ComputeD, ConstantAcrossSamplesAndMatchesRadialIntegral) {
  const auto phi = RadialBump::annulus();
  std::vector<std::vector<double>> samples{{1.0, 0.0}, {0.0, 3.0}, {0.2, -0.1}, {1.0, 2.0, 3.0, -4.0}};
  const auto rep = compute_D(phi, samples);
  ASSERT_EQ(rep.values.size(), samples.size());
  EXPECT_LT(rep.spread, 1e-12);
  // r = t‖tau‖ turns dt/t into dr/r: D = int phi(r) r e^{-pi r^2} dr.
  const double ref = simpson([&](double r) { return phi.profile(r) * r * std::exp(-kPi * r * r); }, 1.0, 2.0, 20000);
  EXPECT_NEAR(rep.D, ref, 1e-10 * ref);
  EXPECT_THROW(compute_D(phi, {{0.0, 0.0}}), std::invalid_argument);
}

TEST(SubspaceFourier, BothSidesMatchGaussianDeterminant) {
  for (const std::array<double, 4> w : {std::array<double, 4>{1, 1, 1, 1}, {0.5, 2, 1.5, 0.7}, {3, 0.4, 0.9, 1.1}}) {
    const double s = w[2] * w[2] + w[3] * w[3];
    const double det = w[0] * w[0] * w[1] * w[1] + s * (w[0] * w[0] + w[1] * w[1]);
    const double expected = 1.0 / std::sqrt(det);
    const auto rep = verify_subspace_fourier(w);
    EXPECT_NEAR(rep.lhs, expected, 1e-10 * expected);
    EXPECT_NEAR(rep.rhs, expected, 1e-10 * expected);
  }
  EXPECT_THROW(verify_subspace_fourier({1, 1, 0, 1}), std::invalid_argument);
}

TEST(Symbol, ShellDifferenceTransformMatchesDirectIntegral) {
  const ShellDifference k(2.0, 0.3, LpExponent::finite(3), 1);
  EXPECT_NEAR(shell_difference_fourier(k, 0.0), 0.0, 1e-10);
  const double outer = k.wide().outer_radius();
  for (double xi : {0.1, 0.37, 1.3}) {
    auto f = [&](double s) {
      const double x[1] = {s};
      return k(x) * std::cos(2 * kPi * xi * s);
    };
    const double direct = 2.0 * simpson(f, 0.0, outer, 400000);
    EXPECT_NEAR(shell_difference_fourier(k, xi), direct, 1e-7) << xi;
  }
}

TEST(Symbol, BoundedAndNonGrowing) {
  const std::vector<double> radii{0.25, 1.0, 4.0};
  const LacunaryKernel K4(LacunaryScales::dyadic_below(8.0, 4), 0.2, LpExponent::finite(2), 1);
  const LacunaryKernel K6(LacunaryScales::dyadic_below(32.0, 6), 0.2, LpExponent::finite(2), 1);
  const auto r4 = symbol_estimate_check(K4, 2, radii);
  const auto r6 = symbol_estimate_check(K6, 2, radii);
  ASSERT_FALSE(r4.rows.empty());
  EXPECT_EQ(r4.rows.front().order_xi + r4.rows.front().order_eta, 0u);
  EXPECT_LE(r4.rows.front().sup, r4.l1_bound);
  EXPECT_LE(r6.rows.front().sup, r6.l1_bound);
  // Adding lacunary scales leaves the scaled derivatives of the same order.
  for (std::size_t i = 0; i < r4.rows.size(); ++i)
    for (std::size_t j = 0; j < radii.size(); ++j)
      EXPECT_LT(r6.rows[i].scaled_max[j], 4.0 * r4.rows[i].scaled_max[j] + 1e-6);
  EXPECT_EQ(r4.rows.size(), 6u);
  EXPECT_NEAR(lacunary_symbol(K4, 0.0, 0.7), 0.0, 1e-9);
  EXPECT_THROW(symbol_estimate_check(K4, 3, radii), std::invalid_argument);
}
