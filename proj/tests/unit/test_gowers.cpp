#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cornerlab/gowers.hpp"

using namespace cornerlab;

namespace {

double gaussian(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::exp(-std::numbers::pi * s);
}

}  // namespace

TEST(Gowers, RegroupedMatchesNaive) {
  for (std::size_t d : {1u, 2u}) {
    const auto f = random_uniform(GridSpec::cube(d, d == 1 ? 10 : 4, 2.0), -1.0, 1.0, 11);
    for (int k : {2, 3}) {
      const double naive = gowers_power_naive(f, k);
      const auto r = gowers_norm(f, k);
      EXPECT_NEAR(r.power, naive, 1e-12 * std::abs(naive)) << "d=" << d << " k=" << k;
      EXPECT_NEAR(r.value, std::pow(naive, 1.0 / (1 << k)), 1e-12);
      EXPECT_NEAR(gowers_norm(f, k, SumMethod::blocked).power, naive, 1e-12 * std::abs(naive));
    }
  }
  EXPECT_THROW(gowers_norm(random_uniform(GridSpec::cube(1, 4, 1.0), 0, 1, 1), 4), std::invalid_argument);
}

TEST(Gowers, FourierAgrees) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto f = random_uniform(GridSpec::cube(2, 12, 3.0), -1.0, 1.0, seed);
    const double direct = gowers_norm(f, 2).power;
    EXPECT_NEAR(gowers_u2_fourier(f), direct, 1e-10 * direct);
  }
}

TEST(Gowers, IntervalIndicatorClosedForm) {
  // A(k) = n - |k| cells, so the power is h^3 (n^2 + 2 sum_{j<n} j^2) -> 2/3.
  for (std::size_t n : {8u, 64u, 512u}) {
    GridFunction f(GridSpec::cube(1, n, 1.0));
    for (auto& v : f.values()) v = 1.0;
    const double nn = static_cast<double>(n);
    const double expected = (nn * nn + (nn - 1) * nn * (2 * nn - 1) / 3.0) / (nn * nn * nn);
    EXPECT_NEAR(gowers_norm(f, 2).power, expected, 1e-13);
  }
  GridFunction f(GridSpec::cube(1, 4096, 1.0));
  for (auto& v : f.values()) v = 1.0;
  EXPECT_NEAR(gowers_norm(f, 2).power, 2.0 / 3.0, 1e-6);
}

TEST(Gowers, ScalingOfGaussian) {
  for (int k : {2, 3}) {
    const auto r = scaling_check(RealFn(gaussian), 1, 4.0, 256, 2.0, k);
    EXPECT_DOUBLE_EQ(r.exponent, -(1.0 - (k + 1.0) / (1 << k)));
    EXPECT_NEAR(r.predicted, std::pow(2.0, r.exponent), 1e-15);
    EXPECT_LT(r.deviation, 1e-10);
  }
  const auto g = GridFunction::sample(GridSpec({64}, 8.0 / 64, {-4.0}), gaussian);
  EXPECT_LT(scaling_check(g, 0.5, 2).deviation, 0.01);
  EXPECT_THROW(scaling_check(g, 1.0 / 64, 2), std::invalid_argument);
  EXPECT_THROW(scaling_check(RealFn(gaussian), 1, 4.0, 16, 0.05, 2), std::invalid_argument);
}

TEST(Gowers, MonotonicityOnCyclicGroup) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto f = random_uniform(GridSpec::cube(1, 32, 4.0), -1.0, 1.0, seed);
    const auto m = monotonicity_check(f);
    EXPECT_EQ(m.period, 64u);
    EXPECT_TRUE(m.holds);
    EXPECT_LE(m.u2, m.u3 + 1e-12);
  }
}

TEST(Gowers, VonNeumannStatuses) {
  const auto f = random_cell_set(GridSpec::cube(2, 32, 8.0), 0.5, 3);
  const auto g = LatticeKernel::sample(WindowKernel(2.0, 0.5, LpExponent::finite(2), 1), f.spacing());
  const auto ok = von_neumann_check(f, g, 2.0);
  EXPECT_EQ(ok.status, VonNeumannStatus::ok);
  EXPECT_GT(ok.u3, 0.0);
  EXPECT_NEAR(ok.ratio, std::abs(ok.form_value) / ok.normalization, 1e-15);
  LatticeKernel zero(1, f.spacing(), 2);
  zero.finalize();
  EXPECT_EQ(von_neumann_check(f, zero, 2.0).status, VonNeumannStatus::vacuous);
  EXPECT_EQ(to_string(VonNeumannStatus::violation), "violation");
}

TEST(Gowers, LatticeKernelFunctionAndShellGap) {
  const auto k = LatticeKernel::sample(WindowKernel(1.0, 0.5, LpExponent::finite(2), 1), 0.125);
  const auto f = lattice_kernel_function(k);
  EXPECT_NEAR(f.riemann_integral(), k.mass(), 1e-12);
  EXPECT_NEAR(f.spec().coordinate(0, k.radius()), 0.0, 1e-15);
  EXPECT_EQ(shell_window_u3_gap(1.0, 0.5, 0.5, LpExponent::finite(2), 1, 0.125), 0.0);
  EXPECT_GT(shell_window_u3_gap(1.0, 0.5, 0.25, LpExponent::finite(2), 1, 0.125), 0.0);
}
