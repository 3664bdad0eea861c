#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "cornerlab/kernels.hpp"

using namespace cornerlab;

namespace {

// Composite Simpson rule with n (even) panels.
template <class F>
double simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST(SmoothWindow, UnitIntegralAndPeak) {
  const SmoothWindow w;
  EXPECT_NEAR(simpson([&](double x) { return w(x); }, -2.0, 2.0, 20000), 1.0, 1e-10);
  EXPECT_DOUBLE_EQ(w(0.0), w.peak());
  EXPECT_EQ(w(2.0), 0.0);
  EXPECT_EQ(w(-2.5), 0.0);
  EXPECT_NEAR(SmoothWindow::unit_bump_integral(), 0.443993816168, 1e-11);
}

TEST(WindowKernel, SupportAndSymmetry) {
  const WindowKernel k(4.0, 0.1, LpExponent::finite(3), 1);
  EXPECT_NEAR(k.outer_radius(), 4.0 * std::cbrt(1.2), 1e-12);
  EXPECT_NEAR(k.inner_radius(), 4.0 * std::cbrt(0.8), 1e-12);
  const double out[1] = {k.outer_radius() + 1e-9};
  const double in[1] = {k.inner_radius() - 1e-9};
  EXPECT_EQ(k(out), 0.0);
  EXPECT_EQ(k(in), 0.0);
  const double a[1] = {4.0}, b[1] = {-4.0};
  EXPECT_DOUBLE_EQ(k(a), k(b));
  EXPECT_LE(k(a), k.sup());
}

TEST(WindowKernel, MassMatchesDirectQuadrature) {
  for (double eps : {1.0, 0.3, 0.05}) {
    const WindowKernel k(2.5, eps, LpExponent::finite(3), 1);
    const double R = k.outer_radius();
    const double direct = simpson(
        [&](double s) {
          const double v[1] = {s};
          return k(v);
        },
        -R, R, 400000);
    EXPECT_NEAR(k.mass(), direct, 1e-8) << eps;
  }
}

TEST(WindowKernel, MassIsScaleFreeInTwoDimensions) {
  const WindowKernel k(1.0, 0.5, LpExponent::finite(2), 2);
  const double R = k.outer_radius();
  const int n = 800;
  const double h = 2 * R / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double v[2] = {-R + (i + 0.5) * h, -R + (j + 0.5) * h};
      sum += k(v);
    }
  EXPECT_NEAR(sum * h * h, k.mass(), 1e-4);
  EXPECT_NEAR(k.with_lambda(7.0).mass(), k.mass(), 1e-12);
}

TEST(WindowKernel, C1) {
  EXPECT_EQ(c1(1.0, LpExponent::finite(2), 1), 1.0);
  const double v = c1(0.1, LpExponent::finite(3), 1);
  EXPECT_NEAR(v, WindowKernel(1, 0.1, LpExponent::finite(3), 1).mass() / WindowKernel(1, 1, LpExponent::finite(3), 1).mass(),
              1e-14);
  EXPECT_THROW(c1(0.0, LpExponent::finite(2), 1), std::invalid_argument);
}

TEST(WindowKernel, ThinShellFloor) {
  EXPECT_DOUBLE_EQ(eta_floor(8.0, LpExponent::finite(2), 0.25), 0.25);
  EXPECT_THROW(thin_shell_surrogate(8.0, LpExponent::finite(2), 1, 0.2, 0.25), std::invalid_argument);
  EXPECT_NO_THROW(thin_shell_surrogate(8.0, LpExponent::finite(2), 1, 0.25, 0.25));
  EXPECT_THROW(WindowKernel(1.0, 0.5, LpExponent::infinity(), 1), std::invalid_argument);
}

TEST(Gaussian, DerivativeTransformOnDftGrid) {
  const GaussianFamily fam{1};
  const int n = 512;
  const double L = 16.0, h = L / n;
  for (int k = -20; k <= 20; k += 5) {
    const double xi = k / L;
    std::complex<double> acc = 0.0;
    for (int j = 0; j < n; ++j) {
      const double x[1] = {-L / 2 + j * h};
      acc += fam.h(1, x) * std::exp(std::complex<double>(0, -2 * std::numbers::pi * x[0] * xi));
    }
    acc *= h;
    const double f[1] = {xi};
    EXPECT_LT(std::abs(acc - fam.h_hat(1, f)), 1e-6) << xi;
    EXPECT_NEAR(fam.g_hat(f), std::exp(-std::numbers::pi * xi * xi), 1e-15);
  }
}

TEST(Gaussian, PartialDerivative) {
  const GaussianFamily fam{2};
  const double x[2] = {0.3, -0.2};
  const double e = 1e-6;
  const double xp[2] = {0.3, -0.2 + e}, xm[2] = {0.3, -0.2 - e};
  EXPECT_NEAR(fam.h(2, x), (fam.g(xp) - fam.g(xm)) / (2 * e), 1e-8);
  EXPECT_DOUBLE_EQ(gaussian_partial(fam, 2, x), fam.h(2, x));
  EXPECT_THROW(fam.h(3, x), std::invalid_argument);
}

TEST(Dilation, L1Normalised) {
  const RealFn f = [](std::span<const double> x) { return std::exp(-std::numbers::pi * x[0] * x[0]); };
  const auto ft = dilate(f, 1, 3.0);
  const double x[1] = {1.5}, y[1] = {0.5};
  EXPECT_DOUBLE_EQ(ft(x), f(y) / 3.0);
  EXPECT_NEAR(simpson([&](double s) { const double v[1] = {s}; return ft(v); }, -30, 30, 6000), 1.0, 1e-10);
}

TEST(LatticeKernel, CellAverageMatchesFineSampling) {
  const WindowKernel k(3.0, 0.2, LpExponent::finite(2), 1);
  const double h = 0.25;
  const auto lat = LatticeKernel::sample(k, h);
  for (std::int64_t off : {-13, -12, -10, 0, 11, 12}) {
    const int m = 20000;
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
      const double s[1] = {off * h - h / 2 + (i + 0.5) * h / m};
      acc += k(s);
    }
    const std::int64_t o[1] = {off};
    EXPECT_NEAR(lat.weight(o), acc / m, 1e-7) << off;
  }
  EXPECT_NEAR(lat.mass(), k.mass(), 1e-9);
}

TEST(LatticeKernel, CellAverageMassTwoDimensions) {
  const WindowKernel k(2.0, 0.25, LpExponent::finite(3), 2);
  const auto lat = LatticeKernel::sample(k, 0.125);
  EXPECT_NEAR(lat.mass(), k.mass(), 1e-4 * k.mass());
  const auto pt = LatticeKernel::sample(k, 0.125, KernelSampling::point);
  const std::int64_t o[2] = {16, 0};
  const double s[2] = {2.0, 0.0};
  EXPECT_DOUBLE_EQ(pt.weight(o), k(s));
}

TEST(LatticeKernel, CombineAndNonzeros) {
  const WindowKernel a(2.0, 0.5, LpExponent::finite(2), 1);
  const auto la = LatticeKernel::sample(a, 0.25);
  const auto twice = LatticeKernel::combine(1.0, la, 1.0, la);
  EXPECT_NEAR(twice.mass(), 2.0 * la.mass(), 1e-14);
  const auto zero = LatticeKernel::combine(1.0, la, -1.0, la);
  EXPECT_EQ(zero.nonzeros(), 0u);
  double s = 0.0;
  for (std::size_t i = 0; i < la.nonzeros(); ++i) s += la.nonzero_weight(i);
  EXPECT_NEAR(s * 0.25, la.mass(), 1e-14);
  EXPECT_EQ(parse_kernel_sampling("point"), KernelSampling::point);
}
