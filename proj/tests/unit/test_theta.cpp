#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

#include "cornerlab/counting_forms.hpp"

using namespace cornerlab;

namespace {

// psi_t * psi_t~ (z) by direct quadrature over the real line.
double autocorr(const ThetaKernel& psi, double t, double z) {
  const double a = psi.alpha * t;
  auto bump = [&](double x) {
    const double u = x / a;
    const double g = std::exp(-std::numbers::pi * u * u) / a;
    return psi.kind == ThetaKernel::Kind::gaussian ? g : -2.0 * std::numbers::pi * u * g;
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  return GK::integrate([&](double x) { return bump(x + z) * bump(x); }, -12 * a, 12 * a, 12, 1e-13);
}

// int_{cell 0} int_{cell k} autocorr(x - y) dx dy = int tent(z) autocorr(z - k h) dz.
double cell_pair(const ThetaKernel& psi, double t, double h, int k) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  auto f = [&](double z) { return (h - std::abs(z)) * autocorr(psi, t, z - k * h); };
  return GK::integrate(f, -h, 0.0, 10, 1e-12) + GK::integrate(f, 0.0, h, 10, 1e-12);
}

}  // namespace

TEST(ThetaCellKernel, MatchesDirectDoubleIntegral) {
  const double h = 0.25;
  for (double t : {0.05, 0.3, 4.0}) {
    for (const auto& psi : {ThetaKernel::g(1.0), ThetaKernel::h(1.3)}) {
      const auto V = theta_cell_kernel(psi, t, h, 6);
      for (int k = 0; k < 6; ++k) {
        const double ref = cell_pair(psi, t, h, k);
        EXPECT_NEAR(V[k], ref, 1e-9 * (std::abs(ref) + h * h * 1e-3)) << psi.name() << " t=" << t << " k=" << k;
      }
    }
  }
}

TEST(Theta, RoutesAgree) {
  const auto F = random_uniform(GridSpec::cube(2, 12, 3.0), -1.0, 1.0, 5);
  ThetaOptions o;
  o.points_per_octave = 8;
  const auto fast = theta_form(F, ThetaKernel::h(1.0), ThetaKernel::g(1.0), o).report.value;
  o.route = ThetaRoute::x_slot;
  const auto xs = theta_form(F, ThetaKernel::h(1.0), ThetaKernel::g(1.0), o).report.value;
  o.route = ThetaRoute::xprime_slot;
  const auto xp = theta_form(F, ThetaKernel::h(1.0), ThetaKernel::g(1.0), o).report.value;
  EXPECT_NEAR(xs, fast, 1e-11 * std::abs(fast));
  EXPECT_NEAR(xp, fast, 1e-11 * std::abs(fast));
}

TEST(Theta, CertificateAndNonnegativity) {
  const auto F = random_uniform(GridSpec::cube(2, 12, 3.0), -1.0, 1.0, 6);
  ThetaOptions o;
  o.points_per_octave = 8;
  o.certify = true;
  const auto a = theta_form(F, ThetaKernel::h(1.0), ThetaKernel::g(2.0), o);
  EXPECT_TRUE(a.certificate);
  EXPECT_GE(a.report.value, 0.0);
  const auto b = theta_form(F, ThetaKernel::g(0.5), ThetaKernel::h(1.0), o);
  EXPECT_TRUE(b.certificate);
  EXPECT_GE(b.report.value, 0.0);
}

TEST(Theta, ZeroFunctionAndValidation) {
  const GridFunction zero(GridSpec::cube(2, 8, 2.0));
  EXPECT_EQ(theta_form(zero, ThetaKernel::g(1), ThetaKernel::h(1)).report.value, 0.0);
  ThetaOptions coarse;
  coarse.points_per_octave = 4;
  EXPECT_THROW(theta_form(zero, ThetaKernel::g(1), ThetaKernel::h(1), coarse), std::invalid_argument);
  EXPECT_THROW(ThetaKernel::g(-1.0), std::invalid_argument);
  const GridFunction line(GridSpec::cube(1, 8, 2.0));
  EXPECT_THROW(theta_form(line, ThetaKernel::g(1), ThetaKernel::h(1)), std::invalid_argument);
}
