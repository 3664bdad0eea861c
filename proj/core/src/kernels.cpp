#include "cornerlab/kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cornerlab {

namespace {

double unit_bump(double u) noexcept {
  const double q = 1.0 - u * u;
  return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

}  // namespace

double SmoothWindow::unit_bump_integral() {
  static const double value = [] {
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    // Symmetric; integrate one half.
    const double half = gauss_kronrod<double, 61>::integrate(unit_bump, 0.0, 1.0, 20, 1e-15, &err);
    return 2.0 * half;
  }();
  return value;
}

SmoothWindow::SmoothWindow(double bump_halfwidth) : a_(bump_halfwidth) {
  if (!(bump_halfwidth > 1.0) || !std::isfinite(bump_halfwidth))
    throw std::invalid_argument("bump half-width must exceed 1 so that psi_hat(1) > 0");
  c_ = 1.0 / (a_ * unit_bump_integral());
}

double SmoothWindow::operator()(double xi) const noexcept { return c_ * unit_bump(xi / a_); }

double smooth_window_eval(const SmoothWindow& w, double xi) { return w(xi); }

WindowKernel::WindowKernel(double lambda, double epsilon, LpExponent p, std::size_t d, SmoothWindow window)
    : lambda_(lambda), epsilon_(epsilon), p_(p), d_(d), window_(window) {
  if (!(lambda > 0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
  if (!(epsilon > 0) || epsilon > 1.0) throw std::invalid_argument("epsilon must lie in (0, 1]");
  p_.validate();
  if (p_.infinite) throw std::invalid_argument("shell windows need a finite exponent p");
  if (d == 0) throw std::invalid_argument("dimension must be positive");
}

double WindowKernel::radial(double u) const noexcept {
  return std::pow(lambda_, -static_cast<double>(d_)) / epsilon_ * window_((1.0 - u) / epsilon_);
}

double WindowKernel::operator()(std::span<const double> s) const {
  if (s.size() != d_) throw std::invalid_argument("kernel argument has wrong dimension");
  double u = 0.0;
  for (double c : s) u += std::pow(std::abs(c) / lambda_, p_.p);
  return radial(u);
}

double WindowKernel::sup() const noexcept {
  return std::pow(lambda_, -static_cast<double>(d_)) / epsilon_ * window_.peak();
}

double WindowKernel::inner_radius() const noexcept {
  const double u = 1.0 - epsilon_ * window_.bump_halfwidth();
  return u > 0.0 ? lambda_ * std::pow(u, 1.0 / p_.p) : 0.0;
}

double WindowKernel::outer_radius() const noexcept {
  return lambda_ * std::pow(1.0 + epsilon_ * window_.bump_halfwidth(), 1.0 / p_.p);
}

double lp_ball_volume(double p, std::size_t d) {
  const double dd = static_cast<double>(d);
  return std::pow(2.0 * std::tgamma(1.0 + 1.0 / p), dd) / std::tgamma(1.0 + dd / p);
}

double WindowKernel::mass() const {
  using boost::math::quadrature::gauss_kronrod;
  const double p = p_.p;
  const double dd = static_cast<double>(d_);
  const double area = lp_ball_volume(p, d_) * dd;
  const double a = window_.bump_halfwidth();
  const double lo = std::pow(std::max(0.0, 1.0 - epsilon_ * a), 1.0 / p);
  const double hi = std::pow(1.0 + epsilon_ * a, 1.0 / p);
  auto integrand = [&](double r) {
    return window_((1.0 - std::pow(r, p)) / epsilon_) / epsilon_ * area * std::pow(r, dd - 1.0);
  };
  double err = 0.0;
  const double value = gauss_kronrod<double, 61>::integrate(integrand, lo, hi, 20, 1e-13, &err);
  if (!(err <= 1e-9 * std::max(1.0, std::abs(value))))
    throw std::runtime_error("radial quadrature for the window mass did not converge");
  return value;
}

double c1(double epsilon, LpExponent p, std::size_t d, const SmoothWindow& window) {
  if (!(epsilon > 0) || epsilon > 1.0) throw std::invalid_argument("epsilon must lie in (0, 1]");
  if (epsilon == 1.0) return 1.0;
  const WindowKernel thin(1.0, epsilon, p, d, window);
  const WindowKernel wide(1.0, 1.0, p, d, window);
  return thin.mass() / wide.mass();
}

double eta_floor(double lambda, LpExponent p, double spacing) {
  if (!(lambda > 0) || !(spacing > 0)) throw std::invalid_argument("lambda and spacing must be positive");
  p.validate();
  if (p.infinite) throw std::invalid_argument("thin shells need a finite exponent p");
  return 4.0 * spacing * p.p / lambda;
}

WindowKernel thin_shell_surrogate(double lambda, LpExponent p, std::size_t d, double eta, double spacing,
                                  const SmoothWindow& window) {
  const double floor = eta_floor(lambda, p, spacing);
  if (!(eta >= floor))
    throw std::invalid_argument("thin-shell parameter eta=" + std::to_string(eta) + " is below the resolution floor " +
                                std::to_string(floor));
  return WindowKernel(lambda, eta, p, d, window);
}

double GaussianFamily::g(std::span<const double> x) const {
  if (x.size() != d) throw std::invalid_argument("Gaussian argument has wrong dimension");
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  return std::exp(-std::numbers::pi * r2);
}

double GaussianFamily::h(std::size_t i, std::span<const double> x) const {
  if (i < 1 || i > d) throw std::invalid_argument("partial derivative index out of range");
  return -2.0 * std::numbers::pi * x[i - 1] * g(x);
}

double GaussianFamily::g_hat(std::span<const double> xi) const { return g(xi); }

std::complex<double> GaussianFamily::h_hat(std::size_t i, std::span<const double> xi) const {
  if (i < 1 || i > d) throw std::invalid_argument("partial derivative index out of range");
  return {0.0, 2.0 * std::numbers::pi * xi[i - 1] * g_hat(xi)};
}

double gaussian_eval(const GaussianFamily& fam, std::span<const double> x) { return fam.g(x); }
double gaussian_partial(const GaussianFamily& fam, std::size_t i, std::span<const double> x) { return fam.h(i, x); }

RealFn dilate(RealFn f, std::size_t d, double t) {
  if (!(t > 0) || !std::isfinite(t)) throw std::invalid_argument("dilation factor must be positive");
  const double scale = std::pow(t, -static_cast<double>(d));
  return [f = std::move(f), t, scale](std::span<const double> x) {
    std::vector<double> y(x.begin(), x.end());
    for (double& c : y) c /= t;
    return scale * f(y);
  };
}

GridFunction dilate(const GridFunction& f, double t) { return f.dilate(t); }

}  // namespace cornerlab
