#include "cornerlab/identities.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cornerlab {

namespace {

constexpr double kPi = std::numbers::pi;
using GK61 = boost::math::quadrature::gauss_kronrod<double, 61>;
using GK31 = boost::math::quadrature::gauss_kronrod<double, 31>;

double norm_sq(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

// Adaptive GK61 over [a, b] in unit panels.
template <class F>
QuadResult integrate_panels(F&& f, double a, double b, const QuadratureSpec& q, double panel = 1.0) {
  QuadResult r;
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / panel)));
  const double w = (b - a) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = a + w * static_cast<double>(i);
    const double hi = i + 1 == n ? b : lo + w;
    double err = 0.0;
    r.value += GK61::integrate(f, lo, hi, static_cast<unsigned>(q.max_subdivisions), q.rel_tol, &err);
    r.error += err;
  }
  return r;
}

// dt/t integral of f(t) with t = e^u. The integrand is assumed to live near
// t ~ 1/sqrt(A) and decay like t^2 below and Gaussian-fast above.
template <class F>
QuadResult integrate_dt_over_t(F&& f, double A, const QuadratureSpec& q) {
  double lo, hi;
  if (q.t_range) {
    lo = std::log(q.t_range->first);
    hi = std::log(q.t_range->second);
  } else {
    const double u0 = -0.5 * std::log(A);
    // Lower tail ~ e^{2u}: below abs_tol/10 after 0.5 log(10 / abs_tol) + margin.
    lo = u0 - 0.5 * std::log(10.0 / q.abs_tol) - 2.0;
    hi = u0 + 3.5;
  }
  return integrate_panels([&](double u) { return f(std::exp(u)); }, lo, hi, q);
}

void check_pair(std::span<const double> xi, std::span<const double> eta) {
  if (xi.empty() || xi.size() != eta.size()) throw std::invalid_argument("xi and eta must be d-vectors of equal size");
  for (double v : xi)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite frequency");
  for (double v : eta)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite frequency");
  if (norm_sq(xi) + norm_sq(eta) == 0.0) throw std::invalid_argument("(xi, eta) = (0, 0) is excluded");
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0) || !(rel_tol > 0)) throw std::invalid_argument("quadrature tolerances must be positive");
  if (max_subdivisions == 0) throw std::invalid_argument("max_subdivisions must be positive");
  if (t_range && !(t_range->first > 0 && t_range->first < t_range->second))
    throw std::invalid_argument("t_range must satisfy 0 < t_min < t_max");
}

QuadResult verify_pifourier(std::span<const double> xi, std::span<const double> eta, double alpha, double beta,
                            const QuadratureSpec& q) {
  q.validate();
  check_pair(xi, eta);
  if (!(alpha > 0) || !(beta > 0)) throw std::invalid_argument("alpha and beta must be positive");
  const std::size_t d = xi.size();
  const double X = norm_sq(xi), Y = norm_sq(eta);
  // |g_s^(v)|^2 = e^{-2 pi s^2 ‖v‖^2}, |h^i_s^(v)|^2 = (2 pi s v_i)^2 |g_s^(v)|^2.
  auto integrand = [&](double t) {
    const double a = alpha * t, b = beta * t;
    const double G = std::exp(-2.0 * kPi * (a * a * X + b * b * Y));
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double hx = 2.0 * kPi * a * xi[i];
      const double hy = 2.0 * kPi * b * eta[i];
      s += (hx * hx + hy * hy) * G;
    }
    return s;
  };
  return integrate_dt_over_t(integrand, 2.0 * kPi * (alpha * alpha * X + beta * beta * Y), q);
}

QuadResult verify_tel_pair(double alpha, std::span<const double> xi, std::span<const double> eta,
                           const QuadratureSpec& q) {
  q.validate();
  check_pair(xi, eta);
  if (!(alpha > 0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
  const double P = norm_sq(xi) + norm_sq(eta);
  double S = 0.0;
  for (std::size_t i = 0; i < xi.size(); ++i) S += (xi[i] + eta[i]) * (xi[i] + eta[i]);
  const double A2 = alpha * alpha * S;
  auto integrand = [&](double t) {
    const double t2 = t * t;
    const double e = std::exp(-kPi * t2 * (P + A2));
    return 2.0 * kPi * t2 * (P + A2) * e;
  };
  return integrate_dt_over_t(integrand, kPi * (P + A2), q);
}

TelescopingReport verify_telescoping_theta(const GridFunction& F, double alpha, double beta,
                                           const ThetaOptions& options) {
  if (F.dims() != 2) throw std::invalid_argument("telescoping check is implemented for d = 1");
  TelescopingReport r;
  const auto hg = theta_form(F, ThetaKernel::h(alpha), ThetaKernel::g(beta), options);
  const auto gh = theta_form(F, ThetaKernel::g(alpha), ThetaKernel::h(beta), options);
  r.h_g = hg.report.value;
  r.g_h = gh.report.value;
  r.lhs = r.h_g + r.g_h;
  r.rhs = kPi * F.lp_norm_pow(4.0);
  r.relative_gap = r.rhs > 0.0 ? std::abs(r.lhs - r.rhs) / r.rhs : std::abs(r.lhs);
  r.t_steps = hg.t_steps;
  return r;
}

namespace {

// int_1^inf e^{-pi r^2 / b^2} b^{-nu-1} db with b = e^u; the tail beyond U is
// below e^{-nu U} / nu.
QuadResult gauss_superposition(double nu, double r, const QuadratureSpec& q) {
  const double U = std::log1p(r) + 40.0 / nu + 2.0;
  const double r2 = r * r;
  return integrate_panels([&](double u) { return std::exp(-kPi * r2 * std::exp(-2.0 * u) - nu * u); }, 0.0, U, q);
}

}  // namespace

SchwartzGaussReport verify_schwartzgauss(double nu, std::span<const double> radii, double reference_radius,
                                         const QuadratureSpec& q) {
  q.validate();
  if (!(nu > 0) || !std::isfinite(nu)) throw std::invalid_argument("nu must be positive");
  if (radii.empty()) throw std::invalid_argument("need at least one radius");
  if (!(reference_radius > 0) || !std::isfinite(reference_radius))
    throw std::invalid_argument("reference radius must be positive");
  SchwartzGaussReport rep;
  rep.nu = nu;
  rep.limit_constant = 0.5 * std::pow(kPi, -0.5 * nu) * std::tgamma(0.5 * nu);
  for (double r : radii) {
    if (!(r >= 0) || !std::isfinite(r)) throw std::invalid_argument("radii must be finite and nonnegative");
    SchwartzGaussRow row;
    row.radius = r;
    row.lhs = std::pow(1.0 + r, -nu);
    const auto res = gauss_superposition(nu, r, q);
    row.rhs = res.value;
    row.error = res.error;
    row.ratio = row.lhs / row.rhs;
    rep.rows.push_back(row);
  }
  rep.reference_radius = reference_radius;
  rep.asymptotic_constant = gauss_superposition(nu, reference_radius, q).value * std::pow(reference_radius, nu);
  rep.ratio_min = rep.rows.front().ratio;
  rep.ratio_max = rep.ratio_min;
  for (const auto& row : rep.rows) {
    rep.ratio_min = std::min(rep.ratio_min, row.ratio);
    rep.ratio_max = std::max(rep.ratio_max, row.ratio);
  }
  rep.ratio_spread = rep.ratio_max / rep.ratio_min;
  rep.constant_error = std::abs(rep.asymptotic_constant - rep.limit_constant);
  return rep;
}

RadialBump RadialBump::annulus() {
  RadialBump b;
  b.inner = 1.0;
  b.outer = 2.0;
  b.profile = [](double r) {
    if (!(r > 1.0 && r < 2.0)) return 0.0;
    const double u = r - 1.5;
    return std::exp(-1.0 / (1.0 - 4.0 * u * u));
  };
  return b;
}

void RadialBump::validate() const {
  if (!profile) throw std::invalid_argument("radial bump has no profile");
  if (!(inner > 0) || !(outer > inner)) throw std::invalid_argument("bump support must be an annulus 0 < inner < outer");
  bool nonzero = false;
  for (int i = 0; i <= 256; ++i) {
    const double r = inner + (outer - inner) * i / 256.0;
    const double v = profile(r);
    if (!(v >= 0) || !std::isfinite(v)) throw std::invalid_argument("radial bump must be finite and nonnegative");
    nonzero |= v > 0;
  }
  if (!nonzero) throw std::invalid_argument("radial bump is identically zero");
}

DReport compute_D(const RadialBump& phi, const std::vector<std::vector<double>>& samples, const QuadratureSpec& q) {
  phi.validate();
  q.validate();
  if (samples.empty()) throw std::invalid_argument("compute_D needs at least one sample");
  DReport rep;
  for (const auto& s : samples) {
    const double rho = std::sqrt(norm_sq(s));
    if (!(rho > 0) || !std::isfinite(rho)) throw std::invalid_argument("compute_D sample must be nonzero and finite");
    auto integrand = [&](double u) {
      const double r = std::exp(u) * rho;
      return phi.profile(r) * r * r * std::exp(-kPi * r * r);
    };
    const double lo = std::log(phi.inner / rho), hi = std::log(phi.outer / rho);
    rep.values.push_back(integrate_panels(integrand, lo, hi, q, hi - lo).value);
  }
  double s = 0.0;
  for (double v : rep.values) s += v;
  rep.D = s / static_cast<double>(rep.values.size());
  const auto [mn, mx] = std::minmax_element(rep.values.begin(), rep.values.end());
  rep.spread = *mx - *mn;
  return rep;
}

namespace {

// int_{R^2} c exp(-pi x^T A x) by nested quadrature on the box where the
// exponent exceeds -45.
QuadResult gaussian_plane_integral(double a11, double a12, double a22, double c, const QuadratureSpec& q) {
  const double det = a11 * a22 - a12 * a12;
  if (!(det > 0)) throw std::invalid_argument("degenerate quadratic form");
  const double Lx = std::sqrt(45.0 / kPi * a22 / det);
  const double Ly = std::sqrt(45.0 / kPi * a11 / det);
  const auto depth = static_cast<unsigned>(q.max_subdivisions);
  QuadResult r;
  auto inner = [&](double x) {
    auto f = [&](double y) { return c * std::exp(-kPi * (a11 * x * x + 2.0 * a12 * x * y + a22 * y * y)); };
    return GK61::integrate(f, -Ly, Ly, depth, q.rel_tol * 0.1);
  };
  r.value = GK61::integrate(inner, -Lx, Lx, depth, q.rel_tol, &r.error);
  return r;
}

}  // namespace

SubspaceFourierReport verify_subspace_fourier(const std::array<double, 4>& widths, const QuadratureSpec& q) {
  q.validate();
  for (double w : widths)
    if (!(w > 1e-6 && w < 1e6) || !std::isfinite(w))
      throw std::invalid_argument("Gaussian widths must lie in (1e-6, 1e6); degenerate factors are rejected");
  const double w1 = widths[0], w2 = widths[1], w3 = widths[2], w4 = widths[3];
  SubspaceFourierReport rep;
  // H^ = prod exp(-pi w_i^2 z_i^2) on (xi, eta, -xi-eta, -xi-eta).
  const double s = w3 * w3 + w4 * w4;
  const auto lhs = gaussian_plane_integral(w1 * w1 + s, s, w2 * w2 + s, 1.0, q);
  // H = prod w_i^{-1} exp(-pi z_i^2 / w_i^2) on (-p-q, -p-q, -p, -q).
  const double c = 1.0 / (w1 * w1) + 1.0 / (w2 * w2);
  const auto rhs =
      gaussian_plane_integral(c + 1.0 / (w3 * w3), c, c + 1.0 / (w4 * w4), 1.0 / (w1 * w2 * w3 * w4), q);
  rep.lhs = lhs.value;
  rep.lhs_error = lhs.error;
  rep.rhs = rhs.value;
  rep.rhs_error = rhs.error;
  return rep;
}

namespace {

// Breakpoints of a d = 1 shell difference on [0, outer].
std::vector<double> shell_breaks(const ShellDifference& k) {
  std::vector<double> b{0.0, k.thin().inner_radius(), k.thin().lambda(), k.thin().outer_radius(),
                        k.wide().inner_radius(), k.wide().lambda(), k.wide().outer_radius()};
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

template <class F>
double integrate_shell(const ShellDifference& k, double xi, F&& f) {
  const auto br = shell_breaks(k);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const double a = br[i], b = br[i + 1];
    const auto pieces = static_cast<std::size_t>(std::ceil((b - a) * std::abs(xi) * 4.0)) + 1;
    const double w = (b - a) / static_cast<double>(pieces);
    for (std::size_t j = 0; j < pieces; ++j)
      total += GK31::integrate(f, a + w * static_cast<double>(j), a + w * static_cast<double>(j + 1), 6, 1e-13);
  }
  return total;
}

}  // namespace

double shell_difference_fourier(const ShellDifference& k, double xi) {
  if (k.thin().d() != 1) throw std::invalid_argument("symbol evaluation is implemented for d = 1");
  auto f = [&](double s) {
    const double v[1] = {s};
    return 2.0 * k(v) * std::cos(2.0 * kPi * s * xi);
  };
  return integrate_shell(k, xi, f);
}

double lacunary_symbol(const LacunaryKernel& K, double xi, double eta) {
  if (K.d() != 1) throw std::invalid_argument("symbol evaluation is implemented for d = 1");
  double m = 0.0;
  for (const auto& part : K.parts()) m += shell_difference_fourier(part, xi) * shell_difference_fourier(part, eta);
  return m;
}

SymbolReport symbol_estimate_check(const LacunaryKernel& K, std::size_t orders, std::span<const double> radii,
                                   std::size_t directions) {
  if (K.d() != 1) throw std::invalid_argument("symbol estimates are implemented for d = 1");
  if (orders > 2) throw std::invalid_argument("symbol orders above 2 are not supported");
  if (radii.empty() || directions == 0) throw std::invalid_argument("need radii and directions");
  for (double r : radii)
    if (!(r > 0) || !std::isfinite(r)) throw std::invalid_argument("symbol radii must be positive");

  SymbolReport rep;
  for (const auto& part : K.parts()) {
    const double l1 = integrate_shell(part, 0.0, [&](double s) {
      const double v[1] = {s};
      return 2.0 * std::abs(part(v));
    });
    rep.l1_bound += l1 * l1;
  }

  for (std::size_t total = 0; total <= orders; ++total)
    for (std::size_t a = total + 1; a-- > 0;) {
      SymbolRow row;
      row.order_xi = a;
      row.order_eta = total - a;
      row.radii.assign(radii.begin(), radii.end());
      rep.rows.push_back(row);
    }

  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    const double r = radii[ri];
    const double h = r * 1e-3;
    for (auto& row : rep.rows) row.scaled_max.push_back(0.0);
    for (std::size_t k = 0; k < directions; ++k) {
      const double th = kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(directions);
      const double x = r * std::cos(th), y = r * std::sin(th);
      // m is a sum of products, so the stencil needs three transforms per axis.
      const int span = orders == 0 ? 0 : 1;
      std::vector<std::array<double, 3>> fx, fy;
      for (const auto& part : K.parts()) {
        std::array<double, 3> a{}, b{};
        for (int i = -span; i <= span; ++i) {
          a[i + 1] = shell_difference_fourier(part, x + i * h);
          b[i + 1] = shell_difference_fourier(part, y + i * h);
        }
        fx.push_back(a);
        fy.push_back(b);
      }
      auto m = [&](int i, int j) {
        double v = 0.0;
        for (std::size_t q = 0; q < fx.size(); ++q) v += fx[q][i + 1] * fy[q][j + 1];
        return v;
      };
      const double m00 = m(0, 0);
      double mp0 = 0, mm0 = 0, m0p = 0, m0m = 0, mpp = 0, mpm = 0, mmp = 0, mmm = 0;
      if (orders >= 1) {
        mp0 = m(1, 0);
        mm0 = m(-1, 0);
        m0p = m(0, 1);
        m0m = m(0, -1);
      }
      if (orders >= 2) {
        mpp = m(1, 1);
        mpm = m(1, -1);
        mmp = m(-1, 1);
        mmm = m(-1, -1);
      }
      for (auto& row : rep.rows) {
        double v = 0.0;
        if (row.order_xi == 0 && row.order_eta == 0) v = m00;
        else if (row.order_xi == 1 && row.order_eta == 0) v = (mp0 - mm0) / (2 * h);
        else if (row.order_xi == 0 && row.order_eta == 1) v = (m0p - m0m) / (2 * h);
        else if (row.order_xi == 2) v = (mp0 - 2 * m00 + mm0) / (h * h);
        else if (row.order_eta == 2) v = (m0p - 2 * m00 + m0m) / (h * h);
        else v = (mpp - mpm - mmp + mmm) / (4 * h * h);
        const double scaled = std::abs(v) * std::pow(r, static_cast<double>(row.order_xi + row.order_eta));
        row.scaled_max.back() = std::max(row.scaled_max.back(), scaled);
      }
    }
  }
  for (auto& row : rep.rows) row.sup = *std::max_element(row.scaled_max.begin(), row.scaled_max.end());
  return rep;
}

}  // namespace cornerlab
