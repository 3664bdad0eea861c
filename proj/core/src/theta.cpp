#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cornerlab/counting_forms.hpp"

namespace cornerlab {

ThetaKernel ThetaKernel::g(double alpha) {
  if (!(alpha > 0) || !std::isfinite(alpha)) throw std::invalid_argument("dilation alpha must be positive");
  return {Kind::gaussian, alpha};
}

ThetaKernel ThetaKernel::h(double alpha) {
  if (!(alpha > 0) || !std::isfinite(alpha)) throw std::invalid_argument("dilation alpha must be positive");
  return {Kind::derivative, alpha};
}

std::string ThetaKernel::name() const {
  return (kind == Kind::gaussian ? "g_" : "h_") + std::to_string(alpha);
}

namespace {

// g_sigma(z) = sigma^{-1} exp(-pi z^2 / sigma^2), the autocorrelation of g_s
// with sigma = sqrt(2) s.
double g_sigma(double z, double sigma) noexcept {
  const double u = z / sigma;
  return std::exp(-std::numbers::pi * u * u) / sigma;
}

double g_sigma_dd(double z, double sigma) noexcept {
  const double c = 2.0 * std::numbers::pi / (sigma * sigma);
  return g_sigma(z, sigma) * (c * c * z * z - c);
}

// Second antiderivative of g_sigma.
double G2(double z, double sigma) noexcept {
  const double Phi = 0.5 * std::erfc(-std::sqrt(std::numbers::pi) * z / sigma);
  return z * Phi + sigma / (2.0 * std::numbers::pi) * std::exp(-std::numbers::pi * z * z / (sigma * sigma));
}

}  // namespace

std::vector<double> theta_cell_kernel(const ThetaKernel& psi, double t, double spacing, std::size_t n) {
  if (!(t > 0) || !(spacing > 0)) throw std::invalid_argument("t and spacing must be positive");
  const double a = psi.alpha * t;
  const double sigma = std::numbers::sqrt2 * a;
  const double h = spacing;
  std::vector<double> V(n);
  using Rule = boost::math::quadrature::gauss<double, 20>;
  for (std::size_t k = 0; k < n; ++k) {
    const double c = -static_cast<double>(k) * h;
    if (sigma > 8.0 * h) {
      // Smooth on the scale of a cell: integrate against the tent directly.
      auto integrand = [&](double z) {
        const double tent = h - std::abs(z);
        const double K = psi.kind == ThetaKernel::Kind::gaussian ? g_sigma(c + z, sigma) : -a * a * g_sigma_dd(c + z, sigma);
        return K * tent;
      };
      V[k] = Rule::integrate(integrand, -h, 0.0) + Rule::integrate(integrand, 0.0, h);
    } else if (psi.kind == ThetaKernel::Kind::gaussian) {
      V[k] = G2(c + h, sigma) - 2.0 * G2(c, sigma) + G2(c - h, sigma);
    } else {
      V[k] = -a * a * (g_sigma(c + h, sigma) - 2.0 * g_sigma(c, sigma) + g_sigma(c - h, sigma));
    }
  }
  return V;
}

namespace {

using Clock = std::chrono::steady_clock;

struct TGrid {
  std::vector<double> t;
  std::vector<double> w;  // trapezoid weights in log t
};

TGrid make_t_grid(double t_min, double t_max, double per_octave) {
  if (!(t_min > 0) || !(t_max > t_min)) throw std::invalid_argument("need 0 < t_min < t_max");
  if (!(per_octave >= 8.0)) throw std::invalid_argument("t-grid too coarse: need at least 8 points per octave");
  const double octaves = std::log2(t_max / t_min);
  const auto steps = static_cast<std::size_t>(std::ceil(octaves * per_octave)) + 1;
  TGrid g;
  const double du = std::log(t_max / t_min) / static_cast<double>(steps - 1);
  for (std::size_t i = 0; i < steps; ++i) {
    g.t.push_back(t_min * std::exp(du * static_cast<double>(i)));
    g.w.push_back((i == 0 || i + 1 == steps) ? 0.5 * du : du);
  }
  return g;
}

// Weighted pairwise sum over |k| with multiplicity 2 for k != 0.
inline double mult(std::size_t k) noexcept { return k == 0 ? 1.0 : 2.0; }

}  // namespace

ThetaReport theta_form(const GridFunction& F, const ThetaKernel& psi, const ThetaKernel& phi,
                       const ThetaOptions& options) {
  const auto t0 = Clock::now();
  if (F.dims() != 2) throw std::invalid_argument("theta form is implemented for F on R x R");
  const auto& spec = F.spec();
  const std::size_t n0 = spec.shape[0], n1 = spec.shape[1];
  const double h = spec.spacing;
  const double L = std::max(spec.side(0), spec.side(1));

  ThetaReport out;
  out.t_min = options.t_min.value_or(h / 32.0);
  out.t_max = options.t_max.value_or(16.0 * L);
  const TGrid tg = make_t_grid(out.t_min, out.t_max, options.points_per_octave);
  out.t_steps = tg.t.size();
  out.certificate_requested = options.certify;

  // The route that carries a Gram form whose weights are nonnegative.
  ThetaRoute route = options.route;
  bool certifiable = false;
  if (options.certify) {
    if (phi.nonnegative()) {
      route = ThetaRoute::x_slot;
      certifiable = true;
    } else if (psi.nonnegative()) {
      route = ThetaRoute::xprime_slot;
      certifiable = true;
    }
  }

  const auto Fv = F.values();
  auto Fat = [&](std::size_t i, std::size_t a) { return Fv[i * n1 + a]; };

  double F4 = 0.0;
  for (double v : Fv) F4 += v * v * v * v;
  const double scale = std::max(F4, std::numeric_limits<double>::min());

  // S(di, da) for di, da >= 0.
  std::vector<double> S;
  if (route == ThetaRoute::fast) {
    S.assign(n0 * n1, 0.0);
    for (std::size_t di = 0; di < n0; ++di)
      for (std::size_t da = 0; da < n1; ++da) {
        double s = 0.0;
        for (std::size_t i = 0; i + di < n0; ++i)
          for (std::size_t a = 0; a + da < n1; ++a)
            s += Fat(i, a) * Fat(i + di, a) * Fat(i, a + da) * Fat(i + di, a + da);
        S[di * n1 + da] = s;
      }
  }

  bool certificate = certifiable;
  std::vector<double> per_t(tg.t.size(), 0.0);
  auto eval_t = [&](std::size_t ti) {
    const double t = tg.t[ti];
    const auto V = theta_cell_kernel(psi, t, h, n0);
    const auto W = theta_cell_kernel(phi, t, h, n1);
    double total = 0.0;
    if (route == ThetaRoute::fast) {
      for (std::size_t di = 0; di < n0; ++di) {
        double row = 0.0;
        for (std::size_t da = 0; da < n1; ++da) row += mult(da) * W[da] * S[di * n1 + da];
        total += mult(di) * V[di] * row;
      }
    } else if (route == ThetaRoute::x_slot) {
      // sum_{a,b} W(a-b) <P_ab, V P_ab>, P_ab(i) = F(i,a) F(i,b).
      double vabs = 0.0, wmax = 0.0;
      for (double v : V) vabs += 2.0 * std::abs(v);
      for (double w : W) wmax = std::max(wmax, std::abs(w));
      std::vector<double> P(n0);
      for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = a; b < n1; ++b) {
          double pp = 0.0;
          for (std::size_t i = 0; i < n0; ++i) {
            P[i] = Fat(i, a) * Fat(i, b);
            pp += P[i] * P[i];
          }
          double q = 0.0;
          for (std::size_t i = 0; i < n0; ++i) {
            if (P[i] == 0.0) continue;
            double inner = V[0] * P[i];
            for (std::size_t j = i + 1; j < n0; ++j) inner += 2.0 * V[j - i] * P[j];
            q += P[i] * inner;
          }
          const double wab = W[b - a];
          total += (a == b ? 1.0 : 2.0) * wab * q;
          if (certifiable) {
            if (q < -1e-12 * vabs * pp) certificate = false;
            if (wab < -1e-14 * wmax) certificate = false;
          }
        }
    } else {
      // sum_{i,j} V(i-j) <R_ij, W R_ij>, R_ij(a) = F(i,a) F(j,a).
      double wabs = 0.0, vmax = 0.0;
      for (double w : W) wabs += 2.0 * std::abs(w);
      for (double v : V) vmax = std::max(vmax, std::abs(v));
      std::vector<double> Rv(n1);
      for (std::size_t i = 0; i < n0; ++i)
        for (std::size_t j = i; j < n0; ++j) {
          double rr = 0.0;
          for (std::size_t a = 0; a < n1; ++a) {
            Rv[a] = Fat(i, a) * Fat(j, a);
            rr += Rv[a] * Rv[a];
          }
          double q = 0.0;
          for (std::size_t a = 0; a < n1; ++a) {
            if (Rv[a] == 0.0) continue;
            double inner = W[0] * Rv[a];
            for (std::size_t b = a + 1; b < n1; ++b) inner += 2.0 * W[b - a] * Rv[b];
            q += Rv[a] * inner;
          }
          const double vij = V[j - i];
          total += (i == j ? 1.0 : 2.0) * vij * q;
          if (certifiable) {
            if (q < -1e-12 * wabs * rr) certificate = false;
            if (vij < -1e-14 * vmax) certificate = false;
          }
        }
    }
    per_t[ti] = tg.w[ti] * total;
  };

  for (std::size_t ti = 0; ti < tg.t.size(); ++ti) eval_t(ti);
  const double value = options.method == SumMethod::direct
                           ? [&] {
                               double s = 0.0;
                               for (double v : per_t) s += v;
                               return s;
                             }()
                           : pairwise_sum(per_t);

  FormReport& r = out.report;
  r.form = "theta[" + psi.name() + "," + phi.name() + "]";
  r.value = value;
  r.normalization = F.lp_norm_pow(4.0);
  r.ratio = r.normalization > 0.0 ? value / r.normalization : 0.0;
  r.grid = GridInfo::of(spec);
  r.method = options.method;
  r.details["t_min"] = out.t_min;
  r.details["t_max"] = out.t_max;
  r.details["t_steps"] = static_cast<double>(out.t_steps);
  r.details["points_per_octave"] = options.points_per_octave;
  r.notes["route"] = route == ThetaRoute::fast ? "fast" : route == ThetaRoute::x_slot ? "x_slot" : "xprime_slot";
  out.certificate = certificate && (value >= -1e-12 * scale * h * h);
  r.details["certificate"] = out.certificate ? 1.0 : 0.0;
  r.elapsed_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return out;
}

}  // namespace cornerlab
