#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <numbers>

#include "cornerlab/counting_forms.hpp"
#include "cornerlab/exact.hpp"
#include "cornerlab/gowers.hpp"
#include "cornerlab/harness.hpp"
#include "cornerlab/identities.hpp"
#include "cornerlab/lp_patterns.hpp"
#include "cornerlab/rng.hpp"

namespace cornerlab {

namespace {

using Clock = std::chrono::steady_clock;

void check(RunReport& r, std::string name, std::string invariant, bool passed, double value, double threshold) {
  r.assertions.push_back({std::move(name), std::move(invariant), passed, value, threshold});
}

std::vector<double> random_vector(CounterRng& rng, std::size_t d, double lo, double hi) {
  std::vector<double> v(d);
  for (auto& x : v) x = rng.next_uniform(lo, hi);
  return v;
}

double log_uniform(CounterRng& rng, double lo, double hi) {
  return std::exp(rng.next_uniform(std::log(lo), std::log(hi)));
}

GridSpec corner_grid(const ExperimentConfig& c) { return GridSpec::cube(2 * c.d, c.n, c.N); }

void identity_suite(const ExperimentConfig& c, RunReport& r) {
  const double tol = c.tolerance("identity");

  // pi-telescoping pair in Fourier form and the two-term pair summing to 1.
  {
    CounterRng rng(c.seed, 1);
    Table t{{"trial", "d", "alpha", "beta", "value", "error"}, {}};
    double worst = 0.0;
    for (std::size_t i = 0; i < c.trials; ++i) {
      const auto d = static_cast<std::size_t>(rng.next_int(1, 3));
      auto xi = random_vector(rng, d, -2.0, 2.0);
      auto eta = random_vector(rng, d, -2.0, 2.0);
      const double a = log_uniform(rng, 0.25, 4.0), b = log_uniform(rng, 0.25, 4.0);
      const auto q = verify_pifourier(xi, eta, a, b);
      worst = std::max(worst, std::abs(q.value - std::numbers::pi));
      t.rows.push_back({double(i), double(d), a, b, q.value, q.error});
    }
    r.tables["pifourier"] = std::move(t);
    check(r, "pifourier", "pi-telescoping Fourier identity equals pi", worst <= tol, worst, tol);
  }
  {
    CounterRng rng(c.seed, 2);
    Table t{{"trial", "d", "alpha", "value", "error"}, {}};
    double worst = 0.0;
    for (std::size_t i = 0; i < c.trials; ++i) {
      const auto d = static_cast<std::size_t>(rng.next_int(1, 3));
      auto xi = random_vector(rng, d, -2.0, 2.0);
      auto eta = random_vector(rng, d, -2.0, 2.0);
      const double a = log_uniform(rng, 0.25, 4.0);
      const auto q = verify_tel_pair(a, xi, eta);
      worst = std::max(worst, std::abs(q.value - 1.0));
      t.rows.push_back({double(i), double(d), a, q.value, q.error});
    }
    r.tables["tel_pair"] = std::move(t);
    check(r, "tel_pair", "the two-term pair integrates to one", worst <= tol, worst, tol);
  }

  // D is the same constant for every (xi, eta) != 0.
  {
    CounterRng rng(c.seed, 3);
    std::vector<std::vector<double>> samples;
    const std::size_t dim = 2 * c.d;
    for (std::size_t a = 0; a < dim; ++a) {
      std::vector<double> e(dim, 0.0);
      e[a] = 1.0;
      samples.push_back(e);
    }
    for (double scale : {0.5, 2.0, 10.0}) samples.push_back(random_vector(rng, dim, -scale, scale));
    const auto D = compute_D(RadialBump::annulus(), samples);
    Table t{{"sample", "D"}, {}};
    for (std::size_t i = 0; i < D.values.size(); ++i) t.rows.push_back({double(i), D.values[i]});
    r.tables["constant_D"] = std::move(t);
    const double tol_d = c.tolerance("d_spread");
    check(r, "constant_D", "D independent of direction and scale", D.spread <= tol_d && D.D > 0, D.spread, tol_d);
  }

  // Integral of H^ over a plane equals the integral of H over its complement.
  {
    const double w = 0.7, s = w / std::numbers::sqrt2;
    const std::array<std::array<double, 4>, 3> cases{{{1, 1, 1, 1}, {w, w, s, s}, {0.5, 1.3, 0.8, 2.1}}};
    Table t{{"w1", "w2", "w3", "w4", "lhs", "rhs"}, {}};
    double worst = 0.0;
    for (const auto& ws : cases) {
      const auto rep = verify_subspace_fourier(ws);
      worst = std::max(worst, std::abs(rep.lhs - rep.rhs) / std::max(1.0, std::abs(rep.lhs)));
      t.rows.push_back({ws[0], ws[1], ws[2], ws[3], rep.lhs, rep.rhs});
    }
    r.tables["subspace_fourier"] = std::move(t);
    const double tol_s = c.tolerance("subspace");
    check(r, "subspace_fourier", "plane integral of H^ equals complement integral of H", worst <= tol_s, worst,
          tol_s);
  }

  // Gaussian superposition for nu in {1, 2d + 1}.
  {
    Table t{{"nu", "radius", "lhs", "rhs", "ratio"}, {}};
    const std::vector<double> radii{0.0, 1.0, 10.0, 100.0};
    for (double nu : {1.0, 2.0 * static_cast<double>(c.d) + 1.0}) {
      const auto rep = verify_schwartzgauss(nu, radii);
      for (const auto& row : rep.rows) t.rows.push_back({nu, row.radius, row.lhs, row.rhs, row.ratio});
      const std::string tag = "nu=" + format_number(nu);
      const double spread = c.tolerance("ratio_spread"), ctol = c.tolerance("constant");
      check(r, "schwartzgauss_ratio " + tag, "two-sided comparability over radii", rep.ratio_spread < spread,
            rep.ratio_spread, spread);
      check(r, "schwartzgauss_constant " + tag, "limit constant pi^{-nu/2} Gamma(nu/2) / 2",
            rep.constant_error <= ctol, rep.constant_error, ctol);
    }
    r.tables["schwartzgauss"] = std::move(t);
  }

  // Telescoping at grid scale on one random F.
  {
    const auto F = random_uniform(GridSpec::cube(2, c.n, c.N), -1.0, 1.0, c.seed, 4);
    ThetaOptions opt;
    opt.method = c.method;
    const auto rep = verify_telescoping_theta(F, 1.0, 1.0, opt);
    r.tables["telescoping"] = Table{{"lhs", "rhs", "h_g", "g_h", "relative_gap"},
                                    {{rep.lhs, rep.rhs, rep.h_g, rep.g_h, rep.relative_gap}}};
    const double tt = c.tolerance("telescoping");
    check(r, "telescoping_theta", "Theta_{h,g} + Theta_{g,h} = pi ‖F‖_4^4", rep.relative_gap <= tt,
          rep.relative_gap, tt);
    check(r, "theta_nonnegative", "each Theta summand is nonnegative", rep.h_g >= 0 && rep.g_h >= 0,
          std::min(rep.h_g, rep.g_h), 0.0);
  }

  // Exact binomial and scalar finite-difference identities.
  {
    CounterRng rng(c.seed, 5);
    std::size_t failures = 0;
    for (std::size_t i = 0; i < c.trials; ++i) {
      const int p = static_cast<int>(rng.next_int(1, 4));
      const auto d = static_cast<std::size_t>(rng.next_int(1, 3));
      std::vector<Rational> x(d), s(d);
      for (auto& v : x) v = Rational(rng.next_int(0, 20));
      for (auto& v : s) v = Rational(rng.next_int(0, 20));
      if (binomial_difference_exact(x, s, p) != factorial_norm_pow_exact(s, p)) ++failures;
      const int l = static_cast<int>(rng.next_int(0, p - 1));
      if (scalar_finite_difference_exact(Rational(rng.next_int(-20, 20)), Rational(rng.next_int(-20, 20)), p, l) != 0)
        ++failures;
    }
    check(r, "exact_identities", "binomial difference = p! ‖s‖_p^p; lower differences vanish", failures == 0,
          double(failures), 0.0);
  }
}

void counterexample_gaps(const ExperimentConfig& c, RunReport& r) {
  const int p = static_cast<int>(c.p.p);
  const double h = c.spacing();
  const auto window = LatticeWindow::cube(c.d, 0.0, c.N, h);
  const long cap = ShellSet::cap_for_window(p, c.d, c.N);
  const ShellSet shells = p == 2 ? ShellSet::annuli(c.d, cap) : ShellSet::power_shells(p, c.d, cap);
  const PointSet set = [shells](std::span<const double> x) { return shells.contains(x); };
  const int k = c.k;
  const auto forbidden = p == 2 && k == 3 ? bourgain_forbidden_intervals(static_cast<int>(cap) + 2)
                                          : general_forbidden_intervals(p, static_cast<int>(cap) + 2);
  const auto scan = scan_aps(set, window, k, c.p, forbidden);
  r.tables["scan"] = Table{{"d", "p", "k", "total", "forbidden_hits", "min_side", "max_side"},
                           {{double(c.d), double(p), double(k), double(scan.total), double(scan.forbidden_hits),
                             scan.min_side, scan.max_side}}};
  Table iv{{"n", "lo", "hi"}, {}};
  for (std::size_t i = 0; i < forbidden.size(); ++i) iv.rows.push_back({double(i + 1), forbidden[i].lo, forbidden[i].hi});
  r.tables["forbidden_intervals"] = std::move(iv);
  check(r, "forbidden_hits", "no pattern side norm in a forbidden interval", scan.forbidden_hits == 0,
        double(scan.forbidden_hits), 0.0);
  check(r, "patterns_found", "the window contains patterns at all", scan.total > 0, double(scan.total), 0.0);
}

void corner_abundance(const ExperimentConfig& c, RunReport& r) {
  const auto spec = corner_grid(c);
  FormOptions opt;
  opt.method = c.method;
  opt.sampling = c.sampling;
  Table t{{"trial", "lambda", "M", "ratio", "floor"}, {}};
  for (double lambda : c.lambdas) {
    const WindowKernel w(lambda, c.epsilon, c.p, c.d);
    const double floor = c.tolerance("floor_factor") * std::pow(c.density, 3.0) * w.mass();
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < c.trials; ++s) {
      const auto f = random_cell_set(spec, c.density, c.seed, s);
      auto rep = corner_form_M(f, w, opt);
      worst = std::min(worst, rep.ratio);
      t.rows.push_back({double(s), lambda, rep.value, rep.ratio, floor});
      r.forms.push_back(std::move(rep));
    }
    check(r, "abundance lambda=" + format_number(lambda), "M_lambda(f) / N^{2d} bounded below over seeds",
          worst >= floor, worst, floor);
  }
  r.tables["abundance"] = std::move(t);
}

void lacunary(const ExperimentConfig& c, RunReport& r) {
  const auto spec = corner_grid(c);
  const LacunaryScales scales(c.scales);
  const std::size_t J = scales.size();
  FormOptions opt;
  opt.method = c.method;
  opt.sampling = c.sampling;
  const double growth = c.tolerance("growth"), chain_tol = c.tolerance("chain");
  Table summary{{"trial", "J", "ratio", "energy", "chain_bound"}, {}};
  double worst_growth = 0.0, worst_chain = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < c.trials; ++s) {
    const auto f = random_cell_set(spec, c.density, c.seed, s);
    auto e = lacunary_energy(f, scales, c.epsilon, c.p, opt);
    // Prefix sums over ascending scales: row J holds sum_{j <= J} |E_j|^2 / N^{4d}.
    Table t{{"J", "lambda_j", "E_j", "E_j_sq", "ratio"}, {}};
    const double first = e.prefix_ratio[std::min<std::size_t>(1, J - 1)];
    for (std::size_t j = 0; j < J; ++j) {
      t.rows.push_back({double(j + 1), e.lambdas[j], e.E[j], e.E[j] * e.E[j], e.prefix_ratio[j]});
      if (j >= 1 && first > 0) worst_growth = std::max(worst_growth, e.prefix_ratio[j] / first);
    }
    r.tables["lacunary_seed" + std::to_string(s)] = std::move(t);
    summary.rows.push_back({double(s), double(J), e.report.ratio, e.report.value, e.chain_bound});
    worst_chain = std::max(worst_chain, e.report.value - e.chain_bound * (1.0 + chain_tol));
    r.forms.push_back(std::move(e.report));
  }
  r.tables["lacunary_summary"] = std::move(summary);
  check(r, "lacunary_growth", "cumulative energy ratio stays within a factor of its two-scale value",
        worst_growth <= growth, worst_growth, growth);
  check(r, "lacunary_chain", "energy <= ‖f‖_2^2 * Lambda(f, f, K)", worst_chain <= 0.0, worst_chain, 0.0);
}

void gowers_suite(const ExperimentConfig& c, RunReport& r) {
  const GridSpec spec = GridSpec::cube(c.d, c.n, c.N);
  const double ftol = c.tolerance("fourier"), stol = c.tolerance("scaling");
  Table t{{"trial", "u2_direct", "u2_fourier_power", "u3", "monotone"}, {}};
  double worst = 0.0;
  bool monotone = true;
  for (std::size_t s = 0; s < c.trials; ++s) {
    const auto f = random_uniform(spec, -1.0, 1.0, c.seed, s);
    const auto u2 = gowers_norm(f, 2, c.method);
    const double fourier = gowers_u2_fourier(f);
    worst = std::max(worst, std::abs(u2.power - fourier) / std::abs(fourier));
    const auto u3 = gowers_norm(f, 3, c.method);
    const auto mono = monotonicity_check(f);
    monotone = monotone && mono.holds;
    t.rows.push_back({double(s), u2.power, fourier, u3.power, mono.holds ? 1.0 : 0.0});
  }
  r.tables["gowers"] = std::move(t);
  check(r, "u2_fourier", "direct and Fourier U^2 agree", worst <= ftol, worst, ftol);
  check(r, "monotonicity", "‖f‖_{U^2} <= ‖f‖_{U^3} on the periodised group", monotone, monotone ? 1.0 : 0.0, 1.0);

  // Dilation scaling of a Gaussian.
  Table sc{{"k", "t", "exponent", "predicted", "measured", "deviation"}, {}};
  const RealFn gauss = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::exp(-std::numbers::pi * s);
  };
  const std::size_t sn = c.d == 1 ? 256 : 32;
  for (int k : {2, 3}) {
    const auto rep = scaling_check(gauss, c.d, 4.0, sn, 2.0, k);
    sc.rows.push_back({double(k), rep.t, rep.exponent, rep.predicted, rep.measured, rep.deviation});
    check(r, "scaling k=" + std::to_string(k), "‖f_t‖_{U^k} = t^{-d(1-(k+1)/2^k)} ‖f‖_{U^k}", rep.deviation <= stol,
          rep.deviation, stol);
  }
  r.tables["scaling"] = std::move(sc);
}

void pattern_search(const ExperimentConfig& c, RunReport& r) {
  const int p = static_cast<int>(c.p.p);
  const double h = c.spacing();
  const double tol = c.tolerance("search");
  const int k = p == 2 ? 3 : p + 1;
  // Largest coordinate the lifted set reads: y - x, or x_1 + 2 x_2 + ... + (k-1) x_{k-1}.
  const double reach = p == 2 ? c.N : c.N * k * (k - 1) / 2.0;
  const long cap = ShellSet::cap_for_window(p, c.d, reach);
  const ShellSet shells = p == 2 ? ShellSet::annuli(c.d, cap) : ShellSet::power_shells(p, c.d, cap);
  const PointSet A = [shells](std::span<const double> x) { return shells.contains(x); };
  const auto forbidden = p == 2 ? bourgain_forbidden_intervals(static_cast<int>(cap) + 2)
                                : general_forbidden_intervals(p, static_cast<int>(cap) + 2);
  const auto lifted = lift_ap_set_to_corners(A, c.d, p == 2 ? LiftVariant::pair() : LiftVariant::generalized_corner(k));
  const auto window = LatticeWindow::cube(static_cast<std::size_t>(k - 1) * c.d, 0.0, c.N, h);
  Table t{{"lambda", "count", "forbidden"}, {}};
  for (double lambda : c.lambdas) {
    const std::size_t count = p == 2 ? find_corners(lifted, window, lambda, c.p, tol, c.method).size()
                                     : find_generalized_corners(lifted, window, c.d, k, lambda, c.p, tol).size();
    // The band [lambda - tol, lambda + tol] lies inside one forbidden interval.
    bool inside = false;
    for (const auto& iv : forbidden) inside |= iv.lo < lambda - tol && lambda + tol < iv.hi;
    t.rows.push_back({lambda, double(count), inside ? 1.0 : 0.0});
    if (inside)
      check(r, "no corners lambda=" + format_number(lambda), "forbidden side lengths carry no corners", count == 0,
            double(count), 0.0);
  }
  r.tables["corners"] = std::move(t);
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunReport run(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = Clock::now();
  RunReport r;
  r.config = config;
  r.threads = worker_count();
  r.budget_tuples = tuple_budget();
  r.started_utc = utc_now();
  switch (config.recipe) {
    case Recipe::identity_suite: identity_suite(config, r); break;
    case Recipe::counterexample_gaps: counterexample_gaps(config, r); break;
    case Recipe::corner_abundance: corner_abundance(config, r); break;
    case Recipe::lacunary_energy: lacunary(config, r); break;
    case Recipe::gowers_suite: gowers_suite(config, r); break;
    case Recipe::pattern_search: pattern_search(config, r); break;
  }
  r.wall_clock_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

}  // namespace cornerlab
