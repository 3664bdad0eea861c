// Acceptance checks, one PASS/FAIL line per criterion.
//   cornerlab_acceptance [--criterion N]...

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "cornerlab/counting_forms.hpp"
#include "cornerlab/exact.hpp"
#include "cornerlab/gowers.hpp"
#include "cornerlab/harness.hpp"
#include "cornerlab/identities.hpp"
#include "cornerlab/lp_patterns.hpp"
#include "cornerlab/rng.hpp"

using namespace cornerlab;

namespace {

constexpr double kPi = std::numbers::pi;

// Pinned tolerances.
constexpr double kIdentityTol = 1e-8;
constexpr double kTelescopingGap = 0.05;
constexpr double kFourierRelTol = 1e-8;
constexpr double kScalingTol = 0.01;
constexpr double kAbundanceFloorFactor = 0.25;
constexpr double kGrowthFactor = 1.5;
constexpr double kChainRelSlack = 1e-9;
constexpr double kMaxOverMedian = 5.0;
constexpr double kMedianTrend = 1.25;
constexpr int kCornerFreeThree = 6;  // exhaustive value, frozen
constexpr double kRatioSpread = 10.0;
constexpr double kConstantTol = 1e-3;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double log_uniform(CounterRng& rng, double lo, double hi) {
  return std::exp(rng.next_uniform(std::log(lo), std::log(hi)));
}

std::vector<double> random_vector(CounterRng& rng, std::size_t d) {
  std::vector<double> v(d);
  for (auto& x : v) x = rng.next_uniform(-2.0, 2.0);
  return v;
}

std::string failed_names(const RunReport& r) {
  std::string s;
  for (const auto& a : r.assertions)
    if (!a.passed) s += " [" + a.name + " " + format_number(a.value) + " vs " + format_number(a.threshold) + "]";
  return s;
}

Outcome identities() {
  CounterRng rng(2024, 0);
  double worst_pi = 0.0, worst_one = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto d = static_cast<std::size_t>(rng.next_int(1, 3));
    const auto xi = random_vector(rng, d), eta = random_vector(rng, d);
    const double a = log_uniform(rng, 0.25, 4.0), b = log_uniform(rng, 0.25, 4.0);
    worst_pi = std::max(worst_pi, std::abs(verify_pifourier(xi, eta, a, b).value - kPi));
  }
  for (int i = 0; i < 100; ++i) {
    const auto d = static_cast<std::size_t>(rng.next_int(1, 3));
    const auto xi = random_vector(rng, d), eta = random_vector(rng, d);
    const double a = log_uniform(rng, 0.25, 4.0);
    worst_one = std::max(worst_one, std::abs(verify_tel_pair(a, xi, eta).value - 1.0));
  }
  return {worst_pi <= kIdentityTol && worst_one <= kIdentityTol,
          fmt("max |pifourier - pi| = %.3g, max |tel_pair - 1| = %.3g (tol %.0e)", worst_pi, worst_one, kIdentityTol)};
}

Outcome telescoping() {
  double worst = 0.0;
  bool refined_smaller = true;
  double worst_refined = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto F = random_uniform(GridSpec::cube(2, 32, 1.0), -1.0, 1.0, 77, s);
    const auto base = verify_telescoping_theta(F, 1.0, 1.0);
    ThetaOptions fine;
    const double h = F.spacing();
    fine.t_min = h / 128.0;
    fine.t_max = 64.0;
    fine.points_per_octave = 32.0;
    const auto ref = verify_telescoping_theta(F, 1.0, 1.0, fine);
    worst = std::max(worst, base.relative_gap);
    worst_refined = std::max(worst_refined, ref.relative_gap);
    refined_smaller = refined_smaller && ref.relative_gap < base.relative_gap;
  }
  return {worst <= kTelescopingGap && refined_smaller,
          fmt("max gap %.4f (tol %.2f), refined max gap %.4f, strictly smaller on every F: %s", worst, kTelescopingGap,
              worst_refined, refined_smaller ? "yes" : "no")};
}

Outcome exact() {
  CounterRng rng(31, 0);
  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const int p = static_cast<int>(rng.next_int(1, 4));
    const auto d = static_cast<std::size_t>(rng.next_int(1, 4));
    std::vector<Rational> x(d), s(d);
    for (auto& v : x) v = Rational(rng.next_int(0, 50), rng.next_int(1, 6));
    for (auto& v : s) v = Rational(rng.next_int(0, 50), rng.next_int(1, 6));
    if (binomial_difference_exact(x, s, p) != factorial_norm_pow_exact(s, p)) ++failures;
    const int l = static_cast<int>(rng.next_int(0, p - 1));
    const Rational alpha(rng.next_int(-50, 50), rng.next_int(1, 6));
    const Rational beta(rng.next_int(-50, 50), rng.next_int(1, 6));
    if (scalar_finite_difference_exact(alpha, beta, p, l) != 0) ++failures;
  }
  return {failures == 0, fmt("%d mismatches over 1000 inputs", failures)};
}

Outcome gaps() {
  // Annulus set in R^2 and its 3-APs.
  const auto w2 = LatticeWindow::cube(2, 0.0, 6.0, 1.0 / 64);
  const long cap2 = ShellSet::cap_for_window(2, 2, 6.0);
  const auto annuli = ShellSet::annuli(2, cap2);
  const auto s2 = scan_aps([&](std::span<const double> x) { return annuli.contains(x); }, w2, 3,
                           LpExponent::finite(2), bourgain_forbidden_intervals(static_cast<int>(cap2) + 2));
  // Cubic shells on the positive half-line and their 4-APs.
  const auto w1 = LatticeWindow::cube(1, 0.0, 4.0, 1.0 / 4096);
  const long cap1 = ShellSet::cap_for_window(3, 1, 4.0);
  const auto cubic = ShellSet::power_shells(3, 1, cap1);
  const auto s1 = scan_aps([&](std::span<const double> x) { return cubic.contains(x); }, w1, 4, LpExponent::finite(3),
                           general_forbidden_intervals(3, static_cast<int>(cap1) + 2));
  const bool ok = s2.forbidden_hits == 0 && s2.total > 0 && s1.forbidden_hits == 0 && s1.total > 0;
  return {ok, fmt("p=2 d=2: %llu APs, %llu forbidden; p=3 k=4 d=1: %llu APs, %llu forbidden",
                  (unsigned long long)s2.total, (unsigned long long)s2.forbidden_hits, (unsigned long long)s1.total,
                  (unsigned long long)s1.forbidden_hits)};
}

Outcome gowers() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto f = random_uniform(GridSpec::cube(1 + s % 2, s % 2 ? 24 : 64, 4.0), -1.0, 1.0, 5, s);
    const double direct = gowers_norm(f, 2).power;
    worst = std::max(worst, std::abs(direct - gowers_u2_fourier(f)) / direct);
  }
  const RealFn gauss = [](std::span<const double> x) { return std::exp(-kPi * x[0] * x[0]); };
  const auto k2 = scaling_check(gauss, 1, 4.0, 256, 2.0, 2);
  const auto k3 = scaling_check(gauss, 1, 4.0, 256, 2.0, 3);
  const bool exps = std::abs(k2.exponent + 0.25) < 1e-15 && std::abs(k3.exponent + 0.5) < 1e-15;
  return {worst <= kFourierRelTol && k2.deviation <= kScalingTol && k3.deviation <= kScalingTol && exps,
          fmt("max rel U2 gap %.3g (tol %.0e); scaling deviation k=2 %.3g, k=3 %.3g (tol %.2f); exponents %g, %g",
              worst, kFourierRelTol, k2.deviation, k3.deviation, kScalingTol, -k2.exponent, -k3.exponent)};
}

Outcome abundance() {
  auto c = ExperimentConfig::defaults(Recipe::corner_abundance);
  c.d = 1;
  c.N = 64;
  c.lambdas = {2, 4, 8};
  c.epsilon = 1.0;
  c.density = 0.2;
  c.trials = 10;
  c.tolerances["floor_factor"] = kAbundanceFloorFactor;
  const auto r = run(c);
  std::string mins;
  const auto& t = r.tables.at("abundance");
  for (double lambda : c.lambdas) {
    double m = INFINITY, floor = 0.0;
    for (const auto& row : t.rows)
      if (row[1] == lambda) m = std::min(m, row[3]), floor = row[4];
    mins += fmt(" lambda=%g min %.4g floor %.4g;", lambda, m, floor);
  }
  return {r.passed(), "recorded constant 0.25*delta^3*int(omega^1):" + mins + failed_names(r)};
}

Outcome lacunary() {
  auto c = ExperimentConfig::defaults(Recipe::lacunary_energy);
  c.d = 1;
  c.N = 256;
  c.n = 512;
  c.epsilon = 0.1;
  c.scales = {1, 2, 4, 8, 16, 32, 64, 128};
  c.trials = 10;
  c.tolerances["growth"] = kGrowthFactor;
  c.tolerances["chain"] = kChainRelSlack;
  const auto r = run(c);
  // Growth at J in {4, 8} relative to J = 2, per seed.
  double worst = 0.0;
  for (std::size_t s = 0; s < c.trials; ++s) {
    const auto& t = r.tables.at("lacunary_seed" + std::to_string(s));
    for (std::size_t J : {4u, 8u}) worst = std::max(worst, t.rows[J - 1][4] / t.rows[1][4]);
  }
  const bool chain = std::all_of(r.assertions.begin(), r.assertions.end(),
                                 [](const Assertion& a) { return a.name != "lacunary_chain" || a.passed; });
  return {worst <= kGrowthFactor && chain,
          fmt("max ratio(J)/ratio(2) over J in {4,8} and 10 seeds = %.4f (tol %.1f); chain bound holds: %s", worst,
              kGrowthFactor, chain ? "yes" : "no")};
}

// Piecewise constant on a 16 x 16 base of unit cells, represented on n x n.
GridFunction refine(const GridFunction& base, std::size_t n) {
  const std::size_t b = base.spec().shape[0], r = n / b;
  GridFunction f(GridSpec::cube(2, n, base.spec().side(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) f[i * n + j] = base[(i / r) * b + j / r];
  return f;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Outcome quadrilinear() {
  const auto K = build_K(LacunaryScales({2.0, 4.0, 8.0}), 0.1, LpExponent::finite(3), 1);
  std::vector<double> medians;
  double spread48 = 0.0;
  for (std::size_t n : {32u, 48u, 64u}) {
    std::vector<double> ratios;
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto base = random_uniform(GridSpec::cube(2, 16, 16.0), -1.0, 1.0, 88, s);
      const auto F = refine(base, n);
      ratios.push_back(quadrilinear_form(F, F, K).ratio);
    }
    const double med = median(ratios);
    medians.push_back(med);
    if (n == 48) spread48 = *std::max_element(ratios.begin(), ratios.end()) / med;
  }
  const double trend = *std::max_element(medians.begin(), medians.end()) /
                       *std::min_element(medians.begin(), medians.end());
  return {spread48 < kMaxOverMedian && trend <= kMedianTrend,
          fmt("48^2 max/median %.3f (tol %.0f); medians 32/48/64 = %.4g/%.4g/%.4g, max/min %.4f (tol %.2f)", spread48,
              kMaxOverMedian, medians[0], medians[1], medians[2], trend, kMedianTrend)};
}

Outcome corner_free() {
  const int a = max_corner_free(1), b = max_corner_free(2), c = max_corner_free(3);
  return {a == 1 && b == 3 && c == kCornerFreeThree, fmt("values %d, %d, %d (expected 1, 3, %d)", a, b, c, kCornerFreeThree)};
}

Outcome schwartzgauss() {
  const std::vector<double> radii{0.0, 1.0, 10.0, 100.0};
  bool ok = true;
  std::string detail;
  for (double nu : {1.0, 3.0, 5.0}) {
    const auto r = verify_schwartzgauss(nu, radii, 50.0);
    const bool row = r.ratio_spread < kRatioSpread && r.constant_error <= kConstantTol;
    ok = ok && row;
    detail += fmt(" nu=%g: spread %.3f (tol %.0f), constant error %.2e (tol %.0e)%s;", nu, r.ratio_spread, kRatioSpread,
                  r.constant_error, kConstantTol, row ? "" : " FAIL");
  }
  return {ok, detail.substr(1)};
}

Outcome determinism() {
  bool ok = true;
  std::string detail;
  for (auto recipe : all_recipes()) {
    const auto config = ExperimentConfig::defaults(recipe);
    const auto first = run(config);
    const auto echoed = ExperimentConfig::parse(first.config.to_json());
    const auto second = run(echoed);
    const bool same = first.to_json(false) == second.to_json(false);
    ok = ok && same;
    detail += std::string(" ") + std::string(to_string(recipe)) + (same ? "=identical" : "=DIFFERS");
  }
  return {ok, detail.substr(1)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> check;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {1, "identity suite", 60, identities},
      {2, "telescoping at grid scale", 600, telescoping},
      {3, "exact identities", 10, exact},
      {4, "counterexample gaps", 300, gaps},
      {5, "gowers suite", 120, gowers},
      {6, "corner abundance", 300, abundance},
      {7, "lacunary energy", 1200, lacunary},
      {8, "quadrilinear boundedness", 900, quadrilinear},
      {9, "combinatorial oracles", 1, corner_free},
      {10, "gaussian superposition", 10, schwartzgauss},
      {11, "determinism", 600, determinism},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      wanted.push_back(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 2;
    }
  }
  int failures = 0;
  for (const auto& c : criteria()) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_seconds;
    const bool passed = o.passed && in_time;
    if (!passed) ++failures;
    std::printf("criterion %d %s: %s | %s | %.2fs (limit %.0fs)\n", c.id, c.name, passed ? "PASS" : "FAIL",
                o.detail.c_str(), secs, c.budget_seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
