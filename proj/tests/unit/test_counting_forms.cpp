#include <gtest/gtest.h>

#include <cmath>

#include "cornerlab/counting_forms.hpp"

using namespace cornerlab;

namespace {

double fval(const GridFunction& f, std::int64_t i, std::int64_t j) {
  const std::int64_t idx[2] = {i, j};
  return f.at(idx);
}

// h^3 sum_{x,y} f(x,y) sum_s w(s) f(x+s,y) f(x,y+s) for d = 1, by plain loops.
double naive_corner(const GridFunction& f, const LatticeKernel& k) {
  const auto n = static_cast<std::int64_t>(f.spec().shape[0]);
  const double h = f.spacing();
  double total = 0.0;
  for (std::int64_t x = 0; x < n; ++x)
    for (std::int64_t y = 0; y < n; ++y)
      for (std::int64_t s = -k.radius(); s <= k.radius(); ++s) {
        const std::int64_t o[1] = {s};
        total += fval(f, x, y) * k.weight(o) * fval(f, x + s, y) * fval(f, x, y + s);
      }
  return h * h * h * total;
}

// h^4 sum_{u,v,x,y} F(x+u,y) G(x,y+u) F(x+v,y) G(x,y+v) K(u,v), d = 1.
double naive_quadrilinear(const GridFunction& F, const GridFunction& G, const std::vector<LatticeKernel>& parts) {
  const auto n = static_cast<std::int64_t>(F.spec().shape[0]);
  std::int64_t R = 0;
  for (const auto& p : parts) R = std::max(R, p.radius());
  const double h = F.spacing();
  double total = 0.0;
  for (std::int64_t u = -R; u <= R; ++u)
    for (std::int64_t v = -R; v <= R; ++v) {
      double K = 0.0;
      for (const auto& p : parts) {
        const std::int64_t ou[1] = {u}, ov[1] = {v};
        if (std::abs(u) <= p.radius() && std::abs(v) <= p.radius()) K += p.weight(ou) * p.weight(ov);
      }
      if (K == 0.0) continue;
      for (std::int64_t x = 0; x < n; ++x)
        for (std::int64_t y = 0; y < n; ++y)
          total += fval(F, x + u, y) * fval(G, x, y + u) * fval(F, x + v, y) * fval(G, x, y + v) * K;
    }
  return h * h * h * h * total;
}

}  // namespace

TEST(CornerForm, MatchesNaiveSum) {
  const auto f = random_uniform(GridSpec::cube(2, 24, 6.0), 0.0, 1.0, 3);
  const WindowKernel w(2.0, 0.5, LpExponent::finite(3), 1);
  const auto k = LatticeKernel::sample(w, f.spacing());
  const auto r = corner_form(f, k);
  EXPECT_NEAR(r.value, naive_corner(f, k), 1e-12 * std::abs(r.value));
  EXPECT_DOUBLE_EQ(r.normalization, 36.0);
  for (auto m : {SumMethod::blocked, SumMethod::parallel}) {
    FormOptions o;
    o.method = m;
    EXPECT_NEAR(corner_form(f, k, o).value, r.value, 1e-12 * std::abs(r.value));
  }
}

TEST(CornerForm, WindowFormUsesSampledKernel) {
  const auto f = random_cell_set(GridSpec::cube(2, 32, 8.0), 0.4, 1);
  const WindowKernel w(2.0, 1.0, LpExponent::finite(2), 1);
  const auto m = corner_form_M(f, w);
  EXPECT_NEAR(m.value, corner_form(f, LatticeKernel::sample(w, f.spacing())).value, 1e-12 * m.value);
  EXPECT_GT(m.ratio, 0.0);
  FormOptions point;
  point.sampling = KernelSampling::point;
  EXPECT_THROW(corner_form_M(f, WindowKernel(2.0, 0.1, LpExponent::finite(2), 1), point), std::invalid_argument);
  EXPECT_THROW(corner_form_N(f, 2.0, LpExponent::finite(2), 0.1), std::invalid_argument);
  EXPECT_NO_THROW(corner_form_N(f, 2.0, LpExponent::finite(2), 1.0));
}

TEST(ErrorForm, IsLinearCombination) {
  const auto f = random_cell_set(GridSpec::cube(2, 32, 8.0), 0.4, 2);
  const double lambda = 2.0, eps = 0.3;
  const auto p = LpExponent::finite(3);
  const auto e = error_form_E(f, lambda, eps, p);
  const auto thin = corner_form_M(f, WindowKernel(lambda, eps, p, 1));
  const auto wide = corner_form_M(f, WindowKernel(lambda, 1.0, p, 1));
  EXPECT_NEAR(e.value, thin.value - c1(eps, p, 1) * wide.value, 1e-10 * wide.value);
  EXPECT_EQ(error_form_E(f, lambda, 1.0, p).value, 0.0);
}

TEST(ShellDifference, ZeroIntegral) {
  const ShellDifference k(4.0, 0.2, LpExponent::finite(3), 1);
  EXPECT_NEAR(k.integral(), 0.0, 1e-10);
  EXPECT_NEAR(k.lattice(0.125).mass(), 0.0, 1e-8);
}

TEST(Lacunary, ScalesValidation) {
  EXPECT_THROW(LacunaryScales({1.0, 1.5}), std::invalid_argument);
  const auto s = LacunaryScales::dyadic_below(128.0, 4);
  EXPECT_EQ(s[0], 16.0);
  EXPECT_EQ(s[3], 128.0);
  EXPECT_EQ(s.prefix(2)[1], 32.0);
  EXPECT_EQ(s.suffix(2)[0], 64.0);
}

TEST(Lacunary, EnergyMatchesPerScaleFormsAndChainBound) {
  const auto f = random_cell_set(GridSpec::cube(2, 32, 16.0), 0.3, 4);
  const LacunaryScales scales({1.0, 2.0, 4.0});
  const auto p = LpExponent::finite(3);
  const auto e = lacunary_energy(f, scales, 0.2, p);
  double sum = 0.0, quad = 0.0;
  const LacunaryKernel K(scales, 0.2, p, 1);
  const auto parts = K.lattice(f.spacing());
  for (std::size_t j = 0; j < 3; ++j) {
    const double Ej = error_form_E(f, scales[j], 0.2, p).value;
    EXPECT_NEAR(e.E[j], Ej, 1e-10 * (1.0 + std::abs(Ej)));
    sum += Ej * Ej;
    quad += quadrilinear_form(f, f, parts[j]).value;
  }
  EXPECT_NEAR(e.report.value, sum, 1e-9 * sum);
  EXPECT_NEAR(e.quadrilinear, quad, 1e-9 * quad);
  EXPECT_LE(e.report.value, e.chain_bound);
  EXPECT_THROW(lacunary_energy(f, LacunaryScales({8.0, 32.0}), 0.2, p), std::invalid_argument);
}

TEST(Quadrilinear, DenseFactoredAndNaiveAgree) {
  const auto spec = GridSpec::cube(2, 12, 6.0);
  const auto F = random_uniform(spec, -1.0, 1.0, 7);
  const auto G = random_uniform(spec, -1.0, 1.0, 8);
  const LacunaryKernel K(LacunaryScales({1.0, 2.0}), 0.3, LpExponent::finite(2), 1);
  QuadOptions dense, factored;
  dense.algorithm = QuadAlgorithm::dense;
  factored.algorithm = QuadAlgorithm::factored;
  const double a = quadrilinear_form(F, G, K, dense).value;
  const double b = quadrilinear_form(F, G, K, factored).value;
  const double c = naive_quadrilinear(F, G, K.lattice(spec.spacing));
  EXPECT_NEAR(a, c, 1e-11 * std::abs(c));
  EXPECT_NEAR(b, c, 1e-11 * std::abs(c));
}

TEST(Quadrilinear, RankOneIsSquareFunction) {
  const auto spec = GridSpec::cube(2, 16, 4.0);
  const auto f = random_uniform(spec, -1.0, 1.0, 9);
  const auto k = ShellDifference(1.0, 0.4, LpExponent::finite(2), 1).lattice(spec.spacing);
  const auto r = quadrilinear_form(f, f, k);
  // h^2 sum_{x,y} (h sum_u k(u) f(x+u,y) f(x,y+u))^2.
  const double h = spec.spacing;
  double sq = 0.0;
  for (std::int64_t x = 0; x < 16; ++x)
    for (std::int64_t y = 0; y < 16; ++y) {
      double b = 0.0;
      for (std::int64_t u = -k.radius(); u <= k.radius(); ++u) {
        const std::int64_t o[1] = {u};
        b += k.weight(o) * fval(f, x + u, y) * fval(f, x, y + u);
      }
      sq += (h * b) * (h * b);
    }
  EXPECT_NEAR(r.value, h * h * sq, 1e-11 * r.value);
  EXPECT_GE(r.value, 0.0);
  const double norm = f.lp_norm_pow(4.0);
  EXPECT_NEAR(r.ratio, std::abs(r.value) / std::sqrt(norm * norm), 1e-12);
}

TEST(Quadrilinear, ZeroNormGivesNaNRatio) {
  const auto spec = GridSpec::cube(2, 8, 4.0);
  const GridFunction zero(spec);
  const auto k = ShellDifference(1.0, 0.5, LpExponent::finite(2), 1).lattice(spec.spacing);
  const auto r = quadrilinear_form(zero, zero, k);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_TRUE(std::isnan(r.ratio));
}

TEST(Quadrilinear, DenseTableRefusal) {
  const auto spec = GridSpec::cube(4, 6, 0.75);
  const auto F = random_uniform(spec, -1.0, 1.0, 1);
  const LacunaryKernel K(LacunaryScales({1.0, 2.0, 4.0}), 0.3, LpExponent::finite(2), 2);
  QuadOptions dense;
  dense.algorithm = QuadAlgorithm::dense;
  EXPECT_THROW(quadrilinear_form(F, F, K, dense), CostRefusal);
}
