#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cornerlab/counting_forms.hpp"
#include "cornerlab/grid.hpp"

namespace cornerlab {

struct QuadratureSpec {
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  std::size_t max_subdivisions = 15;  ///< bisection depth per panel
  /// Range of t for dt/t integrals; chosen from the integrand's scale if empty.
  std::optional<std::pair<double, double>> t_range;

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  ///< accumulated estimate from the quadrature rule
};

/// sum_i int |h^i_{alpha t}^(xi)|^2 |g_{beta t}^(eta)|^2 dt/t + (alpha <-> beta
/// slots swapped); equals pi for (xi, eta) != 0.
QuadResult verify_pifourier(std::span<const double> xi, std::span<const double> eta, double alpha, double beta,
                            const QuadratureSpec& q = {});

/// 2 pi int (‖(t xi, t eta)‖^2 + ‖alpha t (xi + eta)‖^2) e^{-pi ‖(t xi,t eta)‖^2 - pi ‖alpha t (xi+eta)‖^2} dt/t,
/// equal to 1. Holds for every alpha > 0.
QuadResult verify_tel_pair(double alpha, std::span<const double> xi, std::span<const double> eta,
                           const QuadratureSpec& q = {});

struct TelescopingReport {
  double lhs = 0.0;  ///< Theta_{h_alpha, g_beta} + Theta_{g_alpha, h_beta}
  double rhs = 0.0;  ///< pi ‖F‖_4^4
  double h_g = 0.0;
  double g_h = 0.0;
  double relative_gap = 0.0;
  std::size_t t_steps = 0;
};

/// Grid-scale telescoping for F on R x R.
TelescopingReport verify_telescoping_theta(const GridFunction& F, double alpha, double beta,
                                           const ThetaOptions& options = {});

struct SchwartzGaussRow {
  double radius = 0.0;
  double lhs = 0.0;  ///< (1 + r)^{-nu}
  double rhs = 0.0;  ///< int_1^inf e^{-pi r^2 / b^2} b^{-nu-1} db
  double ratio = 0.0;
  double error = 0.0;
};

struct SchwartzGaussReport {
  double nu = 0.0;
  std::vector<SchwartzGaussRow> rows;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double ratio_spread = 0.0;        ///< ratio_max / ratio_min
  double limit_constant = 0.0;      ///< pi^{-nu/2} Gamma(nu/2) / 2
  double reference_radius = 0.0;
  double asymptotic_constant = 0.0;  ///< rhs * r^nu at the reference radius
  double constant_error = 0.0;       ///< |asymptotic - limit|
};

/// Ratios over `radii`; the asymptotic constant is read off at reference_radius.
SchwartzGaussReport verify_schwartzgauss(double nu, std::span<const double> radii, double reference_radius = 50.0,
                                         const QuadratureSpec& q = {});

/// Nonnegative radial profile on R^{2d} supported in inner <= ‖tau‖ <= outer.
struct RadialBump {
  std::function<double(double)> profile;
  double inner = 1.0;
  double outer = 2.0;

  /// exp(-1 / (1 - 4 (r - 3/2)^2)) on 1 < r < 2.
  static RadialBump annulus();
  void validate() const;
};

struct DReport {
  std::vector<double> values;  ///< one per sample
  double D = 0.0;              ///< mean
  double spread = 0.0;         ///< max - min
};

/// D = int phi(t xi, t eta) ‖(t xi, t eta)‖^2 e^{-pi ‖(t xi, t eta)‖^2} dt/t at each
/// sample (xi, eta) in R^{2d}.
DReport compute_D(const RadialBump& phi, const std::vector<std::vector<double>>& samples,
                  const QuadratureSpec& q = {});

struct SubspaceFourierReport {
  double lhs = 0.0;  ///< int int H^(xi, eta, -xi-eta, -xi-eta)
  double rhs = 0.0;  ///< int int H(-p-q, -p-q, -p, -q)
  double lhs_error = 0.0;
  double rhs_error = 0.0;
};

/// d = 1, H = g_{w1} ⊗ g_{w2} ⊗ g_{w3} ⊗ g_{w4}.
SubspaceFourierReport verify_subspace_fourier(const std::array<double, 4>& widths, const QuadratureSpec& q = {});

struct SymbolRow {
  std::size_t order_xi = 0;
  std::size_t order_eta = 0;
  std::vector<double> radii;
  std::vector<double> scaled_max;  ///< max over directions of |d^kappa m| r^{|kappa|}
  double sup = 0.0;
};

struct SymbolReport {
  std::vector<SymbolRow> rows;
  double l1_bound = 0.0;  ///< sum_j (int |k_j|)^2 >= |m|
};

/// Fourier transform of one d = 1 shell difference at xi.
double shell_difference_fourier(const ShellDifference& k, double xi);

/// m(xi, eta) = sum_j k_j^(xi) k_j^(eta) for d = 1.
double lacunary_symbol(const LacunaryKernel& K, double xi, double eta);

/// Central finite differences of m with step radius * 1e-3 on each of
/// `directions` rays, for every multi-index with |kappa| <= orders (<= 2).
SymbolReport symbol_estimate_check(const LacunaryKernel& K, std::size_t orders, std::span<const double> radii,
                                   std::size_t directions = 8);

}  // namespace cornerlab
