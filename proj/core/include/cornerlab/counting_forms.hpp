#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cornerlab/grid.hpp"
#include "cornerlab/kernels.hpp"
#include "cornerlab/reduce.hpp"

namespace cornerlab {

struct GridInfo {
  std::vector<std::size_t> shape;
  double spacing = 0.0;
  std::vector<double> origin;

  static GridInfo of(const GridSpec& spec);
};

/// One evaluated multilinear form.
struct FormReport {
  std::string form;
  double value = 0.0;
  double normalization = 1.0;
  double ratio = 0.0;  ///< value / normalization
  GridInfo grid;
  double elapsed_seconds = 0.0;
  SumMethod method = SumMethod::direct;
  std::map<std::string, double> details;
  std::map<std::string, std::string> notes;
};

struct FormOptions {
  SumMethod method = SumMethod::direct;
  KernelSampling sampling = KernelSampling::cell_average;
  /// Box side N for the N^{2d} normalisation; defaults to the grid's first side.
  std::optional<double> box_side;
};

/// Sorted scales with consecutive ratios >= 2.
class LacunaryScales {
 public:
  explicit LacunaryScales(std::vector<double> scales);
  /// lambda_j = top / 2^{J-j}, j = 1..J.
  static LacunaryScales dyadic_below(double top, std::size_t count);

  std::span<const double> values() const noexcept { return scales_; }
  std::size_t size() const noexcept { return scales_.size(); }
  double operator[](std::size_t j) const noexcept { return scales_[j]; }
  LacunaryScales prefix(std::size_t count) const;
  /// The `count` largest scales.
  LacunaryScales suffix(std::size_t count) const;

 private:
  std::vector<double> scales_;
};

/// h^{3d} sum_{x,y} f(x,y) sum_s w(s) f(x+s,y) f(x,y+s) for a lattice kernel
/// w on the grid's spacing; f has axes (x_1..x_d, y_1..y_d) and is zero
/// outside its box.
FormReport corner_form(const GridFunction& f, const LatticeKernel& kernel, const FormOptions& options = {});

/// M_lambda^eps(f) with the shell window `k`. Point sampling requires
/// eps >= eta_floor(lambda, p, h).
FormReport corner_form_M(const GridFunction& f, const WindowKernel& k, const FormOptions& options = {});

/// N_lambda(f) through the thin-shell surrogate omega_lambda^eta.
FormReport corner_form_N(const GridFunction& f, double lambda, LpExponent p, double eta,
                         const FormOptions& options = {});

/// M^eps - c1(eps) M^1, evaluated as one form with k = omega^eps - c1 omega^1.
FormReport error_form_E(const GridFunction& f, double lambda, double eps, LpExponent p,
                        const FormOptions& options = {});

/// omega_lambda^eps - c1(eps) omega_lambda^1.
class ShellDifference {
 public:
  ShellDifference(double lambda, double eps, LpExponent p, std::size_t d,
                  const SmoothWindow& window = SmoothWindow());

  double operator()(std::span<const double> s) const;
  double c1() const noexcept { return c1_; }
  const WindowKernel& thin() const noexcept { return thin_; }
  const WindowKernel& wide() const noexcept { return wide_; }
  /// Continuum integral, zero up to quadrature error.
  double integral() const;
  LatticeKernel lattice(double spacing, KernelSampling mode = KernelSampling::cell_average) const;

 private:
  WindowKernel thin_;
  WindowKernel wide_;
  double c1_;
};

/// K(u,v) = sum_j k_j(u) k_j(v) with k_j = omega_{lambda_j}^eps - c1 omega_{lambda_j}^1.
class LacunaryKernel {
 public:
  LacunaryKernel(LacunaryScales scales, double eps, LpExponent p, std::size_t d);

  const LacunaryScales& scales() const noexcept { return scales_; }
  double epsilon() const noexcept { return eps_; }
  LpExponent p() const noexcept { return p_; }
  std::size_t d() const noexcept { return d_; }
  const std::vector<ShellDifference>& parts() const noexcept { return parts_; }

  double operator()(std::span<const double> u, std::span<const double> v) const;
  /// integral over (R^d)^2 = sum_j (integral k_j)^2.
  double integral() const;
  double sup_bound() const;
  std::vector<LatticeKernel> lattice(double spacing, KernelSampling mode = KernelSampling::cell_average) const;

 private:
  LacunaryScales scales_;
  double eps_;
  LpExponent p_;
  std::size_t d_;
  std::vector<ShellDifference> parts_;
};

LacunaryKernel build_K(const LacunaryScales& scales, double eps, LpExponent p, std::size_t d);

struct LacunaryEnergy {
  FormReport report;          ///< value = sum_j |E_j|^2, ratio to N^{4d}
  std::vector<double> lambdas;
  std::vector<double> E;      ///< E_{lambda_j}^eps(f)
  std::vector<double> prefix_ratio;  ///< sum_{i<=j} |E_i|^2 / N^{4d}
  double l2_norm_sq = 0.0;    ///< ‖f‖_2^2
  double quadrilinear = 0.0;  ///< Lambda(f, f, K) = sum_j h^{2d} sum_{x,y} B_j^2
  double chain_bound = 0.0;   ///< ‖f‖_2^2 * Lambda(f, f, K)
};

/// sum_j |E_{lambda_j}^eps(f)|^2 together with the Cauchy-Schwarz chain bound.
/// Requires lambda_J <= N.
LacunaryEnergy lacunary_energy(const GridFunction& f, const LacunaryScales& scales, double eps, LpExponent p,
                               const FormOptions& options = {});

enum class QuadAlgorithm { automatic, dense, factored };

struct QuadOptions {
  SumMethod method = SumMethod::direct;
  KernelSampling sampling = KernelSampling::cell_average;
  QuadAlgorithm algorithm = QuadAlgorithm::automatic;
};

/// h^{4d} sum_{u,v,x,y} F(x+u,y) G(x,y+u) F(x+v,y) G(x,y+v) K(u,v).
/// dense samples K on the (u,v) lattice; factored uses the tensor structure
/// of K. Ratio is |value| / (‖F‖_4^2 ‖G‖_4^2), NaN when a norm vanishes.
FormReport quadrilinear_form(const GridFunction& F, const GridFunction& G, const LacunaryKernel& K,
                             const QuadOptions& options = {});
/// Variant for a single lattice tensor K = k ⊗ k.
FormReport quadrilinear_form(const GridFunction& F, const GridFunction& G, const LatticeKernel& k,
                             const QuadOptions& options = {});

/// Gaussian-family bump on R: g_alpha or (h^1)_alpha.
struct ThetaKernel {
  enum class Kind { gaussian, derivative };
  Kind kind = Kind::gaussian;
  double alpha = 1.0;

  static ThetaKernel g(double alpha);
  static ThetaKernel h(double alpha);
  bool nonnegative() const noexcept { return kind == Kind::gaussian; }
  std::string name() const;
};

enum class ThetaRoute { fast, x_slot, xprime_slot };

struct ThetaOptions {
  /// Truncation of the dt/t integral; default [h/32, 16 L].
  std::optional<double> t_min;
  std::optional<double> t_max;
  double points_per_octave = 16.0;
  ThetaRoute route = ThetaRoute::fast;
  bool certify = false;
  SumMethod method = SumMethod::direct;
};

struct ThetaReport {
  FormReport report;
  bool certificate_requested = false;
  bool certificate = false;  ///< nonnegative weights and Gram forms >= -tol
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t t_steps = 0;
};

/// Theta_{psi,phi}(F) for F on R x R treated as piecewise constant on cells.
/// The spatial integrals are exact per t; the dt/t integral uses the
/// trapezoid rule in log t on a geometric grid.
ThetaReport theta_form(const GridFunction& F, const ThetaKernel& psi, const ThetaKernel& phi,
                       const ThetaOptions& options = {});

/// Cell-pair kernel int_{cell 0} int_{cell k} psi_t * psi_t~(x - y) dx dy for
/// offsets k = 0..n-1 (even in k).
std::vector<double> theta_cell_kernel(const ThetaKernel& psi, double t, double spacing, std::size_t n);

}  // namespace cornerlab
