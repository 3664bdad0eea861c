#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "cornerlab/grid.hpp"
#include "cornerlab/lp_patterns.hpp"

namespace cornerlab {

/// Cutoff psi given through its Fourier transform
/// psi_hat(xi) = c * exp(-1 / (1 - (xi/a)^2)) on (-a, a), with c fixed by
/// integral(psi_hat) = psi(0) = 1.
class SmoothWindow {
 public:
  explicit SmoothWindow(double bump_halfwidth = 2.0);

  double bump_halfwidth() const noexcept { return a_; }
  double normalization() const noexcept { return c_; }
  double operator()(double xi) const noexcept;
  /// psi_hat(0), the maximum.
  double peak() const noexcept { return c_ * 0.36787944117144233; }

  /// integral of exp(-1/(1-u^2)) over (-1, 1).
  static double unit_bump_integral();

 private:
  double a_;
  double c_;
};

double smooth_window_eval(const SmoothWindow& w, double xi);

/// Shell window omega_lambda^eps(s) = lambda^{-d} eps^{-1} psi_hat((1 - ‖s/lambda‖_p^p) / eps).
/// Finite p only.
class WindowKernel {
 public:
  WindowKernel(double lambda, double epsilon, LpExponent p, std::size_t d, SmoothWindow window = SmoothWindow());

  double lambda() const noexcept { return lambda_; }
  double epsilon() const noexcept { return epsilon_; }
  LpExponent p() const noexcept { return p_; }
  std::size_t d() const noexcept { return d_; }
  const SmoothWindow& window() const noexcept { return window_; }

  double operator()(std::span<const double> s) const;
  /// Value as a function of u = ‖s/lambda‖_p^p.
  double radial(double u) const noexcept;
  /// Upper bound lambda^{-d} eps^{-1} max psi_hat.
  double sup() const noexcept;
  /// Support is {r_inner <= ‖s‖_p <= r_outer}.
  double inner_radius() const noexcept;
  double outer_radius() const noexcept;
  /// integral of omega over R^d, by radial quadrature. Independent of lambda.
  double mass() const;
  WindowKernel with_lambda(double lambda) const { return {lambda, epsilon_, p_, d_, window_}; }
  WindowKernel with_epsilon(double epsilon) const { return {lambda_, epsilon, p_, d_, window_}; }

 private:
  double lambda_;
  double epsilon_;
  LpExponent p_;
  std::size_t d_;
  SmoothWindow window_;
};

/// Volume of the unit l^p ball in R^d.
double lp_ball_volume(double p, std::size_t d);

/// integral(omega^eps) / integral(omega^1), 0 < eps <= 1.
double c1(double epsilon, LpExponent p, std::size_t d, const SmoothWindow& window = SmoothWindow());

/// Smallest admissible thin-shell parameter at grid spacing h: 4 h p / lambda.
double eta_floor(double lambda, LpExponent p, double spacing);

/// omega_lambda^eta as a stand-in for the shell measure sigma_lambda. Rejects
/// eta below eta_floor(lambda, p, spacing).
WindowKernel thin_shell_surrogate(double lambda, LpExponent p, std::size_t d, double eta, double spacing,
                                  const SmoothWindow& window = SmoothWindow());

/// g(x) = exp(-pi ‖x‖^2) and h^i = ∂_i g on R^d.
struct GaussianFamily {
  std::size_t d = 1;

  double g(std::span<const double> x) const;
  /// h^i(x) = -2 pi x_i g(x), i in 1..d.
  double h(std::size_t i, std::span<const double> x) const;
  double g_hat(std::span<const double> xi) const;
  /// 2 pi i xi_i g_hat(xi).
  std::complex<double> h_hat(std::size_t i, std::span<const double> xi) const;
};

double gaussian_eval(const GaussianFamily& fam, std::span<const double> x);
double gaussian_partial(const GaussianFamily& fam, std::size_t i, std::span<const double> x);

using RealFn = std::function<double(std::span<const double>)>;
/// f_t(x) = t^{-d} f(x / t).
RealFn dilate(RealFn f, std::size_t d, double t);
/// Grid dilation, exact on the scaled grid.
GridFunction dilate(const GridFunction& f, double t);

enum class KernelSampling { point, cell_average };
std::string_view to_string(KernelSampling s) noexcept;
KernelSampling parse_kernel_sampling(std::string_view name);

/// A kernel on the difference lattice h Z^d. weight(k) is either the point
/// value at s = k h or the average over the cell [k h - h/2, k h + h/2]^d, so
/// h^d * sum(weights) approximates the integral.
class LatticeKernel {
 public:
  LatticeKernel() = default;
  LatticeKernel(std::size_t d, double spacing, std::int64_t radius);

  static LatticeKernel sample(const WindowKernel& kernel, double spacing,
                              KernelSampling mode = KernelSampling::cell_average);
  /// a * x + b * y on a common lattice.
  static LatticeKernel combine(double a, const LatticeKernel& x, double b, const LatticeKernel& y);

  std::size_t d() const noexcept { return d_; }
  double spacing() const noexcept { return spacing_; }
  std::int64_t radius() const noexcept { return radius_; }
  std::size_t side() const noexcept { return static_cast<std::size_t>(2 * radius_ + 1); }
  /// Dense weights over [-radius, radius]^d, row-major.
  std::span<const double> dense() const noexcept { return dense_; }
  double weight(std::span<const std::int64_t> offset) const noexcept;

  /// Nonzero entries in lexicographic offset order.
  std::size_t nonzeros() const noexcept { return nz_weight_.size(); }
  std::span<const std::int64_t> offset(std::size_t i) const noexcept {
    return {nz_offset_.data() + i * d_, d_};
  }
  double nonzero_weight(std::size_t i) const noexcept { return nz_weight_[i]; }

  double mass() const noexcept;
  double abs_mass() const noexcept;
  double sup_abs() const noexcept;

  void set(std::span<const std::int64_t> offset, double w);
  void finalize();

 private:
  std::size_t d_ = 0;
  double spacing_ = 1.0;
  std::int64_t radius_ = 0;
  std::vector<double> dense_;
  std::vector<std::int64_t> nz_offset_;
  std::vector<double> nz_weight_;
};

}  // namespace cornerlab
