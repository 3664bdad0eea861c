#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "cornerlab/counting_forms.hpp"
#include "cornerlab/grid.hpp"
#include "cornerlab/kernels.hpp"
#include "cornerlab/reduce.hpp"

namespace cornerlab {

struct UniformityNormResult {
  int k = 2;
  double value = 0.0;  ///< ‖f‖_{U^k}
  double power = 0.0;  ///< ‖f‖_{U^k}^{2^k}
  std::string normalization;
  double elapsed_seconds = 0.0;
  SumMethod method = SumMethod::direct;
};

/// Riemann-sum U^k norm of the zero-extended f on R^d, k in {2, 3}:
/// U^2: h^{3d} sum_k A(k)^2 with A the autocorrelation;
/// U^3: h^{4d} sum_{k3} sum_k A_{k3}(k)^2 with A_{k3} that of f * f(. + k3).
UniformityNormResult gowers_norm(const GridFunction& f, int k, SumMethod method = SumMethod::direct);

/// The full (k+1)-fold difference sum, for small grids.
double gowers_power_naive(const GridFunction& f, int k);

/// ‖f‖_{U^2}^4 from the fourth powers of DFT coefficients of f zero-padded
/// to a box four times the support.
double gowers_u2_fourier(const GridFunction& f);

struct MonotonicityReport {
  double u2 = 0.0;
  double u3 = 0.0;
  std::size_t period = 0;
  bool holds = false;
};

/// ‖f‖_{U^2} <= ‖f‖_{U^3} on Z_M^d with averaged (probability) normalisation,
/// f zero-padded to period M = 2n.
MonotonicityReport monotonicity_check(const GridFunction& f, double tolerance = 1e-12);

struct ScalingReport {
  double t = 1.0;
  int k = 2;
  double exponent = 0.0;  ///< -d (1 - (k+1)/2^k)
  double predicted = 1.0;
  double measured = 1.0;
  double deviation = 0.0;  ///< |measured / predicted - 1|
};

/// ‖f_t‖_{U^k} / ‖f‖_{U^k} with f_t resampled by interpolation onto a grid
/// of the same spacing.
ScalingReport scaling_check(const GridFunction& f, double t, int k);
/// Same with f and f_t sampled analytically on [-R, R]^d at spacing 2R/n.
ScalingReport scaling_check(const RealFn& f, std::size_t d, double half_extent, std::size_t n, double t, int k);

enum class VonNeumannStatus { ok, vacuous, violation };
std::string_view to_string(VonNeumannStatus s) noexcept;

struct VonNeumannReport {
  double form_value = 0.0;
  double u3 = 0.0;
  double normalization = 0.0;  ///< N^{2d} lambda^{d/2} ‖g‖_{U^3}
  double ratio = 0.0;
  VonNeumannStatus status = VonNeumannStatus::vacuous;
};

/// |∫ f(x,y) f(x+s,y) f(x,y+s) g(s)| / (N^{2d} lambda^{d/2} ‖g‖_{U^3}).
VonNeumannReport von_neumann_check(const GridFunction& f, const LatticeKernel& g, double lambda,
                                   const FormOptions& options = {});

/// A lattice kernel as a grid function on its offset box.
GridFunction lattice_kernel_function(const LatticeKernel& k);

/// ‖omega_lambda^eta - omega_lambda^eps‖_{U^3} on the lattice of spacing h.
double shell_window_u3_gap(double lambda, double eps, double eta, LpExponent p, std::size_t d, double spacing,
                           KernelSampling mode = KernelSampling::cell_average);

}  // namespace cornerlab
