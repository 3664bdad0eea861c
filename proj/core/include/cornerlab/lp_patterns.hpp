#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cornerlab/grid.hpp"
#include "cornerlab/reduce.hpp"

namespace cornerlab {

/// Exponent of an l^p norm, 1 <= p <= infinity.
struct LpExponent {
  double p = 2.0;
  bool infinite = false;

  static LpExponent finite(double p);
  static LpExponent infinity() noexcept { return {0.0, true}; }
  void validate() const;
  std::string to_string() const;
  bool operator==(const LpExponent&) const = default;
};

/// (sum |v_i|^p)^{1/p}, or max |v_i| for p = infinity.
double lp_norm(std::span<const double> v, LpExponent p);
/// sum |v_i|^p for finite p; integer p uses repeated multiplication.
double lp_norm_pow(std::span<const double> v, double p);

struct OpenInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const noexcept { return lo < v && v < hi; }
};

/// (sqrt((5n-3)/10), sqrt((5n-2)/10)) for n = 1..n_max: norms that common
/// differences of 3-APs in the annulus set cannot take.
std::vector<OpenInterval> bourgain_forbidden_intervals(int n_max);
/// (((4n-3)/(4 p!))^{1/p}, ((4n-1)/(4 p!))^{1/p}) for n = 1..n_max.
std::vector<OpenInterval> general_forbidden_intervals(int p, int n_max);
/// True when `value` lies in one of the sorted, disjoint intervals.
bool in_any(const std::vector<OpenInterval>& intervals, double value) noexcept;

/// Union over n = 1..n_max of the shells |‖x‖_p^p - n| <= half_width,
/// optionally intersected with the closed positive orthant.
struct ShellSet {
  int p = 2;
  std::size_t d = 1;
  double half_width = 0.1;
  bool positivity = false;
  long n_max = 1;

  /// Annulus set with p = 2 and half-width 1/10.
  static ShellSet annuli(std::size_t d, long n_max);
  /// l^p shells of half-width 2^{-p-2} in the positive orthant.
  static ShellSet power_shells(int p, std::size_t d, long n_max);
  /// Largest shell index that meets a window [0, side]^d, plus one.
  static long cap_for_window(int p, std::size_t d, double side);

  void validate() const;
  bool contains(std::span<const double> x) const;
};

bool shell_membership(std::span<const double> x, const ShellSet& shell);

/// sum_j (-1)^{p-j} C(p,j) ‖x + j s‖_p^p in floating point.
double binomial_difference(std::span<const double> x, std::span<const double> s, int p);
/// sum_j (-1)^{p-j} C(p,j) (alpha + j beta)^l in floating point; 0 <= l <= p.
double scalar_finite_difference(double alpha, double beta, int p, int l);

using PointSet = std::function<bool(std::span<const double>)>;

/// Node lattice lower + k * spacing, k = 0..points-1 per axis.
struct LatticeWindow {
  std::vector<double> lower;
  double spacing = 1.0;
  std::vector<std::size_t> points;

  /// [lo, hi]^dims including both ends; (hi - lo) / spacing must be integral.
  static LatticeWindow cube(std::size_t dims, double lo, double hi, double spacing);

  std::size_t dims() const noexcept { return points.size(); }
  std::size_t size() const noexcept;
  double coordinate(std::size_t axis, std::int64_t k) const noexcept {
    return lower[axis] + static_cast<double>(k) * spacing;
  }
  void validate() const;
};

/// Resolution-linked defaults: spacing lambda/32, tolerance spacing * d.
double default_search_spacing(double lambda) noexcept;
double default_search_tolerance(double spacing, std::size_t d) noexcept;

/// Membership of `set` evaluated once per lattice node.
class LatticeBitmap {
 public:
  LatticeBitmap(const PointSet& set, const LatticeWindow& window);

  const LatticeWindow& window() const noexcept { return window_; }
  bool contains(std::size_t flat) const noexcept { return bits_[flat] != 0; }
  /// False outside the window.
  bool contains(std::span<const std::int64_t> index) const noexcept;
  std::size_t count() const noexcept { return count_; }
  std::vector<std::size_t> members() const;
  std::vector<std::int64_t> unflatten(std::size_t flat) const;
  std::vector<double> point(std::span<const std::int64_t> index) const;

 private:
  LatticeWindow window_;
  std::vector<std::uint8_t> bits_;
  std::size_t count_ = 0;
};

struct CornerHit {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> s;
  double side_norm = 0.0;
};

struct ApHit {
  std::vector<double> x;
  std::vector<double> s;
  double side_norm = 0.0;
};

/// Generalised corner: base point in (R^d)^{k-1} and side s in R^d.
struct GeneralCornerHit {
  std::vector<double> point;
  std::vector<double> s;
  double side_norm = 0.0;
};

/// All lattice corners (x,y), (x+s,y), (x,y+s) in `set` with s != 0 of either
/// sign and |‖s‖_p - lambda| <= tol. The window lives in R^d x R^d with
/// axes ordered (x_1..x_d, y_1..y_d). Hits are in lexicographic (x, y, s)
/// order for every method.
std::vector<CornerHit> find_corners(const PointSet& set, const LatticeWindow& window, double lambda,
                                    LpExponent p, double tol, SumMethod method = SumMethod::direct);

/// All lattice k-APs x, x+s, ..., x+(k-1)s in `set` with s != 0 and
/// |‖s‖_p - lambda| <= tol, in lexicographic (x, s) order.
std::vector<ApHit> find_aps(const PointSet& set, const LatticeWindow& window, int k, double lambda,
                            LpExponent p, double tol, SumMethod method = SumMethod::direct);

/// Visits every lattice k-AP inside the window (any nonzero s) with lattice
/// indices of x and s.
using ApVisitor = std::function<void(std::span<const std::int64_t>, std::span<const std::int64_t>)>;
void for_each_ap(const LatticeBitmap& bitmap, int k, const ApVisitor& visit);

struct PatternScan {
  std::uint64_t total = 0;
  std::uint64_t forbidden_hits = 0;
  double min_side = 0.0;
  double max_side = 0.0;
  /// Up to 16 offending patterns, for diagnostics.
  std::vector<ApHit> examples;
};

/// Exhaustive scan of all k-APs in the window, counting those whose side
/// norm falls in `forbidden`.
PatternScan scan_aps(const PointSet& set, const LatticeWindow& window, int k, LpExponent p,
                     const std::vector<OpenInterval>& forbidden);

struct LiftVariant {
  int k = 3;
  bool generalized = false;

  static LiftVariant pair() noexcept { return {3, false}; }
  static LiftVariant generalized_corner(int k);
};

/// pair: (x,y) -> [y - x in A] on R^d x R^d.
/// generalized(k): (x_1..x_{k-1}) -> [x_1 + 2 x_2 + ... + (k-1) x_{k-1} in A].
PointSet lift_ap_set_to_corners(PointSet a, std::size_t d, LiftVariant variant);

/// Generalised k-element corners in (R^d)^{k-1}: the base point and the k-1
/// points obtained by adding s to one block. Lexicographic (point, s) order.
std::vector<GeneralCornerHit> find_generalized_corners(const PointSet& set, const LatticeWindow& window,
                                                       std::size_t d, int k, double lambda, LpExponent p,
                                                       double tol);
/// Exhaustive scan of generalised corners with any nonzero s; examples are
/// reported with x = base point.
PatternScan scan_generalized_corners(const PointSet& set, const LatticeWindow& window, std::size_t d, int k,
                                     LpExponent p, const std::vector<OpenInterval>& forbidden);

/// Largest corner-free subset of {0..n-1}^2 by exhaustion, 1 <= n <= 4.
int max_corner_free(int n);

struct VarnavidesOptions {
  /// Density level; defaults to the integral of f over the unit box.
  std::optional<double> delta;
  std::size_t samples = 20000;
  std::uint64_t seed = 0;
};

struct VarnavidesResult {
  double fraction = 0.0;     ///< share of sampled (t,u,v) in T
  double delta = 0.0;
  double epsilon = 0.0;
  double domain_volume = 0.0;  ///< (eps/n)^d (1-eps)^{2d}
  double measure_T = 0.0;      ///< fraction * domain_volume
  double lower_bound = 0.0;    ///< (delta/8) * domain_volume
  std::size_t samples = 0;
};

/// Monte Carlo estimate of the good-triple set T of the averaging argument
/// for f on [0,1]^d x [0,1]^d: (t,u,v) is good when at least delta/8 of the
/// n x n subgrid points (u + i t, v + j t) lie in {f >= delta/2, f > 0}.
VarnavidesResult varnavides_corner_density(const GridFunction& f, int n, double epsilon,
                                           const VarnavidesOptions& options = {});

}  // namespace cornerlab
