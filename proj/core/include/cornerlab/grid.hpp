#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace cornerlab {

/// Uniform cell-centred lattice over a box. Sample k along axis a sits at
/// origin[a] + (k + 1/2) * spacing, so the box is
/// [origin, origin + shape * spacing]. Storage is row-major (last axis
/// fastest), which is also the lexicographic summation order.
struct GridSpec {
  std::vector<std::size_t> shape;
  double spacing = 1.0;
  std::vector<double> origin;

  GridSpec() = default;
  GridSpec(std::vector<std::size_t> shape, double spacing, std::vector<double> origin = {});

  /// n^dims cube of side `side` starting at the origin.
  static GridSpec cube(std::size_t dims, std::size_t n, double side);

  std::size_t dims() const noexcept { return shape.size(); }
  std::size_t size() const noexcept;
  std::vector<std::size_t> strides() const;
  double coordinate(std::size_t axis, std::int64_t k) const noexcept {
    return origin[axis] + (static_cast<double>(k) + 0.5) * spacing;
  }
  /// Cell volume h^dims.
  double cell_volume() const noexcept;
  double side(std::size_t axis) const noexcept { return static_cast<double>(shape[axis]) * spacing; }

  void validate() const;
  bool operator==(const GridSpec&) const = default;
};

/// Real samples on a GridSpec. Outside the box the function is zero.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(GridSpec spec);
  GridFunction(GridSpec spec, std::vector<double> values);

  using PointFn = std::function<double(std::span<const double>)>;
  /// Point samples of `fn` at the cell centres.
  static GridFunction sample(const GridSpec& spec, const PointFn& fn);

  const GridSpec& spec() const noexcept { return spec_; }
  std::size_t dims() const noexcept { return spec_.dims(); }
  std::size_t size() const noexcept { return values_.size(); }
  double spacing() const noexcept { return spec_.spacing; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t flat) const noexcept { return values_[flat]; }
  double& operator[](std::size_t flat) noexcept { return values_[flat]; }

  /// Value at an integer multi-index; zero outside the box.
  double at(std::span<const std::int64_t> index) const noexcept;
  /// Multilinear interpolation between cell centres, zero beyond the box.
  double interpolate(std::span<const double> point) const;

  /// h^dims * sum of values.
  double riemann_integral() const noexcept;
  /// h^dims * sum |f|^p.
  double lp_norm_pow(double p) const;
  double lp_norm(double p) const;
  bool all_finite() const noexcept;

  /// L^1-normalised dilate f_t(x) = t^{-d} f(x/t), represented exactly on
  /// the dilated grid (spacing and origin scaled by t).
  GridFunction dilate(double t) const;
  /// Resample by interpolation onto another grid.
  GridFunction resample(const GridSpec& target) const;

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator*=(double scalar) noexcept;
  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator*(double s, GridFunction a) { return a *= s; }

 private:
  GridSpec spec_;
  std::vector<double> values_;
};

/// Indicator of a per-cell Bernoulli(delta) set; cell c is drawn with index c
/// of a CounterRng(seed, stream), so the set is fixed by (seed, stream).
GridFunction random_cell_set(const GridSpec& spec, double delta, std::uint64_t seed,
                             std::uint64_t stream = 0);
/// Values uniform on [lo, hi), same addressing as random_cell_set.
GridFunction random_uniform(const GridSpec& spec, double lo, double hi, std::uint64_t seed,
                            std::uint64_t stream = 0);

}  // namespace cornerlab
