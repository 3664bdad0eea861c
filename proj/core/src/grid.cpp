#include "cornerlab/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cornerlab/rng.hpp"

namespace cornerlab {

GridSpec::GridSpec(std::vector<std::size_t> shape_, double spacing_, std::vector<double> origin_)
    : shape(std::move(shape_)), spacing(spacing_), origin(std::move(origin_)) {
  if (origin.empty()) origin.assign(shape.size(), 0.0);
  validate();
}

GridSpec GridSpec::cube(std::size_t dims, std::size_t n, double side) {
  if (n == 0) throw std::invalid_argument("grid needs at least one sample per axis");
  return GridSpec(std::vector<std::size_t>(dims, n), side / static_cast<double>(n));
}

std::size_t GridSpec::size() const noexcept {
  if (shape.empty()) return 0;
  std::size_t n = 1;
  for (auto s : shape) n *= s;
  return n;
}

std::vector<std::size_t> GridSpec::strides() const {
  std::vector<std::size_t> st(shape.size(), 1);
  for (std::size_t a = shape.size(); a-- > 1;) st[a - 1] = st[a] * shape[a];
  return st;
}

double GridSpec::cell_volume() const noexcept {
  return std::pow(spacing, static_cast<double>(shape.size()));
}

void GridSpec::validate() const {
  if (shape.empty()) throw std::invalid_argument("grid has no axes");
  for (auto s : shape)
    if (s == 0) throw std::invalid_argument("grid axis has zero samples");
  if (!(spacing > 0) || !std::isfinite(spacing))
    throw std::invalid_argument("grid spacing must be positive and finite");
  if (origin.size() != shape.size())
    throw std::invalid_argument("grid origin has " + std::to_string(origin.size()) +
                                " components, expected " + std::to_string(shape.size()));
  for (double o : origin)
    if (!std::isfinite(o)) throw std::invalid_argument("grid origin must be finite");
}

GridFunction::GridFunction(GridSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  values_.assign(spec_.size(), 0.0);
}

GridFunction::GridFunction(GridSpec spec, std::vector<double> values)
    : spec_(std::move(spec)), values_(std::move(values)) {
  spec_.validate();
  if (values_.size() != spec_.size())
    throw std::invalid_argument("value count does not match grid shape");
  if (!all_finite()) throw std::invalid_argument("grid values must be finite");
}

GridFunction GridFunction::sample(const GridSpec& spec, const PointFn& fn) {
  GridFunction out(spec);
  const std::size_t D = spec.dims();
  std::vector<std::size_t> idx(D, 0);
  std::vector<double> point(D);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    for (std::size_t a = 0; a < D; ++a) point[a] = spec.coordinate(a, static_cast<std::int64_t>(idx[a]));
    const double v = fn(point);
    if (!std::isfinite(v)) throw std::invalid_argument("sampled function returned a non-finite value");
    out.values_[flat] = v;
    for (std::size_t a = D; a-- > 0;) {
      if (++idx[a] < spec.shape[a]) break;
      idx[a] = 0;
    }
  }
  return out;
}

double GridFunction::at(std::span<const std::int64_t> index) const noexcept {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < index.size(); ++a) {
    const auto k = index[a];
    if (k < 0 || static_cast<std::size_t>(k) >= spec_.shape[a]) return 0.0;
    flat = flat * spec_.shape[a] + static_cast<std::size_t>(k);
  }
  return values_[flat];
}

double GridFunction::interpolate(std::span<const double> point) const {
  const std::size_t D = dims();
  if (point.size() != D) throw std::invalid_argument("interpolation point has wrong dimension");
  std::vector<std::int64_t> base(D);
  std::vector<double> frac(D);
  for (std::size_t a = 0; a < D; ++a) {
    const double u = (point[a] - spec_.origin[a]) / spec_.spacing - 0.5;
    const double fl = std::floor(u);
    base[a] = static_cast<std::int64_t>(fl);
    frac[a] = u - fl;
  }
  double acc = 0.0;
  std::vector<std::int64_t> corner(D);
  for (std::size_t mask = 0; mask < (std::size_t{1} << D); ++mask) {
    double w = 1.0;
    for (std::size_t a = 0; a < D; ++a) {
      const bool up = (mask >> a) & 1u;
      corner[a] = base[a] + (up ? 1 : 0);
      w *= up ? frac[a] : 1.0 - frac[a];
    }
    if (w != 0.0) acc += w * at(corner);
  }
  return acc;
}

double GridFunction::riemann_integral() const noexcept {
  double s = 0.0;
  for (double v : values_) s += v;
  return spec_.cell_volume() * s;
}

double GridFunction::lp_norm_pow(double p) const {
  if (!(p > 0)) throw std::invalid_argument("norm exponent must be positive");
  double s = 0.0;
  if (p == 2.0) {
    for (double v : values_) s += v * v;
  } else if (p == 4.0) {
    for (double v : values_) s += (v * v) * (v * v);
  } else {
    for (double v : values_) s += std::pow(std::abs(v), p);
  }
  return spec_.cell_volume() * s;
}

double GridFunction::lp_norm(double p) const { return std::pow(lp_norm_pow(p), 1.0 / p); }

bool GridFunction::all_finite() const noexcept {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

GridFunction GridFunction::dilate(double t) const {
  if (!(t > 0) || !std::isfinite(t)) throw std::invalid_argument("dilation factor must be positive");
  GridSpec spec = spec_;
  spec.spacing *= t;
  for (double& o : spec.origin) o *= t;
  GridFunction out(std::move(spec));
  const double scale = std::pow(t, -static_cast<double>(dims()));
  for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] = scale * values_[i];
  return out;
}

GridFunction GridFunction::resample(const GridSpec& target) const {
  if (target.dims() != dims()) throw std::invalid_argument("resample target has wrong dimension");
  return sample(target, [this](std::span<const double> x) { return interpolate(x); });
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  if (!(other.spec_ == spec_)) throw std::invalid_argument("grid functions live on different grids");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(double scalar) noexcept {
  for (double& v : values_) v *= scalar;
  return *this;
}

GridFunction random_cell_set(const GridSpec& spec, double delta, std::uint64_t seed,
                             std::uint64_t stream) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("density must lie in [0, 1]");
  GridFunction out(spec);
  const CounterRng rng(seed, stream);
  auto vals = out.values();
  for (std::size_t c = 0; c < vals.size(); ++c) vals[c] = rng.bernoulli(c, delta) ? 1.0 : 0.0;
  return out;
}

GridFunction random_uniform(const GridSpec& spec, double lo, double hi, std::uint64_t seed,
                            std::uint64_t stream) {
  GridFunction out(spec);
  const CounterRng rng(seed, stream);
  auto vals = out.values();
  for (std::size_t c = 0; c < vals.size(); ++c) vals[c] = rng.uniform(c, lo, hi);
  return out;
}

}  // namespace cornerlab
