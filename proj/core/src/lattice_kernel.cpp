#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cornerlab/kernels.hpp"

namespace cornerlab {

std::string_view to_string(KernelSampling s) noexcept {
  return s == KernelSampling::point ? "point" : "cell_average";
}

KernelSampling parse_kernel_sampling(std::string_view name) {
  if (name == "point") return KernelSampling::point;
  if (name == "cell_average") return KernelSampling::cell_average;
  throw std::invalid_argument("unknown kernel sampling '" + std::string(name) + "'");
}

LatticeKernel::LatticeKernel(std::size_t d, double spacing, std::int64_t radius)
    : d_(d), spacing_(spacing), radius_(radius) {
  if (d == 0 || !(spacing > 0) || radius < 0) throw std::invalid_argument("invalid lattice kernel shape");
  std::size_t n = 1;
  for (std::size_t a = 0; a < d; ++a) n *= side();
  dense_.assign(n, 0.0);
}

double LatticeKernel::weight(std::span<const std::int64_t> offset) const noexcept {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < d_; ++a) {
    if (offset[a] < -radius_ || offset[a] > radius_) return 0.0;
    flat = flat * side() + static_cast<std::size_t>(offset[a] + radius_);
  }
  return dense_[flat];
}

void LatticeKernel::set(std::span<const std::int64_t> offset, double w) {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < d_; ++a) {
    if (offset[a] < -radius_ || offset[a] > radius_) throw std::out_of_range("offset outside kernel box");
    flat = flat * side() + static_cast<std::size_t>(offset[a] + radius_);
  }
  dense_[flat] = w;
}

void LatticeKernel::finalize() {
  nz_offset_.clear();
  nz_weight_.clear();
  std::vector<std::int64_t> idx(d_);
  for (std::size_t flat = 0; flat < dense_.size(); ++flat) {
    if (dense_[flat] == 0.0) continue;
    std::size_t rem = flat;
    for (std::size_t a = d_; a-- > 0;) {
      idx[a] = static_cast<std::int64_t>(rem % side()) - radius_;
      rem /= side();
    }
    nz_offset_.insert(nz_offset_.end(), idx.begin(), idx.end());
    nz_weight_.push_back(dense_[flat]);
  }
}

double LatticeKernel::mass() const noexcept {
  double s = 0.0;
  for (double w : nz_weight_) s += w;
  return std::pow(spacing_, static_cast<double>(d_)) * s;
}

double LatticeKernel::abs_mass() const noexcept {
  double s = 0.0;
  for (double w : nz_weight_) s += std::abs(w);
  return std::pow(spacing_, static_cast<double>(d_)) * s;
}

double LatticeKernel::sup_abs() const noexcept {
  double m = 0.0;
  for (double w : nz_weight_) m = std::max(m, std::abs(w));
  return m;
}

namespace {

// Range of ‖s‖_p over the box prod [lo_a, hi_a].
void norm_range(std::span<const double> lo, std::span<const double> hi, double p, double& nmin, double& nmax) {
  double smin = 0.0, smax = 0.0;
  for (std::size_t a = 0; a < lo.size(); ++a) {
    const double near = (lo[a] <= 0.0 && hi[a] >= 0.0) ? 0.0 : std::min(std::abs(lo[a]), std::abs(hi[a]));
    const double far = std::max(std::abs(lo[a]), std::abs(hi[a]));
    smin += std::pow(near, p);
    smax += std::pow(far, p);
  }
  nmin = std::pow(smin, 1.0 / p);
  nmax = std::pow(smax, 1.0 / p);
}

double cell_average_1d(const WindowKernel& k, double lo, double hi) {
  using boost::math::quadrature::gauss_kronrod;
  const double p = k.p().p;
  const double lam = k.lambda();
  auto f = [&](double s) { return k.radial(std::pow(std::abs(s) / lam, p)); };
  // Split at the support edges so each piece sees a smooth integrand.
  std::vector<double> cuts{lo, hi};
  for (double r : {k.inner_radius(), k.outer_radius()})
    for (double c : {-r, r})
      if (c > lo && c < hi) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double err = 0.0;
    total += gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 12, 1e-12, &err);
  }
  return total / (hi - lo);
}

double cell_average_nd(const WindowKernel& k, std::span<const double> lo, std::span<const double> hi) {
  using Rule = boost::math::quadrature::gauss<double, 8>;
  const std::size_t d = lo.size();
  const double thickness = std::max(k.outer_radius() - k.inner_radius(), 1e-300);
  const double h = hi[0] - lo[0];
  const int q = std::clamp(static_cast<int>(std::ceil(4.0 * h / thickness)), 1, 24);
  const auto& abscissa = Rule::abscissa();
  const auto& weights = Rule::weights();
  // Symmetric rule: expand to the full node list on [-1, 1].
  std::vector<double> x, w;
  for (std::size_t i = 0; i < abscissa.size(); ++i) {
    if (abscissa[i] == 0.0) {
      x.push_back(0.0);
      w.push_back(weights[i]);
    } else {
      x.push_back(abscissa[i]);
      w.push_back(weights[i]);
      x.push_back(-abscissa[i]);
      w.push_back(weights[i]);
    }
  }
  const std::size_t per_axis = static_cast<std::size_t>(q) * x.size();
  std::vector<std::vector<double>> node(d, std::vector<double>(per_axis));
  std::vector<std::vector<double>> wt(d, std::vector<double>(per_axis));
  for (std::size_t a = 0; a < d; ++a) {
    const double sub = (hi[a] - lo[a]) / q;
    for (int j = 0; j < q; ++j)
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double c = lo[a] + (j + 0.5) * sub;
        node[a][j * x.size() + i] = c + 0.5 * sub * x[i];
        wt[a][j * x.size() + i] = 0.5 * sub * w[i] / (hi[a] - lo[a]);
      }
  }
  const double p = k.p().p;
  const double lam = k.lambda();
  std::vector<std::size_t> idx(d, 0);
  double total = 0.0;
  while (true) {
    double u = 0.0, weight = 1.0;
    for (std::size_t a = 0; a < d; ++a) {
      u += std::pow(std::abs(node[a][idx[a]]) / lam, p);
      weight *= wt[a][idx[a]];
    }
    total += weight * k.radial(u);
    std::size_t a = d;
    while (a-- > 0) {
      if (++idx[a] < per_axis) break;
      idx[a] = 0;
    }
    if (a == static_cast<std::size_t>(-1)) break;
  }
  return total;
}

}  // namespace

LatticeKernel LatticeKernel::sample(const WindowKernel& kernel, double spacing, KernelSampling mode) {
  if (!(spacing > 0)) throw std::invalid_argument("spacing must be positive");
  const std::size_t d = kernel.d();
  const double outer = kernel.outer_radius();
  const double inner = kernel.inner_radius();
  const auto radius = static_cast<std::int64_t>(std::ceil(outer / spacing + 0.5));
  LatticeKernel out(d, spacing, radius);
  std::vector<std::int64_t> idx(d, -radius);
  std::vector<double> centre(d), lo(d), hi(d);
  while (true) {
    for (std::size_t a = 0; a < d; ++a) {
      centre[a] = static_cast<double>(idx[a]) * spacing;
      lo[a] = centre[a] - 0.5 * spacing;
      hi[a] = centre[a] + 0.5 * spacing;
    }
    double w = 0.0;
    if (mode == KernelSampling::point) {
      w = kernel(centre);
    } else {
      double nmin, nmax;
      norm_range(lo, hi, kernel.p().p, nmin, nmax);
      if (nmax > inner && nmin < outer) w = d == 1 ? cell_average_1d(kernel, lo[0], hi[0]) : cell_average_nd(kernel, lo, hi);
    }
    if (w != 0.0) out.set(idx, w);
    std::size_t a = d;
    while (a-- > 0) {
      if (++idx[a] <= radius) break;
      idx[a] = -radius;
    }
    if (a == static_cast<std::size_t>(-1)) break;
  }
  out.finalize();
  return out;
}

LatticeKernel LatticeKernel::combine(double a, const LatticeKernel& x, double b, const LatticeKernel& y) {
  if (x.d_ != y.d_ || x.spacing_ != y.spacing_) throw std::invalid_argument("kernels live on different lattices");
  const std::int64_t r = std::max(x.radius_, y.radius_);
  LatticeKernel out(x.d_, x.spacing_, r);
  auto add = [&out](const LatticeKernel& src, double coeff) {
    for (std::size_t i = 0; i < src.nonzeros(); ++i) {
      const auto off = src.offset(i);
      out.set(off, out.weight(off) + coeff * src.nonzero_weight(i));
    }
  };
  add(x, a);
  add(y, b);
  out.finalize();
  return out;
}

}  // namespace cornerlab
