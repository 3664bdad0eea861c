#include "cornerlab/counting_forms.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cornerlab {

GridInfo GridInfo::of(const GridSpec& spec) { return {spec.shape, spec.spacing, spec.origin}; }

LacunaryScales::LacunaryScales(std::vector<double> scales) : scales_(std::move(scales)) {
  if (scales_.empty()) throw std::invalid_argument("lacunary scales must not be empty");
  for (double s : scales_)
    if (!(s > 0) || !std::isfinite(s)) throw std::invalid_argument("scales must be positive and finite");
  for (std::size_t j = 1; j < scales_.size(); ++j)
    if (!(scales_[j] >= 2.0 * scales_[j - 1]))
      throw std::invalid_argument("scales must be sorted with consecutive ratios >= 2");
}

LacunaryScales LacunaryScales::dyadic_below(double top, std::size_t count) {
  if (count == 0) throw std::invalid_argument("need at least one scale");
  std::vector<double> s(count);
  for (std::size_t j = 0; j < count; ++j) s[j] = std::ldexp(top, -static_cast<int>(count - 1 - j));
  return LacunaryScales(std::move(s));
}

LacunaryScales LacunaryScales::prefix(std::size_t count) const {
  if (count == 0 || count > scales_.size()) throw std::invalid_argument("prefix length out of range");
  return LacunaryScales(std::vector<double>(scales_.begin(), scales_.begin() + static_cast<std::ptrdiff_t>(count)));
}

LacunaryScales LacunaryScales::suffix(std::size_t count) const {
  if (count == 0 || count > scales_.size()) throw std::invalid_argument("suffix length out of range");
  return LacunaryScales(std::vector<double>(scales_.end() - static_cast<std::ptrdiff_t>(count), scales_.end()));
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::size_t corner_dim(const GridFunction& f) {
  const std::size_t D = f.dims();
  if (D == 0 || D % 2 != 0) throw std::invalid_argument("corner forms need a function on R^d x R^d");
  return D / 2;
}

void check_kernel(const GridFunction& f, const LatticeKernel& k) {
  const std::size_t d = corner_dim(f);
  if (k.d() != d) throw std::invalid_argument("kernel dimension does not match the function");
  if (std::abs(k.spacing() - f.spacing()) > 1e-12 * f.spacing())
    throw std::invalid_argument("kernel lattice spacing does not match the grid spacing");
}

// Sums over grid points of several per-point quantities, with the ordered or
// blocked association selected by `method`.
template <class PointFn>
std::vector<double> reduce_points(std::size_t points, std::size_t width, SumMethod method, PointFn&& at_point) {
  if (method == SumMethod::direct) {
    std::vector<double> acc(width, 0.0);
    std::vector<double> tmp(width);
    for (std::size_t p = 0; p < points; ++p) {
      at_point(p, tmp.data());
      for (std::size_t c = 0; c < width; ++c) acc[c] += tmp[c];
    }
    return acc;
  }
  const std::size_t blocks = block_count(points);
  std::vector<double> partial(blocks * width, 0.0);
  for_each_block(points, method, [&](std::size_t b, std::size_t begin, std::size_t end) {
    std::vector<double> tmp(width);
    double* out = &partial[b * width];
    for (std::size_t p = begin; p < end; ++p) {
      at_point(p, tmp.data());
      for (std::size_t c = 0; c < width; ++c) out[c] += tmp[c];
    }
  });
  std::vector<double> acc(width);
  std::vector<double> column(blocks);
  for (std::size_t c = 0; c < width; ++c) {
    for (std::size_t b = 0; b < blocks; ++b) column[b] = partial[b * width + c];
    acc[c] = pairwise_sum(column);
  }
  return acc;
}

// B_j(x,y) = h^d sum_s k_j(s) F(x+s,y) G(x,y+s) for every kernel j, and the
// sums  S1_j = h^{2d} sum W(x,y) B_j(x,y),  S2_j = h^{2d} sum B_j(x,y)^2.
struct CornerSums {
  std::vector<double> first;
  std::vector<double> second;
};

class ShiftEvaluator {
 public:
  ShiftEvaluator(const GridFunction& F, const GridFunction& G, const std::vector<const LatticeKernel*>& kernels)
      : F_(F), G_(G), kernels_(kernels), d_(corner_dim(F)), spec_(F.spec()) {
    if (!(F.spec() == G.spec())) throw std::invalid_argument("F and G must share a grid");
    for (auto* k : kernels_) check_kernel(F, *k);
    if (d_ == 1) {
      n0_ = spec_.shape[0];
      n1_ = spec_.shape[1];
      ft_.resize(n0_ * n1_);
      for (std::size_t i = 0; i < n0_; ++i)
        for (std::size_t a = 0; a < n1_; ++a) ft_[a * n0_ + i] = F[i * n1_ + a];
    } else {
      strides_ = spec_.strides();
    }
    hd_ = std::pow(spec_.spacing, static_cast<double>(d_));
  }

  // Writes B_j at flat point p into out[j].
  void eval(std::size_t p, double* out) const {
    if (d_ == 1) {
      eval_1d(p, out);
    } else {
      eval_nd(p, out);
    }
  }

 private:
  void eval_1d(std::size_t p, double* out) const {
    const auto i = static_cast<std::int64_t>(p / n1_);
    const auto a = static_cast<std::int64_t>(p % n1_);
    const auto n0 = static_cast<std::int64_t>(n0_);
    const auto n1 = static_cast<std::int64_t>(n1_);
    const double* frow = &ft_[static_cast<std::size_t>(a) * n0_];  // F(., a)
    const double* grow = &G_.values()[static_cast<std::size_t>(i) * n1_];  // G(i, .)
    for (std::size_t j = 0; j < kernels_.size(); ++j) {
      const LatticeKernel& k = *kernels_[j];
      const std::int64_t R = k.radius();
      const std::int64_t lo = std::max({-R, -i, -a});
      const std::int64_t hi = std::min({R, n0 - 1 - i, n1 - 1 - a});
      const double* w = k.dense().data() + R;
      double s = 0.0;
      for (std::int64_t t = lo; t <= hi; ++t) s += w[t] * frow[i + t] * grow[a + t];
      out[j] = hd_ * s;
    }
  }

  void eval_nd(std::size_t p, double* out) const {
    std::vector<std::int64_t> idx(2 * d_);
    std::size_t rem = p;
    for (std::size_t a = 2 * d_; a-- > 0;) {
      idx[a] = static_cast<std::int64_t>(rem % spec_.shape[a]);
      rem /= spec_.shape[a];
    }
    for (std::size_t j = 0; j < kernels_.size(); ++j) {
      const LatticeKernel& k = *kernels_[j];
      double s = 0.0;
      for (std::size_t e = 0; e < k.nonzeros(); ++e) {
        const auto off = k.offset(e);
        std::int64_t dx = 0, dy = 0;
        bool inside = true;
        for (std::size_t a = 0; a < d_ && inside; ++a) {
          const std::int64_t cx = idx[a] + off[a];
          const std::int64_t cy = idx[d_ + a] + off[a];
          inside = cx >= 0 && cx < static_cast<std::int64_t>(spec_.shape[a]) && cy >= 0 &&
                   cy < static_cast<std::int64_t>(spec_.shape[d_ + a]);
          dx += off[a] * static_cast<std::int64_t>(strides_[a]);
          dy += off[a] * static_cast<std::int64_t>(strides_[d_ + a]);
        }
        if (!inside) continue;
        s += k.nonzero_weight(e) * F_[static_cast<std::size_t>(static_cast<std::int64_t>(p) + dx)] *
             G_[static_cast<std::size_t>(static_cast<std::int64_t>(p) + dy)];
      }
      out[j] = hd_ * s;
    }
  }

  const GridFunction& F_;
  const GridFunction& G_;
  const std::vector<const LatticeKernel*>& kernels_;
  std::size_t d_;
  GridSpec spec_;
  std::size_t n0_ = 0, n1_ = 0;
  std::vector<double> ft_;
  std::vector<std::size_t> strides_;
  double hd_ = 1.0;
};

CornerSums corner_sums(const GridFunction& W, const GridFunction& F, const GridFunction& G,
                       const std::vector<const LatticeKernel*>& kernels, SumMethod method, bool want_first,
                       bool want_second) {
  const ShiftEvaluator eval(F, G, kernels);
  const std::size_t J = kernels.size();
  const std::size_t width = 2 * J;
  const auto wv = W.values();
  auto at_point = [&](std::size_t p, double* out) {
    std::fill(out, out + width, 0.0);
    const double w = wv[p];
    if (!want_second && w == 0.0) return;
    eval.eval(p, out + J);
    for (std::size_t j = 0; j < J; ++j) {
      const double b = out[J + j];
      out[j] = want_first ? w * b : 0.0;
      out[J + j] = want_second ? b * b : 0.0;
    }
  };
  auto acc = reduce_points(W.size(), width, method, at_point);
  const double h2d = W.spec().cell_volume();
  CornerSums r;
  r.first.assign(acc.begin(), acc.begin() + static_cast<std::ptrdiff_t>(J));
  r.second.assign(acc.begin() + static_cast<std::ptrdiff_t>(J), acc.end());
  for (auto& v : r.first) v *= h2d;
  for (auto& v : r.second) v *= h2d;
  return r;
}

double box_side(const GridFunction& f, const std::optional<double>& side) {
  if (side) {
    if (!(*side > 0)) throw std::invalid_argument("box side must be positive");
    return *side;
  }
  return f.spec().side(0);
}

}  // namespace

FormReport corner_form(const GridFunction& f, const LatticeKernel& kernel, const FormOptions& options) {
  const auto t0 = Clock::now();
  const std::size_t d = corner_dim(f);
  const std::vector<const LatticeKernel*> ks{&kernel};
  const auto sums = corner_sums(f, f, f, ks, options.method, true, false);
  FormReport r;
  r.form = "corner";
  r.value = sums.first[0];
  const double N = box_side(f, options.box_side);
  r.normalization = std::pow(N, 2.0 * static_cast<double>(d));
  r.ratio = r.value / r.normalization;
  r.grid = GridInfo::of(f.spec());
  r.method = options.method;
  r.details["kernel_mass"] = kernel.mass();
  r.details["kernel_radius"] = static_cast<double>(kernel.radius());
  r.elapsed_seconds = seconds_since(t0);
  return r;
}

FormReport corner_form_M(const GridFunction& f, const WindowKernel& k, const FormOptions& options) {
  const auto t0 = Clock::now();
  if (k.d() != corner_dim(f)) throw std::invalid_argument("kernel dimension does not match the function");
  if (options.sampling == KernelSampling::point) {
    const double floor = eta_floor(k.lambda(), k.p(), f.spacing());
    if (k.epsilon() < floor)
      throw std::invalid_argument("shell undersampled: eps=" + std::to_string(k.epsilon()) +
                                  " below point-sampling floor " + std::to_string(floor));
  }
  const auto lk = LatticeKernel::sample(k, f.spacing(), options.sampling);
  FormReport r = corner_form(f, lk, options);
  r.form = "M";
  r.details["lambda"] = k.lambda();
  r.details["epsilon"] = k.epsilon();
  r.details["p"] = k.p().p;
  r.details["kernel_mass_continuum"] = k.mass();
  r.notes["sampling"] = std::string(to_string(options.sampling));
  r.elapsed_seconds = seconds_since(t0);
  return r;
}

FormReport corner_form_N(const GridFunction& f, double lambda, LpExponent p, double eta, const FormOptions& options) {
  const auto t0 = Clock::now();
  const WindowKernel k = thin_shell_surrogate(lambda, p, corner_dim(f), eta, f.spacing());
  FormReport r = corner_form_M(f, k, options);
  r.form = "N";
  r.details["eta"] = eta;
  r.details["eta_floor"] = eta_floor(lambda, p, f.spacing());
  r.elapsed_seconds = seconds_since(t0);
  return r;
}

ShellDifference::ShellDifference(double lambda, double eps, LpExponent p, std::size_t d, const SmoothWindow& window)
    : thin_(lambda, eps, p, d, window), wide_(lambda, 1.0, p, d, window), c1_(cornerlab::c1(eps, p, d, window)) {}

double ShellDifference::operator()(std::span<const double> s) const { return thin_(s) - c1_ * wide_(s); }

double ShellDifference::integral() const { return thin_.mass() - c1_ * wide_.mass(); }

LatticeKernel ShellDifference::lattice(double spacing, KernelSampling mode) const {
  return LatticeKernel::combine(1.0, LatticeKernel::sample(thin_, spacing, mode), -c1_,
                                LatticeKernel::sample(wide_, spacing, mode));
}

FormReport error_form_E(const GridFunction& f, double lambda, double eps, LpExponent p, const FormOptions& options) {
  const auto t0 = Clock::now();
  const std::size_t d = corner_dim(f);
  if (eps == 1.0) {
    FormReport r;
    r.form = "E";
    r.value = 0.0;
    const double N = box_side(f, options.box_side);
    r.normalization = std::pow(N, 2.0 * static_cast<double>(d));
    r.ratio = 0.0;
    r.grid = GridInfo::of(f.spec());
    r.method = options.method;
    r.details["lambda"] = lambda;
    r.details["epsilon"] = eps;
    r.details["c1"] = 1.0;
    r.elapsed_seconds = seconds_since(t0);
    return r;
  }
  const ShellDifference k(lambda, eps, p, d);
  const auto lk = k.lattice(f.spacing(), options.sampling);
  FormReport r = corner_form(f, lk, options);
  r.form = "E";
  r.details["lambda"] = lambda;
  r.details["epsilon"] = eps;
  r.details["c1"] = k.c1();
  r.elapsed_seconds = seconds_since(t0);
  return r;
}

LacunaryKernel::LacunaryKernel(LacunaryScales scales, double eps, LpExponent p, std::size_t d)
    : scales_(std::move(scales)), eps_(eps), p_(p), d_(d) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  parts_.reserve(scales_.size());
  for (double lam : scales_.values()) parts_.emplace_back(lam, eps, p, d);
}

double LacunaryKernel::operator()(std::span<const double> u, std::span<const double> v) const {
  double s = 0.0;
  for (const auto& k : parts_) s += k(u) * k(v);
  return s;
}

double LacunaryKernel::integral() const {
  double s = 0.0;
  for (const auto& k : parts_) {
    const double m = k.integral();
    s += m * m;
  }
  return s;
}

double LacunaryKernel::sup_bound() const {
  double s = 0.0;
  for (const auto& k : parts_) {
    const double m = k.thin().sup() + k.c1() * k.wide().sup();
    s += m * m;
  }
  return s;
}

std::vector<LatticeKernel> LacunaryKernel::lattice(double spacing, KernelSampling mode) const {
  std::vector<LatticeKernel> out;
  out.reserve(parts_.size());
  for (const auto& k : parts_) out.push_back(k.lattice(spacing, mode));
  return out;
}

LacunaryKernel build_K(const LacunaryScales& scales, double eps, LpExponent p, std::size_t d) {
  return LacunaryKernel(scales, eps, p, d);
}

LacunaryEnergy lacunary_energy(const GridFunction& f, const LacunaryScales& scales, double eps, LpExponent p,
                               const FormOptions& options) {
  const auto t0 = Clock::now();
  const std::size_t d = corner_dim(f);
  const double N = box_side(f, options.box_side);
  if (scales[scales.size() - 1] > N) throw std::invalid_argument("largest scale exceeds the box side N");
  const LacunaryKernel K(scales, eps, p, d);
  const auto lattice = K.lattice(f.spacing(), options.sampling);
  std::vector<const LatticeKernel*> ks;
  for (const auto& k : lattice) ks.push_back(&k);
  const auto sums = corner_sums(f, f, f, ks, options.method, true, true);

  LacunaryEnergy out;
  const double norm4 = std::pow(N, 4.0 * static_cast<double>(d));
  double total = 0.0, quad = 0.0;
  for (std::size_t j = 0; j < scales.size(); ++j) {
    out.lambdas.push_back(scales[j]);
    out.E.push_back(sums.first[j]);
    total += sums.first[j] * sums.first[j];
    quad += sums.second[j];
    out.prefix_ratio.push_back(total / norm4);
  }
  out.l2_norm_sq = f.lp_norm_pow(2.0);
  out.quadrilinear = quad;
  out.chain_bound = out.l2_norm_sq * quad;

  FormReport& r = out.report;
  r.form = "lacunary_energy";
  r.value = total;
  r.normalization = norm4;
  r.ratio = total / norm4;
  r.grid = GridInfo::of(f.spec());
  r.method = options.method;
  r.details["J"] = static_cast<double>(scales.size());
  r.details["epsilon"] = eps;
  r.details["c1"] = K.parts().front().c1();
  r.details["l2_norm_sq"] = out.l2_norm_sq;
  r.details["quadrilinear"] = quad;
  r.details["chain_bound"] = out.chain_bound;
  r.notes["sampling"] = std::string(to_string(options.sampling));
  r.elapsed_seconds = seconds_since(t0);
  return out;
}

namespace {

FormReport quadrilinear_impl(const GridFunction& F, const GridFunction& G, const std::vector<LatticeKernel>& parts,
                             const QuadOptions& options, const std::string& label) {
  const auto t0 = Clock::now();
  const std::size_t d = corner_dim(F);
  if (!(F.spec() == G.spec())) throw std::invalid_argument("F and G must share a grid");
  const double points = static_cast<double>(F.size());

  // Union support of the lattice kernels, as a dense box of radius R.
  std::int64_t R = 0;
  double factored_work = 0.0;
  for (const auto& k : parts) {
    R = std::max(R, k.radius());
    factored_work += static_cast<double>(k.nonzeros()) * points;
  }
  const double box = std::pow(static_cast<double>(2 * R + 1), static_cast<double>(d));
  const double dense_work = box * box * points;

  constexpr double kDenseTableLimit = 2e7;
  QuadAlgorithm algo = options.algorithm;
  if (algo == QuadAlgorithm::automatic)
    algo = dense_work <= factored_work * 4.0 && box * box <= kDenseTableLimit ? QuadAlgorithm::dense
                                                                             : QuadAlgorithm::factored;
  if (algo == QuadAlgorithm::dense && box * box > kDenseTableLimit)
    throw CostRefusal("dense K table", box * box, kDenseTableLimit);
  const double work = algo == QuadAlgorithm::dense ? dense_work : factored_work;
  check_budget(work, "quadrilinear form (" + std::string(algo == QuadAlgorithm::dense ? "dense" : "factored") + ")");

  double value = 0.0;
  if (algo == QuadAlgorithm::factored) {
    std::vector<const LatticeKernel*> ks;
    for (const auto& k : parts) ks.push_back(&k);
    const auto sums = corner_sums(F, F, G, ks, options.method, false, true);
    for (double s : sums.second) value += s;
  } else {
    // K sampled on the (u, v) lattice.
    const auto side = static_cast<std::size_t>(2 * R + 1);
    std::size_t cells = 1;
    for (std::size_t a = 0; a < d; ++a) cells *= side;
    std::vector<std::vector<double>> dense(parts.size(), std::vector<double>(cells, 0.0));
    std::vector<std::int64_t> off(d);
    for (std::size_t j = 0; j < parts.size(); ++j)
      for (std::size_t c = 0; c < cells; ++c) {
        std::size_t rem = c;
        for (std::size_t a = d; a-- > 0;) {
          off[a] = static_cast<std::int64_t>(rem % side) - R;
          rem /= side;
        }
        dense[j][c] = parts[j].weight(off);
      }
    std::vector<double> Kuv(cells * cells, 0.0);
    for (std::size_t u = 0; u < cells; ++u)
      for (std::size_t v = 0; v < cells; ++v) {
        double s = 0.0;
        for (std::size_t j = 0; j < parts.size(); ++j) s += dense[j][u] * dense[j][v];
        Kuv[u * cells + v] = s;
      }
    const auto& spec = F.spec();
    const auto strides = spec.strides();
    const double hd = std::pow(spec.spacing, static_cast<double>(d));
    auto at_point = [&](std::size_t p, double* out) {
      std::vector<std::int64_t> idx(2 * d);
      std::size_t rem = p;
      for (std::size_t a = 2 * d; a-- > 0;) {
        idx[a] = static_cast<std::int64_t>(rem % spec.shape[a]);
        rem /= spec.shape[a];
      }
      std::vector<double> P(cells, 0.0);
      std::vector<std::int64_t> o(d);
      for (std::size_t c = 0; c < cells; ++c) {
        std::size_t r2 = c;
        for (std::size_t a = d; a-- > 0;) {
          o[a] = static_cast<std::int64_t>(r2 % side) - R;
          r2 /= side;
        }
        std::int64_t dx = 0, dy = 0;
        bool inside = true;
        for (std::size_t a = 0; a < d && inside; ++a) {
          const std::int64_t cx = idx[a] + o[a];
          const std::int64_t cy = idx[d + a] + o[a];
          inside = cx >= 0 && cx < static_cast<std::int64_t>(spec.shape[a]) && cy >= 0 &&
                   cy < static_cast<std::int64_t>(spec.shape[d + a]);
          dx += o[a] * static_cast<std::int64_t>(strides[a]);
          dy += o[a] * static_cast<std::int64_t>(strides[d + a]);
        }
        if (inside)
          P[c] = F[static_cast<std::size_t>(static_cast<std::int64_t>(p) + dx)] *
                 G[static_cast<std::size_t>(static_cast<std::int64_t>(p) + dy)];
      }
      double s = 0.0;
      for (std::size_t u = 0; u < cells; ++u) {
        if (P[u] == 0.0) continue;
        const double* row = &Kuv[u * cells];
        double inner = 0.0;
        for (std::size_t v = 0; v < cells; ++v) inner += row[v] * P[v];
        s += P[u] * inner;
      }
      out[0] = s;
    };
    const auto acc = reduce_points(F.size(), 1, options.method, at_point);
    value = spec.cell_volume() * hd * hd * acc[0];
  }

  FormReport r;
  r.form = label;
  r.value = value;
  const double nF = std::sqrt(F.lp_norm_pow(4.0));
  const double nG = std::sqrt(G.lp_norm_pow(4.0));
  r.normalization = nF * nG;
  r.ratio = r.normalization > 0.0 ? std::abs(value) / r.normalization : std::numeric_limits<double>::quiet_NaN();
  r.grid = GridInfo::of(F.spec());
  r.method = options.method;
  r.details["tuples"] = work;
  r.details["terms"] = static_cast<double>(parts.size());
  r.notes["algorithm"] = algo == QuadAlgorithm::dense ? "dense" : "factored";
  r.notes["sampling"] = std::string(to_string(options.sampling));
  r.elapsed_seconds = seconds_since(t0);
  return r;
}

}  // namespace

FormReport quadrilinear_form(const GridFunction& F, const GridFunction& G, const LacunaryKernel& K,
                             const QuadOptions& options) {
  if (K.d() != corner_dim(F)) throw std::invalid_argument("kernel dimension does not match the functions");
  auto r = quadrilinear_impl(F, G, K.lattice(F.spacing(), options.sampling), options, "quadrilinear");
  r.details["J"] = static_cast<double>(K.scales().size());
  r.details["epsilon"] = K.epsilon();
  return r;
}

FormReport quadrilinear_form(const GridFunction& F, const GridFunction& G, const LatticeKernel& k,
                             const QuadOptions& options) {
  check_kernel(F, k);
  return quadrilinear_impl(F, G, std::vector<LatticeKernel>{k}, options, "quadrilinear");
}

}  // namespace cornerlab
