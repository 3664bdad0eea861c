#include "cornerlab/gowers.hpp"

#include <fftw3.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace cornerlab {

namespace {

using Clock = std::chrono::steady_clock;

void check_degree(int k) {
  if (k != 2 && k != 3) throw std::invalid_argument("Gowers degree k must be 2 or 3");
}

// Multi-index helpers over a shape.
struct Box {
  std::vector<std::int64_t> shape;
  std::vector<std::int64_t> stride;

  explicit Box(const GridSpec& s) {
    for (auto n : s.shape) shape.push_back(static_cast<std::int64_t>(n));
    stride.assign(shape.size(), 1);
    for (std::size_t a = shape.size(); a-- > 1;) stride[a - 1] = stride[a] * shape[a];
  }
  std::size_t dims() const { return shape.size(); }
};

// sum_k (sum_x g(x) g(x+k))^2 over all shifts k, g zero outside the box.
double autocorrelation_energy(const std::vector<double>& g, const Box& box) {
  const std::size_t D = box.dims();
  if (D == 1) {
    const auto n = box.shape[0];
    double total = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
      double a = 0.0;
      for (std::int64_t x = 0; x + k < n; ++x) a += g[static_cast<std::size_t>(x)] * g[static_cast<std::size_t>(x + k)];
      total += (k == 0 ? 1.0 : 2.0) * a * a;
    }
    return total;
  }
  // Generic: shifts k in (-n, n)^D.
  std::vector<std::int64_t> k(D);
  for (std::size_t a = 0; a < D; ++a) k[a] = -(box.shape[a] - 1);
  double total = 0.0;
  std::vector<std::int64_t> x(D);
  while (true) {
    std::vector<std::int64_t> lo(D), hi(D);
    bool empty = false;
    for (std::size_t a = 0; a < D; ++a) {
      lo[a] = std::max<std::int64_t>(0, -k[a]);
      hi[a] = std::min<std::int64_t>(box.shape[a], box.shape[a] - k[a]);
      empty |= lo[a] >= hi[a];
    }
    if (!empty) {
      std::int64_t shift = 0;
      for (std::size_t a = 0; a < D; ++a) shift += k[a] * box.stride[a];
      double acc = 0.0;
      x = lo;
      while (true) {
        std::int64_t flat = 0;
        for (std::size_t a = 0; a < D; ++a) flat += x[a] * box.stride[a];
        acc += g[static_cast<std::size_t>(flat)] * g[static_cast<std::size_t>(flat + shift)];
        std::size_t a = D;
        while (a-- > 0) {
          if (++x[a] < hi[a]) break;
          x[a] = lo[a];
        }
        if (a == static_cast<std::size_t>(-1)) break;
      }
      total += acc * acc;
    }
    std::size_t a = D;
    while (a-- > 0) {
      if (++k[a] < box.shape[a]) break;
      k[a] = -(box.shape[a] - 1);
    }
    if (a == static_cast<std::size_t>(-1)) break;
  }
  return total;
}

// g(x) = f(x) f(x + k3), zero-extended.
void multiplicative_derivative(std::span<const double> f, const Box& box, std::span<const std::int64_t> k3,
                               std::vector<double>& out) {
  const std::size_t D = box.dims();
  out.assign(f.size(), 0.0);
  std::vector<std::int64_t> x(D, 0);
  std::int64_t shift = 0;
  for (std::size_t a = 0; a < D; ++a) shift += k3[a] * box.stride[a];
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    bool inside = true;
    for (std::size_t a = 0; a < D && inside; ++a) {
      const auto c = x[a] + k3[a];
      inside = c >= 0 && c < box.shape[a];
    }
    if (inside) out[flat] = f[flat] * f[static_cast<std::size_t>(static_cast<std::int64_t>(flat) + shift)];
    for (std::size_t a = D; a-- > 0;) {
      if (++x[a] < box.shape[a]) break;
      x[a] = 0;
    }
  }
}

std::size_t shift_count(const Box& box) {
  std::size_t n = 1;
  for (auto s : box.shape) n *= static_cast<std::size_t>(2 * s - 1);
  return n;
}

std::vector<std::int64_t> shift_at(const Box& box, std::size_t idx) {
  const std::size_t D = box.dims();
  std::vector<std::int64_t> k(D);
  for (std::size_t a = D; a-- > 0;) {
    const auto span = static_cast<std::size_t>(2 * box.shape[a] - 1);
    k[a] = static_cast<std::int64_t>(idx % span) - (box.shape[a] - 1);
    idx /= span;
  }
  return k;
}

}  // namespace

UniformityNormResult gowers_norm(const GridFunction& f, int k, SumMethod method) {
  check_degree(k);
  const auto t0 = Clock::now();
  const Box box(f.spec());
  const double n = static_cast<double>(f.size());
  const double shifts = static_cast<double>(shift_count(box));
  check_budget(k == 2 ? shifts * n : shifts * shifts * n, "Gowers U^" + std::to_string(k) + " norm");
  const double hd = f.spec().cell_volume();
  const std::vector<double> values(f.values().begin(), f.values().end());

  UniformityNormResult r;
  r.k = k;
  r.method = method;
  if (k == 2) {
    r.power = hd * hd * hd * autocorrelation_energy(values, box);
    r.normalization = "riemann h^{3d}";
  } else {
    const std::size_t S = shift_count(box);
    const double raw = reduce(S, method, [&](std::size_t begin, std::size_t end) {
      std::vector<double> g;
      double acc = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        const auto k3 = shift_at(box, i);
        multiplicative_derivative(values, box, k3, g);
        acc += autocorrelation_energy(g, box);
      }
      return acc;
    });
    r.power = hd * hd * hd * hd * raw;
    r.normalization = "riemann h^{4d}";
  }
  r.power = std::max(r.power, 0.0);
  r.value = std::pow(r.power, 1.0 / (k == 2 ? 4.0 : 8.0));
  r.elapsed_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

double gowers_power_naive(const GridFunction& f, int k) {
  check_degree(k);
  const Box box(f.spec());
  const std::size_t D = box.dims();
  const double n = static_cast<double>(f.size());
  const double shifts = static_cast<double>(shift_count(box));
  check_budget(n * std::pow(shifts, k), "naive Gowers sum");
  const double hd = f.spec().cell_volume();
  const auto S = shift_count(box);

  auto value_at = [&](const std::vector<std::int64_t>& x) {
    std::int64_t flat = 0;
    for (std::size_t a = 0; a < D; ++a) {
      if (x[a] < 0 || x[a] >= box.shape[a]) return 0.0;
      flat += x[a] * box.stride[a];
    }
    return f[static_cast<std::size_t>(flat)];
  };

  const std::size_t corners = std::size_t{1} << k;
  std::vector<std::vector<std::int64_t>> h(static_cast<std::size_t>(k));
  std::vector<std::size_t> hi(static_cast<std::size_t>(k), 0);
  std::vector<std::int64_t> x(D), pt(D);
  double total = 0.0;
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    std::size_t rem = flat;
    for (std::size_t a = D; a-- > 0;) {
      x[a] = static_cast<std::int64_t>(rem % static_cast<std::size_t>(box.shape[a]));
      rem /= static_cast<std::size_t>(box.shape[a]);
    }
    if (f[flat] == 0.0) continue;
    std::fill(hi.begin(), hi.end(), 0);
    while (true) {
      for (int j = 0; j < k; ++j) h[static_cast<std::size_t>(j)] = shift_at(box, hi[static_cast<std::size_t>(j)]);
      double prod = 1.0;
      for (std::size_t c = 0; c < corners && prod != 0.0; ++c) {
        pt = x;
        for (int j = 0; j < k; ++j)
          if ((c >> j) & 1u)
            for (std::size_t a = 0; a < D; ++a) pt[a] += h[static_cast<std::size_t>(j)][a];
        prod *= value_at(pt);
      }
      total += prod;
      int j = k;
      while (j-- > 0) {
        if (++hi[static_cast<std::size_t>(j)] < S) break;
        hi[static_cast<std::size_t>(j)] = 0;
      }
      if (j < 0) break;
    }
  }
  return std::pow(hd, static_cast<double>(k + 1)) * total;
}

namespace {

// FFTW planning is not thread safe.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

// Forward complex DFT of a real array of the given periodic shape.
std::vector<std::complex<double>> dft(const std::vector<double>& data, const std::vector<int>& shape) {
  const std::size_t total = data.size();
  auto* in = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
  auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
  if (!in || !out) throw std::bad_alloc();
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_mutex());
    plan = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), in, out, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < total; ++i) {
    in[i][0] = data[i];
    in[i][1] = 0.0;
  }
  fftw_execute(plan);
  std::vector<std::complex<double>> res(total);
  for (std::size_t i = 0; i < total; ++i) res[i] = {out[i][0], out[i][1]};
  {
    std::lock_guard lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return res;
}

// f zero-padded into a periodic box of `factor` times its shape.
std::vector<double> pad(const GridFunction& f, std::size_t factor, std::vector<int>& shape) {
  const auto& spec = f.spec();
  const std::size_t D = spec.dims();
  shape.resize(D);
  std::size_t total = 1;
  for (std::size_t a = 0; a < D; ++a) {
    shape[a] = static_cast<int>(spec.shape[a] * factor);
    total *= static_cast<std::size_t>(shape[a]);
  }
  std::vector<double> out(total, 0.0);
  std::vector<std::size_t> idx(D, 0);
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    std::size_t target = 0;
    for (std::size_t a = 0; a < D; ++a) target = target * static_cast<std::size_t>(shape[a]) + idx[a];
    out[target] = f[flat];
    for (std::size_t a = D; a-- > 0;) {
      if (++idx[a] < spec.shape[a]) break;
      idx[a] = 0;
    }
  }
  return out;
}

}  // namespace

double gowers_u2_fourier(const GridFunction& f) {
  std::vector<int> shape;
  const auto padded = pad(f, 4, shape);
  const auto F = dft(padded, shape);
  double s = 0.0;
  for (const auto& c : F) {
    const double m = std::norm(c);
    s += m * m;
  }
  const double hd = f.spec().cell_volume();
  return hd * hd * hd * s / static_cast<double>(padded.size());
}

MonotonicityReport monotonicity_check(const GridFunction& f, double tolerance) {
  std::vector<int> shape;
  const auto g = pad(f, 2, shape);
  const std::size_t D = shape.size();
  const std::size_t M = g.size();
  const double inv = 1.0 / static_cast<double>(M);

  // Averaged U^2: sum_xi |E_x g(x) e(-x xi)|^4.
  auto u2_power = [&](const std::vector<double>& data) {
    const auto F = dft(data, shape);
    double s = 0.0;
    for (const auto& c : F) {
      const double m = std::norm(c) * inv * inv;
      s += m * m;
    }
    return s;
  };

  MonotonicityReport r;
  r.period = static_cast<std::size_t>(shape[0]);
  const double p2 = u2_power(g);
  // Averaged U^3: E_{h} ‖g * g(. + h)‖_{U^2}^4, cyclic shifts.
  std::vector<std::int64_t> stride(D, 1);
  for (std::size_t a = D; a-- > 1;) stride[a - 1] = stride[a] * shape[a];
  std::vector<double> prod(M);
  double p3 = 0.0;
  std::vector<std::int64_t> h(D, 0), x(D, 0);
  for (std::size_t hs = 0; hs < M; ++hs) {
    std::size_t rem = hs;
    for (std::size_t a = D; a-- > 0;) {
      h[a] = static_cast<std::int64_t>(rem % static_cast<std::size_t>(shape[a]));
      rem /= static_cast<std::size_t>(shape[a]);
    }
    std::fill(x.begin(), x.end(), 0);
    for (std::size_t flat = 0; flat < M; ++flat) {
      std::int64_t other = 0;
      for (std::size_t a = 0; a < D; ++a) other += ((x[a] + h[a]) % shape[a]) * stride[a];
      prod[flat] = g[flat] * g[static_cast<std::size_t>(other)];
      for (std::size_t a = D; a-- > 0;) {
        if (++x[a] < shape[a]) break;
        x[a] = 0;
      }
    }
    p3 += u2_power(prod);
  }
  p3 *= inv;
  r.u2 = std::pow(std::max(p2, 0.0), 0.25);
  r.u3 = std::pow(std::max(p3, 0.0), 0.125);
  r.holds = r.u2 <= r.u3 * (1.0 + tolerance) + tolerance * 1e-300;
  return r;
}

namespace {

ScalingReport finish_scaling(double t, int k, std::size_t d, double base, double dilated) {
  ScalingReport r;
  r.t = t;
  r.k = k;
  r.exponent = -static_cast<double>(d) * (1.0 - (k + 1.0) / std::pow(2.0, k));
  r.predicted = std::pow(t, r.exponent);
  if (!(base > 0)) throw std::invalid_argument("scaling check needs a function with nonzero U^k norm");
  r.measured = dilated / base;
  r.deviation = std::abs(r.measured / r.predicted - 1.0);
  return r;
}

}  // namespace

ScalingReport scaling_check(const GridFunction& f, double t, int k) {
  check_degree(k);
  if (!(t > 0) || !std::isfinite(t)) throw std::invalid_argument("dilation factor must be positive");
  const auto& spec = f.spec();
  GridSpec target = spec;
  for (std::size_t a = 0; a < spec.dims(); ++a) {
    const double cells = std::ceil(static_cast<double>(spec.shape[a]) * t - 1e-9);
    if (cells < 2.0) throw std::invalid_argument("dilated grid underflows: fewer than two cells per axis");
    target.shape[a] = static_cast<std::size_t>(cells);
    target.origin[a] = spec.origin[a] * t;
  }
  const double scale = std::pow(t, -static_cast<double>(spec.dims()));
  const auto ft = GridFunction::sample(target, [&](std::span<const double> x) {
    std::vector<double> y(x.begin(), x.end());
    for (double& c : y) c /= t;
    return scale * f.interpolate(y);
  });
  return finish_scaling(t, k, spec.dims(), gowers_norm(f, k).value, gowers_norm(ft, k).value);
}

ScalingReport scaling_check(const RealFn& f, std::size_t d, double half_extent, std::size_t n, double t, int k) {
  check_degree(k);
  if (!(t > 0) || !std::isfinite(t)) throw std::invalid_argument("dilation factor must be positive");
  if (!(half_extent > 0) || n < 2) throw std::invalid_argument("invalid sampling box");
  const double h = 2.0 * half_extent / static_cast<double>(n);
  const auto cells = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * t - 1e-9));
  if (cells < 2) throw std::invalid_argument("dilated grid underflows: fewer than two cells per axis");
  const GridSpec base(std::vector<std::size_t>(d, n), h, std::vector<double>(d, -half_extent));
  const double R = 0.5 * static_cast<double>(cells) * h;
  const GridSpec dil(std::vector<std::size_t>(d, cells), h, std::vector<double>(d, -R));
  const auto f0 = GridFunction::sample(base, f);
  const auto ft = GridFunction::sample(dil, dilate(f, d, t));
  return finish_scaling(t, k, d, gowers_norm(f0, k).value, gowers_norm(ft, k).value);
}

std::string_view to_string(VonNeumannStatus s) noexcept {
  switch (s) {
    case VonNeumannStatus::ok: return "ok";
    case VonNeumannStatus::vacuous: return "vacuous";
    case VonNeumannStatus::violation: return "violation";
  }
  return "ok";
}

GridFunction lattice_kernel_function(const LatticeKernel& k) {
  const auto R = k.radius();
  const double h = k.spacing();
  GridSpec spec(std::vector<std::size_t>(k.d(), k.side()), h,
                std::vector<double>(k.d(), -(static_cast<double>(R) + 0.5) * h));
  std::vector<double> v(k.dense().begin(), k.dense().end());
  return GridFunction(std::move(spec), std::move(v));
}

VonNeumannReport von_neumann_check(const GridFunction& f, const LatticeKernel& g, double lambda,
                                   const FormOptions& options) {
  if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
  const std::size_t d = g.d();
  VonNeumannReport r;
  r.form_value = corner_form(f, g, options).value;
  r.u3 = gowers_norm(lattice_kernel_function(g), 3, options.method).value;
  const double N = options.box_side.value_or(f.spec().side(0));
  r.normalization = std::pow(N, 2.0 * static_cast<double>(d)) * std::pow(lambda, 0.5 * static_cast<double>(d)) * r.u3;
  if (r.u3 == 0.0) {
    r.status = r.form_value == 0.0 ? VonNeumannStatus::vacuous : VonNeumannStatus::violation;
    r.ratio = r.form_value == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    r.status = VonNeumannStatus::ok;
    r.ratio = std::abs(r.form_value) / r.normalization;
  }
  return r;
}

double shell_window_u3_gap(double lambda, double eps, double eta, LpExponent p, std::size_t d, double spacing,
                           KernelSampling mode) {
  const auto a = LatticeKernel::sample(WindowKernel(lambda, eta, p, d), spacing, mode);
  const auto b = LatticeKernel::sample(WindowKernel(lambda, eps, p, d), spacing, mode);
  return gowers_norm(lattice_kernel_function(LatticeKernel::combine(1.0, a, -1.0, b)), 3).value;
}

}  // namespace cornerlab
