#include "cornerlab/lp_patterns.hpp"

#include <algorithm>
#include <bit>
#include <iterator>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "cornerlab/rng.hpp"

namespace cornerlab {

namespace {

double ipow(double x, int p) noexcept {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

double factorial_d(int p) noexcept {
  double r = 1.0;
  for (int i = 2; i <= p; ++i) r *= i;
  return r;
}

double binom_d(int n, int k) noexcept {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Absorbs the last-bit rounding of a computed norm in tolerance tests.
bool within(double norm, double lambda, double tol) noexcept {
  return std::abs(norm - lambda) <= tol + 4.0 * std::numeric_limits<double>::epsilon() * lambda;
}

void check_integer_order(int p) {
  if (p < 1) throw std::invalid_argument("exponent p must be a positive integer");
}

}  // namespace

LpExponent LpExponent::finite(double p) {
  LpExponent e{p, false};
  e.validate();
  return e;
}

void LpExponent::validate() const {
  if (infinite) return;
  if (!std::isfinite(p) || p < 1.0) throw std::invalid_argument("l^p exponent must satisfy p >= 1");
}

std::string LpExponent::to_string() const {
  if (infinite) return "inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

double lp_norm_pow(std::span<const double> v, double p) {
  double s = 0.0;
  const double rp = std::round(p);
  if (rp == p && p <= 8.0) {
    const int ip = static_cast<int>(rp);
    for (double x : v) s += ipow(std::abs(x), ip);
  } else {
    for (double x : v) s += std::pow(std::abs(x), p);
  }
  return s;
}

double lp_norm(std::span<const double> v, LpExponent p) {
  p.validate();
  if (v.empty()) throw std::invalid_argument("lp_norm of an empty vector");
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument("lp_norm of a non-finite vector");
  if (p.infinite) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  if (p.p == 1.0) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
  }
  if (p.p == 2.0) {
    // Scaled to avoid overflow and underflow.
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    for (double x : v) s += (x / scale) * (x / scale);
    return scale * std::sqrt(s);
  }
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x) / scale, p.p);
  return scale * std::pow(s, 1.0 / p.p);
}

std::vector<OpenInterval> bourgain_forbidden_intervals(int n_max) {
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  std::vector<OpenInterval> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n)
    out.push_back({std::sqrt((5.0 * n - 3.0) / 10.0), std::sqrt((5.0 * n - 2.0) / 10.0)});
  return out;
}

std::vector<OpenInterval> general_forbidden_intervals(int p, int n_max) {
  check_integer_order(p);
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  const double denom = 4.0 * factorial_d(p);
  std::vector<OpenInterval> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n)
    out.push_back({std::pow((4.0 * n - 3.0) / denom, 1.0 / p), std::pow((4.0 * n - 1.0) / denom, 1.0 / p)});
  return out;
}

bool in_any(const std::vector<OpenInterval>& intervals, double value) noexcept {
  auto it = std::upper_bound(intervals.begin(), intervals.end(), value,
                             [](double v, const OpenInterval& iv) { return v < iv.hi; });
  return it != intervals.end() && it->contains(value);
}

ShellSet ShellSet::annuli(std::size_t d, long n_max) {
  ShellSet s{2, d, 0.1, false, n_max};
  s.validate();
  return s;
}

ShellSet ShellSet::power_shells(int p, std::size_t d, long n_max) {
  ShellSet s{p, d, std::ldexp(1.0, -p - 2), true, n_max};
  s.validate();
  return s;
}

long ShellSet::cap_for_window(int p, std::size_t d, double side) {
  check_integer_order(p);
  if (!(side > 0)) throw std::invalid_argument("window side must be positive");
  return static_cast<long>(std::ceil(std::pow(side, p) * static_cast<double>(d))) + 1;
}

void ShellSet::validate() const {
  check_integer_order(p);
  if (d == 0) throw std::invalid_argument("shell dimension must be positive");
  if (!(half_width > 0.0 && half_width < 0.5)) throw std::invalid_argument("shell half-width must lie in (0, 1/2)");
  if (n_max < 1) throw std::invalid_argument("shell cap n_max must be at least 1");
}

bool ShellSet::contains(std::span<const double> x) const {
  if (x.size() != d) throw std::invalid_argument("point dimension does not match shell set");
  if (positivity)
    for (double c : x)
      if (c < 0.0) return false;
  double v = 0.0;
  for (double c : x) v += ipow(std::abs(c), p);
  const double n = std::max(1.0, std::round(v));
  if (n > static_cast<double>(n_max)) return false;
  return std::abs(v - n) <= half_width;
}

bool shell_membership(std::span<const double> x, const ShellSet& shell) { return shell.contains(x); }

double binomial_difference(std::span<const double> x, std::span<const double> s, int p) {
  check_integer_order(p);
  if (x.size() != s.size() || x.empty()) throw std::invalid_argument("x and s must have the same positive length");
  double total = 0.0;
  for (int j = 0; j <= p; ++j) {
    double norm_pow = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double c = x[i] + j * s[i];
      if (c < 0.0) throw std::invalid_argument("x + j*s has a negative coordinate");
      norm_pow += ipow(c, p);
    }
    const double term = binom_d(p, j) * norm_pow;
    total += ((p - j) % 2 == 0) ? term : -term;
  }
  return total;
}

double scalar_finite_difference(double alpha, double beta, int p, int l) {
  check_integer_order(p);
  if (l < 0 || l > p) throw std::invalid_argument("l must satisfy 0 <= l <= p");
  double total = 0.0;
  for (int j = 0; j <= p; ++j) {
    const double term = binom_d(p, j) * ipow(alpha + j * beta, l);
    total += ((p - j) % 2 == 0) ? term : -term;
  }
  return total;
}

LatticeWindow LatticeWindow::cube(std::size_t dims, double lo, double hi, double spacing) {
  if (!(spacing > 0) || !(hi >= lo)) throw std::invalid_argument("invalid lattice window");
  const double steps = (hi - lo) / spacing;
  const double r = std::round(steps);
  if (std::abs(steps - r) > 1e-9 * std::max(1.0, r))
    throw std::invalid_argument("window side is not a multiple of the spacing");
  LatticeWindow w{std::vector<double>(dims, lo), spacing,
                  std::vector<std::size_t>(dims, static_cast<std::size_t>(r) + 1)};
  w.validate();
  return w;
}

std::size_t LatticeWindow::size() const noexcept {
  if (points.empty()) return 0;
  std::size_t n = 1;
  for (auto p : points) n *= p;
  return n;
}

void LatticeWindow::validate() const {
  if (points.empty() || size() == 0) throw std::invalid_argument("empty lattice window");
  if (lower.size() != points.size()) throw std::invalid_argument("window lower corner has wrong dimension");
  if (!(spacing > 0) || !std::isfinite(spacing)) throw std::invalid_argument("lattice spacing must be positive");
}

double default_search_spacing(double lambda) noexcept { return lambda / 32.0; }
double default_search_tolerance(double spacing, std::size_t d) noexcept {
  return spacing * static_cast<double>(d);
}

LatticeBitmap::LatticeBitmap(const PointSet& set, const LatticeWindow& window) : window_(window) {
  window_.validate();
  const std::size_t D = window_.dims();
  bits_.assign(window_.size(), 0);
  std::vector<std::int64_t> idx(D, 0);
  std::vector<double> pt(D);
  for (std::size_t flat = 0; flat < bits_.size(); ++flat) {
    for (std::size_t a = 0; a < D; ++a) pt[a] = window_.coordinate(a, idx[a]);
    if (set(pt)) {
      bits_[flat] = 1;
      ++count_;
    }
    for (std::size_t a = D; a-- > 0;) {
      if (static_cast<std::size_t>(++idx[a]) < window_.points[a]) break;
      idx[a] = 0;
    }
  }
}

bool LatticeBitmap::contains(std::span<const std::int64_t> index) const noexcept {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < index.size(); ++a) {
    const auto k = index[a];
    if (k < 0 || static_cast<std::size_t>(k) >= window_.points[a]) return false;
    flat = flat * window_.points[a] + static_cast<std::size_t>(k);
  }
  return bits_[flat] != 0;
}

std::vector<std::size_t> LatticeBitmap::members() const {
  std::vector<std::size_t> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out.push_back(i);
  return out;
}

std::vector<std::int64_t> LatticeBitmap::unflatten(std::size_t flat) const {
  std::vector<std::int64_t> idx(window_.dims());
  for (std::size_t a = window_.dims(); a-- > 0;) {
    idx[a] = static_cast<std::int64_t>(flat % window_.points[a]);
    flat /= window_.points[a];
  }
  return idx;
}

std::vector<double> LatticeBitmap::point(std::span<const std::int64_t> index) const {
  std::vector<double> pt(index.size());
  for (std::size_t a = 0; a < index.size(); ++a) pt[a] = window_.coordinate(a, index[a]);
  return pt;
}

namespace {

struct Offset {
  std::vector<std::int64_t> idx;
  std::vector<double> s;
  double norm;
};

// Lattice offsets s != 0 with |‖s‖_p - lambda| <= tol, lexicographic order.
std::vector<Offset> side_offsets(std::size_t d, double spacing, double lambda, LpExponent p, double tol) {
  if (!(lambda > 0)) throw std::invalid_argument("side length lambda must be positive");
  if (!(tol >= 0)) throw std::invalid_argument("tolerance must be nonnegative");
  p.validate();
  const auto r = static_cast<std::int64_t>(std::floor((lambda + tol) / spacing + 1e-9));
  std::vector<Offset> out;
  std::vector<std::int64_t> idx(d, -r);
  std::vector<double> s(d);
  while (true) {
    bool nonzero = false;
    for (std::size_t a = 0; a < d; ++a) {
      s[a] = static_cast<double>(idx[a]) * spacing;
      nonzero |= idx[a] != 0;
    }
    if (nonzero) {
      const double n = lp_norm(s, p);
      if (within(n, lambda, tol)) out.push_back({idx, s, n});
    }
    std::size_t a = d;
    while (a-- > 0) {
      if (++idx[a] <= r) break;
      idx[a] = -r;
    }
    if (a == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

std::vector<std::int64_t> strides_of(const LatticeWindow& w) {
  std::vector<std::int64_t> st(w.dims(), 1);
  for (std::size_t a = w.dims(); a-- > 1;) st[a - 1] = st[a] * static_cast<std::int64_t>(w.points[a]);
  return st;
}

template <class Hit>
std::vector<Hit> run_blocked(std::size_t n, SumMethod method,
                             const std::function<void(std::size_t, std::size_t, std::vector<Hit>&)>& body) {
  const std::size_t blocks = method == SumMethod::direct ? 1 : block_count(n);
  std::vector<std::vector<Hit>> parts(std::max<std::size_t>(blocks, 1));
  for_each_block(n, method, [&](std::size_t b, std::size_t begin, std::size_t end) { body(begin, end, parts[b]); });
  std::vector<Hit> out;
  for (auto& part : parts) std::move(part.begin(), part.end(), std::back_inserter(out));
  return out;
}

}  // namespace

std::vector<CornerHit> find_corners(const PointSet& set, const LatticeWindow& window, double lambda, LpExponent p,
                                    double tol, SumMethod method) {
  window.validate();
  if (window.dims() % 2 != 0) throw std::invalid_argument("corner search window must have even dimension");
  const std::size_t d = window.dims() / 2;
  const LatticeBitmap bitmap(set, window);
  const auto offsets = side_offsets(d, window.spacing, lambda, p, tol);

  return run_blocked<CornerHit>(window.size(), method, [&](std::size_t begin, std::size_t end, std::vector<CornerHit>& hits) {
    std::vector<std::int64_t> moved(2 * d);
    for (std::size_t flat = begin; flat < end; ++flat) {
      if (!bitmap.contains(flat)) continue;
      const auto base = bitmap.unflatten(flat);
      for (const auto& off : offsets) {
        std::copy(base.begin(), base.end(), moved.begin());
        for (std::size_t a = 0; a < d; ++a) moved[a] += off.idx[a];
        if (!bitmap.contains(moved)) continue;
        std::copy(base.begin(), base.end(), moved.begin());
        for (std::size_t a = 0; a < d; ++a) moved[d + a] += off.idx[a];
        if (!bitmap.contains(moved)) continue;
        const auto pt = bitmap.point(base);
        hits.push_back({std::vector<double>(pt.begin(), pt.begin() + static_cast<std::ptrdiff_t>(d)),
                        std::vector<double>(pt.begin() + static_cast<std::ptrdiff_t>(d), pt.end()), off.s, off.norm});
      }
    }
  });
}

std::vector<ApHit> find_aps(const PointSet& set, const LatticeWindow& window, int k, double lambda, LpExponent p,
                            double tol, SumMethod method) {
  if (k < 3) throw std::invalid_argument("progressions need k >= 3");
  window.validate();
  const std::size_t d = window.dims();
  const LatticeBitmap bitmap(set, window);
  const auto offsets = side_offsets(d, window.spacing, lambda, p, tol);

  return run_blocked<ApHit>(window.size(), method, [&](std::size_t begin, std::size_t end, std::vector<ApHit>& hits) {
    std::vector<std::int64_t> moved(d);
    for (std::size_t flat = begin; flat < end; ++flat) {
      if (!bitmap.contains(flat)) continue;
      const auto base = bitmap.unflatten(flat);
      for (const auto& off : offsets) {
        bool ok = true;
        for (int j = 1; j < k && ok; ++j) {
          for (std::size_t a = 0; a < d; ++a) moved[a] = base[a] + j * off.idx[a];
          ok = bitmap.contains(moved);
        }
        if (ok) hits.push_back({bitmap.point(base), off.s, off.norm});
      }
    }
  });
}

void for_each_ap(const LatticeBitmap& bitmap, int k, const ApVisitor& visit) {
  if (k < 3) throw std::invalid_argument("progressions need k >= 3");
  const auto& w = bitmap.window();
  const std::size_t d = w.dims();
  const auto members = bitmap.members();
  const std::size_t m = members.size();
  // Member coordinates, member-major.
  std::vector<std::int64_t> coords(m * d);
  for (std::size_t i = 0; i < m; ++i) {
    const auto idx = bitmap.unflatten(members[i]);
    std::copy(idx.begin(), idx.end(), coords.begin() + static_cast<std::ptrdiff_t>(i * d));
  }
  const auto st = strides_of(w);
  std::vector<std::int64_t> extent(d);
  for (std::size_t a = 0; a < d; ++a) extent[a] = static_cast<std::int64_t>(w.points[a]);
  std::vector<std::int64_t> s(d);

  for (std::size_t i = 0; i < m; ++i) {
    const std::int64_t* x = &coords[i * d];
    for (std::size_t jdx = 0; jdx < m; ++jdx) {
      if (jdx == i) continue;
      const std::int64_t* y = &coords[jdx * d];
      for (std::size_t a = 0; a < d; ++a) s[a] = y[a] - x[a];
      bool ok = true;
      for (int j = 2; j < k && ok; ++j) {
        std::int64_t flat = 0;
        for (std::size_t a = 0; a < d; ++a) {
          const std::int64_t c = x[a] + j * s[a];
          if (c < 0 || c >= extent[a]) {
            ok = false;
            break;
          }
          flat += c * st[a];
        }
        ok = ok && bitmap.contains(static_cast<std::size_t>(flat));
      }
      if (ok) visit(std::span<const std::int64_t>(x, d), s);
    }
  }
}

namespace {

// Side norms for every lattice difference in [-(P-1), P-1]^d, when small.
struct SideTable {
  std::vector<std::int64_t> radius;
  std::vector<std::int64_t> strides;
  std::vector<double> norm;
  std::vector<std::uint8_t> forbidden;

  bool build(const LatticeWindow& w, std::size_t d, LpExponent p, const std::vector<OpenInterval>& bad) {
    radius.resize(d);
    std::size_t total = 1;
    for (std::size_t a = 0; a < d; ++a) {
      radius[a] = static_cast<std::int64_t>(w.points[a]) - 1;
      total *= static_cast<std::size_t>(2 * radius[a] + 1);
      if (total > (std::size_t{1} << 24)) return false;
    }
    strides.assign(d, 1);
    for (std::size_t a = d; a-- > 1;) strides[a - 1] = strides[a] * (2 * radius[a] + 1);
    norm.assign(total, 0.0);
    forbidden.assign(total, 0);
    std::vector<double> s(d);
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rem = flat;
      for (std::size_t a = d; a-- > 0;) {
        const auto span = static_cast<std::size_t>(2 * radius[a] + 1);
        s[a] = static_cast<double>(static_cast<std::int64_t>(rem % span) - radius[a]) * w.spacing;
        rem /= span;
      }
      norm[flat] = lp_norm(s, p);
      forbidden[flat] = in_any(bad, norm[flat]) ? 1 : 0;
    }
    return true;
  }

  std::size_t index(std::span<const std::int64_t> s) const noexcept {
    std::int64_t flat = 0;
    for (std::size_t a = 0; a < s.size(); ++a) flat += (s[a] + radius[a]) * strides[a];
    return static_cast<std::size_t>(flat);
  }
};

struct ScanAccumulator {
  PatternScan scan;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;

  void add(double norm, bool bad, const std::function<ApHit()>& example) {
    ++scan.total;
    lo = std::min(lo, norm);
    hi = std::max(hi, norm);
    if (bad) {
      ++scan.forbidden_hits;
      if (scan.examples.size() < 16) scan.examples.push_back(example());
    }
  }
  PatternScan finish() {
    scan.min_side = scan.total ? lo : 0.0;
    scan.max_side = hi;
    return scan;
  }
};

}  // namespace

PatternScan scan_aps(const PointSet& set, const LatticeWindow& window, int k, LpExponent p,
                     const std::vector<OpenInterval>& forbidden) {
  p.validate();
  const LatticeBitmap bitmap(set, window);
  const std::size_t d = window.dims();
  SideTable table;
  const bool tabulated = table.build(window, d, p, forbidden);
  ScanAccumulator acc;
  std::vector<double> sv(d);
  for_each_ap(bitmap, k, [&](std::span<const std::int64_t> x, std::span<const std::int64_t> s) {
    double norm;
    bool bad;
    if (tabulated) {
      const auto t = table.index(s);
      norm = table.norm[t];
      bad = table.forbidden[t] != 0;
    } else {
      for (std::size_t a = 0; a < d; ++a) sv[a] = static_cast<double>(s[a]) * window.spacing;
      norm = lp_norm(sv, p);
      bad = in_any(forbidden, norm);
    }
    acc.add(norm, bad, [&] {
      std::vector<double> svec(d);
      for (std::size_t a = 0; a < d; ++a) svec[a] = static_cast<double>(s[a]) * window.spacing;
      return ApHit{bitmap.point(x), svec, norm};
    });
  });
  return acc.finish();
}

LiftVariant LiftVariant::generalized_corner(int k) {
  if (k < 3) throw std::invalid_argument("generalised corners need k >= 3");
  return {k, true};
}

PointSet lift_ap_set_to_corners(PointSet a, std::size_t d, LiftVariant variant) {
  if (d == 0) throw std::invalid_argument("dimension must be positive");
  if (!variant.generalized) {
    return [a = std::move(a), d](std::span<const double> xy) {
      if (xy.size() != 2 * d) throw std::invalid_argument("lifted point has wrong dimension");
      std::vector<double> diff(d);
      for (std::size_t i = 0; i < d; ++i) diff[i] = xy[d + i] - xy[i];
      return a(diff);
    };
  }
  if (variant.k < 3) throw std::invalid_argument("generalised corners need k >= 3");
  const auto m = static_cast<std::size_t>(variant.k - 1);
  return [a = std::move(a), d, m](std::span<const double> xs) {
    if (xs.size() != m * d) throw std::invalid_argument("lifted point has wrong dimension");
    std::vector<double> sum(d, 0.0);
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t i = 0; i < d; ++i) sum[i] += static_cast<double>(b + 1) * xs[b * d + i];
    return a(sum);
  };
}

namespace {

template <class Visit>
void generalized_corner_walk(const LatticeBitmap& bitmap, std::size_t d, std::size_t m,
                             const std::vector<std::vector<std::int64_t>>& sides, Visit&& visit) {
  std::vector<std::int64_t> moved(m * d);
  const std::size_t n = bitmap.window().size();
  for (std::size_t flat = 0; flat < n; ++flat) {
    if (!bitmap.contains(flat)) continue;
    const auto base = bitmap.unflatten(flat);
    for (std::size_t si = 0; si < sides.size(); ++si) {
      const auto& s = sides[si];
      bool ok = true;
      for (std::size_t b = 0; b < m && ok; ++b) {
        std::copy(base.begin(), base.end(), moved.begin());
        for (std::size_t i = 0; i < d; ++i) moved[b * d + i] += s[i];
        ok = bitmap.contains(moved);
      }
      if (ok) visit(base, si);
    }
  }
}

std::size_t corner_blocks(const LatticeWindow& window, std::size_t d, int k) {
  if (k < 3) throw std::invalid_argument("generalised corners need k >= 3");
  const auto m = static_cast<std::size_t>(k - 1);
  window.validate();
  if (window.dims() != m * d) throw std::invalid_argument("window dimension must be (k-1)*d");
  return m;
}

}  // namespace

std::vector<GeneralCornerHit> find_generalized_corners(const PointSet& set, const LatticeWindow& window,
                                                       std::size_t d, int k, double lambda, LpExponent p,
                                                       double tol) {
  const std::size_t m = corner_blocks(window, d, k);
  const LatticeBitmap bitmap(set, window);
  const auto offsets = side_offsets(d, window.spacing, lambda, p, tol);
  std::vector<std::vector<std::int64_t>> sides;
  for (const auto& o : offsets) sides.push_back(o.idx);
  std::vector<GeneralCornerHit> hits;
  generalized_corner_walk(bitmap, d, m, sides, [&](const std::vector<std::int64_t>& base, std::size_t si) {
    hits.push_back({bitmap.point(base), offsets[si].s, offsets[si].norm});
  });
  return hits;
}

PatternScan scan_generalized_corners(const PointSet& set, const LatticeWindow& window, std::size_t d, int k,
                                     LpExponent p, const std::vector<OpenInterval>& forbidden) {
  p.validate();
  const std::size_t m = corner_blocks(window, d, k);
  const LatticeBitmap bitmap(set, window);
  // Every nonzero side that can keep all k points inside the window.
  std::vector<std::vector<std::int64_t>> sides;
  std::vector<double> norms;
  std::vector<std::int64_t> r(d);
  for (std::size_t i = 0; i < d; ++i) {
    std::int64_t extent = std::numeric_limits<std::int64_t>::max();
    for (std::size_t b = 0; b < m; ++b) extent = std::min<std::int64_t>(extent, window.points[b * d + i]);
    r[i] = extent - 1;
  }
  std::vector<std::int64_t> s(d);
  for (std::size_t i = 0; i < d; ++i) s[i] = -r[i];
  std::vector<double> sv(d);
  while (true) {
    bool nonzero = false;
    for (std::size_t i = 0; i < d; ++i) {
      nonzero |= s[i] != 0;
      sv[i] = static_cast<double>(s[i]) * window.spacing;
    }
    if (nonzero) {
      sides.push_back(s);
      norms.push_back(lp_norm(sv, p));
    }
    std::size_t a = d;
    while (a-- > 0) {
      if (++s[a] <= r[a]) break;
      s[a] = -r[a];
    }
    if (a == static_cast<std::size_t>(-1)) break;
  }
  ScanAccumulator acc;
  generalized_corner_walk(bitmap, d, m, sides, [&](const std::vector<std::int64_t>& base, std::size_t si) {
    acc.add(norms[si], in_any(forbidden, norms[si]), [&] {
      std::vector<double> svec(d);
      for (std::size_t i = 0; i < d; ++i) svec[i] = static_cast<double>(sides[si][i]) * window.spacing;
      return ApHit{bitmap.point(base), svec, norms[si]};
    });
  });
  return acc.finish();
}

int max_corner_free(int n) {
  if (n < 1 || n > 4) throw std::invalid_argument("max_corner_free is exhaustive only for 1 <= n <= 4");
  std::vector<std::uint32_t> corners;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = -(n - 1); k <= n - 1; ++k) {
        if (k == 0) continue;
        if (i + k < 0 || i + k >= n || j + k < 0 || j + k >= n) continue;
        corners.push_back((1u << (i * n + j)) | (1u << ((i + k) * n + j)) | (1u << (i * n + j + k)));
      }
  int best = 0;
  const std::uint32_t subsets = 1u << (n * n);
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    const int size = std::popcount(mask);
    if (size <= best) continue;
    bool free = true;
    for (auto c : corners)
      if ((mask & c) == c) {
        free = false;
        break;
      }
    if (free) best = size;
  }
  return best;
}

VarnavidesResult varnavides_corner_density(const GridFunction& f, int n, double epsilon,
                                           const VarnavidesOptions& options) {
  const auto& spec = f.spec();
  if (spec.dims() == 0 || spec.dims() % 2 != 0) throw std::invalid_argument("set must live on a 2d-dimensional grid");
  if (n < 2) throw std::invalid_argument("subgrid size n must be at least 2");
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw std::invalid_argument("epsilon must lie in (0, 1/2)");
  if (options.samples == 0) throw std::invalid_argument("at least one sample is required");
  const std::size_t d = spec.dims() / 2;
  const double delta = options.delta.value_or(f.riemann_integral());
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("density must lie in [0, 1]");

  auto in_a = [&](std::span<const std::int64_t> cell) {
    const double v = f.at(cell);
    return v > 0.0 && v >= delta / 2.0;
  };

  const CounterRng rng(options.seed);
  const std::size_t draws = 3 * d;
  std::vector<double> t(d), u(d), v(d);
  std::vector<std::int64_t> cell(2 * d);
  std::size_t good = 0;
  const double need = delta / 8.0 * n * n;
  for (std::size_t sample = 0; sample < options.samples; ++sample) {
    const std::uint64_t base = sample * draws;
    for (std::size_t i = 0; i < d; ++i) {
      t[i] = (1.0 - rng.uniform(base + i)) * epsilon / n;
      u[i] = rng.uniform(base + d + i) * (1.0 - epsilon);
      v[i] = rng.uniform(base + 2 * d + i) * (1.0 - epsilon);
    }
    int count = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        for (std::size_t a = 0; a < d; ++a) {
          cell[a] = static_cast<std::int64_t>(std::floor((u[a] + i * t[a] - spec.origin[a]) / spec.spacing));
          cell[d + a] = static_cast<std::int64_t>(std::floor((v[a] + j * t[a] - spec.origin[d + a]) / spec.spacing));
        }
        if (in_a(cell)) ++count;
      }
    if (count > 0 && count >= need) ++good;
  }

  VarnavidesResult r;
  r.samples = options.samples;
  r.delta = delta;
  r.epsilon = epsilon;
  r.fraction = static_cast<double>(good) / static_cast<double>(options.samples);
  r.domain_volume = std::pow(epsilon / n, static_cast<double>(d)) * std::pow(1.0 - epsilon, 2.0 * d);
  r.measure_T = r.fraction * r.domain_volume;
  r.lower_bound = delta / 8.0 * r.domain_volume;
  return r;
}

}  // namespace cornerlab
