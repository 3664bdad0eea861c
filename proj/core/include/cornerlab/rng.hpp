#pragma once

#include <array>
#include <cstdint>

namespace cornerlab {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// The output is a pure function of (counter, key), so draw number i of a
/// stream can be recomputed in any order and on any worker. Every random
/// quantity in the library is addressed this way.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) noexcept;
};

/// A stream of random draws addressed by index: draw(i) depends only on
/// (seed, stream, i).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : seed_(seed), stream_(stream) {}

  std::uint64_t bits(std::uint64_t index) const noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint64_t index) const noexcept;
  double uniform(std::uint64_t index, double lo, double hi) const noexcept {
    return lo + (hi - lo) * uniform(index);
  }
  bool bernoulli(std::uint64_t index, double probability) const noexcept {
    return uniform(index) < probability;
  }

  // Sequential convenience on top of the indexed interface.
  std::uint64_t next_bits() noexcept { return bits(cursor_++); }
  double next_uniform() noexcept { return uniform(cursor_++); }
  double next_uniform(double lo, double hi) noexcept { return uniform(cursor_++, lo, hi); }
  /// Uniform integer in [lo, hi].
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  CounterRng substream(std::uint64_t stream) const noexcept { return CounterRng(seed_, stream); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t cursor_ = 0;
};

}  // namespace cornerlab
