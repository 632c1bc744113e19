#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

namespace dppsel {

// Counter-based generator: output i is a 64-bit hash of (key, i), so streams
// reproduce bit-for-bit on every platform and substreams can be derived
// without handing state around. The mixer is the splitmix64 finalizer.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(mix(seed ^ 0x5bf0'3635'dcf2'c2a7ull)) {}

  // Independent stream derived from this one; does not advance this stream.
  CounterRng substream(std::uint64_t index) const {
    return CounterRng(key_, index);
  }

  std::uint64_t next_u64() {
    return mix(key_ + (++counter_) * 0x9e37'79b9'7f4a'7c15ull);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; pairs are generated together and the
  // spare is cached, so draw order is well defined.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] keeps the log finite.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  // Uniform on {0, ..., n-1}, bias-free by rejection.
  int uniform_int(int n) {
    const auto un = static_cast<std::uint64_t>(n);
    const std::uint64_t rem = (std::numeric_limits<std::uint64_t>::max() % un + 1) % un;
    std::uint64_t r = next_u64();
    if (rem != 0) {
      const std::uint64_t limit = 0 - rem;  // 2^64 - rem
      while (r >= limit) r = next_u64();
    }
    return static_cast<int>(r % un);
  }

  // First k entries of a partial Fisher-Yates shuffle of 0..n-1, in draw order.
  std::vector<int> sample_without_replacement(int n, int k) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < k; ++i) {
      const int j = i + uniform_int(n - i);
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    idx.resize(static_cast<std::size_t>(k));
    return idx;
  }

 private:
  CounterRng(std::uint64_t key, std::uint64_t index)
      : key_(mix(key ^ mix(index + 0x1656'67b1'e3cd'e15dull))) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58'476d'1ce4'e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d0'49bb'1331'11ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dppsel
