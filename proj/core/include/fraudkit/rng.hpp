#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace fraudkit {

/// Seeded generator used by every stochastic routine.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The std:: distributions are not (their algorithms are
/// implementation-defined), so the conversions to uniform/normal/index draws
/// live here and produce the same values on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [0, 1] (both end points reachable).
  double uniform_closed() {
    return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740991.0);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; the spare value is cached.
  double normal();

  /// Uniform integer in [0, bound); bound must be > 0. Rejection sampling, no modulo bias.
  std::size_t index(std::size_t bound);

  /// Fisher-Yates using index().
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Per-stage seed: FNV-1a of the stage name mixed into the base seed through splitmix64.
std::uint64_t derive_seed(std::uint64_t base, std::string_view stage) noexcept;

}  // namespace fraudkit
