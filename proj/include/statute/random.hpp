#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace statute {

// Seeded 64-bit engine with a portable bounded draw. std::uniform_int_distribution
// is implementation-defined, so the same seed would give different cases on
// different standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform over [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return lo + static_cast<std::int64_t>(engine_());
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return lo + static_cast<std::int64_t>(draw % span);
  }

  // True with probability per_mille / 1000.
  bool chance(int per_mille) { return uniform(0, 999) < per_mille; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace statute
