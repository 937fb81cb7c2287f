#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace egactive {

/// Seeded generator with platform-independent draws. The standard
/// distributions are implementation-defined, so uniform, index and normal
/// draws are derived here directly from the 64-bit Mersenne Twister output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in {0, ..., n-1}; rejection sampling removes modulo bias.
  std::size_t index(std::size_t n);

  /// Standard normal via Box-Muller (one value per call, no caching).
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// Mixes a base seed with a stream tag into an independent seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// The three generator streams owned by one run. Draw order per query step:
/// `meta` (EG arm choice), then `explore` (the q draw), then `select`
/// (random pick or committee seed). Keeping them separate makes the
/// exploit endpoint of the wrapper draw-for-draw identical to the bare
/// strategy.
struct RunRngs {
  Rng meta;
  Rng explore;
  Rng select;

  static RunRngs from_seed(std::uint64_t seed) {
    return RunRngs{Rng(derive_seed(seed, 1)), Rng(derive_seed(seed, 2)),
                   Rng(derive_seed(seed, 3))};
  }
};

}  // namespace egactive
