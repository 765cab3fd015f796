#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace prwf {

/// Independent random sub-streams of one trial. Values are part of the seed
/// derivation and must stay stable.
enum class StreamTag : std::uint64_t {
  trial = 1,
  signal = 2,
  matrix = 3,
  noise = 4,
  init = 5,
  probe = 6,
  diagnostics = 7,
};

/// splitmix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for sub-stream `tag` of trial `index` under `master`:
///   s = mix64(mix64(master + phi * (index + 1)) ^ psi * tag)
/// with phi, psi the odd constants 0x9E37...7C15 and 0xD1B5...ED03.
std::uint64_t derive_trial_seed(std::uint64_t master, std::uint64_t index,
                                StreamTag tag) noexcept;

/// Seeded generator: mt19937_64 words, 53-bit uniforms, Box-Muller normals.
/// Not thread-safe; every thread/trial owns its own instance.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via the Box-Muller transform; the second
  /// variate of each pair is cached.
  double normal();
  /// Uniform integer in [0, k).
  std::uint64_t below(std::uint64_t k);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace prwf
