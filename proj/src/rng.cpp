#include "prwf/rng.hpp"

#include <cmath>
#include <numbers>

namespace prwf {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t derive_trial_seed(std::uint64_t master, std::uint64_t index,
                                StreamTag tag) noexcept {
  constexpr std::uint64_t kPhi = 0x9E3779B97F4A7C15ULL;
  constexpr std::uint64_t kPsi = 0xD1B54A32D192ED03ULL;
  const std::uint64_t h = mix64(master + kPhi * (index + 1));
  return mix64(h ^ (kPsi * static_cast<std::uint64_t>(tag)));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  // 1 - u lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  return r * std::cos(theta);
}

std::uint64_t Rng::below(std::uint64_t k) {
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % k);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % k;
}

}  // namespace prwf
