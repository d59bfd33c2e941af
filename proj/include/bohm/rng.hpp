#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace bohm {

inline constexpr const char* kRngAlgorithm =
    "mt19937_64 per sample, seeded by splitmix64(seed, sample index)";

/// SplitMix64 finalizer (Steele, Lea & Flood).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent random stream for one ensemble member. Streams depend only on
/// (seed, index), so serial and parallel runs draw identical numbers.
///
/// Uniform and normal variates are produced by explicit transforms of the raw
/// 64-bit output rather than std:: distributions, whose algorithms are
/// implementation-defined.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t index)
      : engine_(splitmix64(splitmix64(seed) ^ splitmix64(~index))) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal by Box-Muller (cosine branch).
  double normal() noexcept {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bohm
