#pragma once

#include <cstdint>

namespace infosample::rng {

// Counter-based generator. Every random decision in the library is a pure
// function of (seed, stream, counter):
//
//   key   = mix64(seed + (stream + 1) * 0x9E3779B97F4A7C15)
//   bits  = mix64(key ^ mix64(counter + 0xD1B54A32D192ED03))
//   u     = (bits >> 11) * 2^-53            in [0, 1)
//
// mix64 is the SplitMix64 finalizer (Steele, Lea, Flood 2014). Results do not
// depend on iteration order or thread count.

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Streams separate independent uses of the same user seed.
enum class Stream : std::uint64_t {
  RandomSample = 1,
  PmiSample = 2,
  ExactQuota = 3,
  DcorSubsample = 4,
  SyntheticBase = 1000,  // + variable index * 4 + purpose
};

class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(mix64(seed + (stream + 1) * 0x9E3779B97F4A7C15ULL)) {}
  constexpr CounterRng(std::uint64_t seed, Stream stream) noexcept
      : CounterRng(seed, static_cast<std::uint64_t>(stream)) {}

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix64(key_ ^ mix64(counter + 0xD1B54A32D192ED03ULL));
  }
  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
};

}  // namespace infosample::rng
