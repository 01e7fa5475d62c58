#ifndef SAGUIN_RANDOM_HPP
#define SAGUIN_RANDOM_HPP

#include <cstdint>

namespace saguin::rng {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Named substreams. Values are part of the reproducibility contract.
enum class Stream : std::uint64_t {
  placement = 1,
  start_time = 2,
  channel = 3,
};

/// Counter-based draw: a pure function of (seed, stream, trial, device), so
/// results do not depend on evaluation order or worker count.
constexpr std::uint64_t draw(std::uint64_t seed, Stream stream, std::uint64_t trial,
                             std::uint64_t device) {
  std::uint64_t h = mix64(seed ^ mix64(static_cast<std::uint64_t>(stream)));
  h = mix64(h ^ trial);
  return mix64(h ^ (device * 0xd1b54a32d192ed03ULL));
}

/// Uniform on [0, 1) with 53 random bits.
constexpr double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n) via multiply-shift.
constexpr std::uint32_t to_index(std::uint64_t bits, std::uint32_t n) {
  return static_cast<std::uint32_t>((static_cast<unsigned __int128>(bits) * n) >> 64);
}

}  // namespace saguin::rng

#endif  // SAGUIN_RANDOM_HPP
