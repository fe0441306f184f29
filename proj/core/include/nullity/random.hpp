#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace nullity {

using Rng = std::mt19937_64;

/// Derives an independent generator from a master seed and a list of stream
/// coordinates (stage, iteration, block, ...). The same coordinates always give
/// the same stream, which is what makes results independent of worker count.
inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> coords = {}) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * coords.size());
  words.push_back(static_cast<std::uint32_t>(seed));
  words.push_back(static_cast<std::uint32_t>(seed >> 32));
  for (auto c : coords) {
    words.push_back(static_cast<std::uint32_t>(c));
    words.push_back(static_cast<std::uint32_t>(c >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

/// A 64-bit seed for a sub-experiment, derived the same way as make_stream.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> coords) {
  return make_stream(seed, coords)();
}

/// Stable per-stage tags so that different stages never share a stream.
enum class StreamTag : std::uint64_t {
  kTheta = 0x7468657461,
  kRootMean = 0x726f6f74,
  kPopulationInit = 0x706f70,
  kTree = 0x74726565,
  kGraph = 0x67726170,
  kWiedemann = 0x77696564,
  kPipeline = 0x706970,
};

inline std::uint64_t tag(StreamTag t) { return static_cast<std::uint64_t>(t); }

}  // namespace nullity
