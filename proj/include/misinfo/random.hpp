#pragma once

#include <cstdint>
#include <random>

namespace misinfo {

using Rng = std::mt19937_64;

/// Stream tags keep independent consumers of one seed from overlapping.
enum class StreamTag : std::uint64_t {
  kScenario = 1,
  kPolicy = 2,
  kPolicyProbe = 3,
  kValidate = 4,
  kAudience = 5,
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for draw `index` of the stream `tag` under the base `seed`. The
/// result depends only on its arguments, so draws can be evaluated in any
/// order (or concurrently) and still reproduce bit for bit.
std::uint64_t stream_seed(std::uint64_t seed, StreamTag tag,
                          std::uint64_t index);

Rng make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t index);

}  // namespace misinfo
