#include "misinfo/random.hpp"

namespace misinfo {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, StreamTag tag,
                          std::uint64_t index) {
  return mix64(mix64(mix64(seed) ^ static_cast<std::uint64_t>(tag)) ^ index);
}

Rng make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
  std::seed_seq seq{stream_seed(seed, tag, index),
                    stream_seed(seed, tag, index) >> 32};
  return Rng(seq);
}

}  // namespace misinfo
