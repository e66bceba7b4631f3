#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace driftlag::rng {

using Engine = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Every consumer of randomness (fold shuffling, lambda draws, synthetic noise)
// gets its own stream derived from the top-level seed and a stable name.
std::uint64_t substream_seed(std::uint64_t seed, std::string_view name, std::uint64_t index = 0);
Engine substream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0);

/// Uniform double in [0, 1), 53 bits; independent of the standard library's distribution code.
double uniform01(Engine& eng);

/// Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> permutation(std::size_t n, Engine& eng);

}  // namespace driftlag::rng
