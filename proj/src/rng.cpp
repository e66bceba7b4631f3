#include "driftlag/rng.hpp"

#include <numeric>

namespace driftlag::rng {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::string_view name, std::uint64_t index) {
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
    for (unsigned char c : name) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return splitmix64(splitmix64(seed ^ h) + index);
}

Engine substream(std::uint64_t seed, std::string_view name, std::uint64_t index) {
    return Engine(substream_seed(seed, name, index));
}

double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

std::vector<std::size_t> permutation(std::size_t n, Engine& eng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
        // rejection-free bounded draw is fine here; modulo bias at 2^64 is negligible
        const std::size_t j = static_cast<std::size_t>(eng() % i);
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

}  // namespace driftlag::rng
