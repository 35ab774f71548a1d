#include "rotirs/rng.hpp"

namespace rotirs {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) {
    return mix64(parent ^ mix64(tag + kGolden));
}

std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = parent;
    for (std::uint64_t tag : path) s = derive_seed(s, tag);
    return s;
}

}  // namespace rotirs
