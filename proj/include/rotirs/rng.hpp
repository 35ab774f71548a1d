#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rotirs {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Child seed for an independent stream: mix64(parent ^ mix64(tag + golden)).
/// Streams are identified by small integer tags, e.g. derive_seed(trial_seed, kLinkG).
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag);
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> path);

}  // namespace rotirs
