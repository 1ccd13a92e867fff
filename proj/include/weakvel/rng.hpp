#pragma once

#include <cstdint>
#include <random>

namespace weakvel {

/// Engine used for every photon stream. mt19937_64's output sequence is fixed
/// by the standard, so a seed reproduces the same uniform stream anywhere.
using Engine = std::mt19937_64;

/// splitmix64 finalizer: a bijective 64-bit mix with full avalanche.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of sub-stream `index` under `master`. Distinct indices give
/// decorrelated seeds, and the result depends on nothing but its arguments.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

}  // namespace weakvel
