#pragma once

#include <cstdint>
#include <random>

#include "gcl/core.hpp"

namespace gcl {

using Rng = std::mt19937_64;

/// Seed for an independent substream `stream` of a run seeded with `seed`
/// (splitmix64 finalizer over the pair).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) { return Rng(derive_seed(seed, stream)); }

/// Uniform point in a box.
Point uniform_in(const Window& w, Rng& rng);

/// Isotropic centered Gaussian with per-coordinate standard deviation `sd`.
Point gaussian_point(int dim, double sd, Rng& rng);

}  // namespace gcl
