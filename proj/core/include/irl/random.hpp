#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace irl {

using Rng = std::mt19937_64;

/// Mixes a base seed with a stream tag so that derived generators are
/// decorrelated (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Draws an index from an unnormalized nonnegative weight vector.
std::size_t sample_categorical(Rng& rng, std::span<const double> weights);

/// Symmetric Dirichlet(alpha) sample of the given dimension.
std::vector<double> sample_dirichlet(Rng& rng, std::size_t dim, double alpha);

}  // namespace irl
