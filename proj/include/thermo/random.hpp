// random.hpp: seeded sampling of unitaries, states and probability vectors.
//
// Every randomized routine takes an explicit seed; stream ids derive
// independent generators for parallel trials so results do not depend on
// scheduling.

#pragma once

#include "thermo/linalg.hpp"

#include <cstdint>
#include <random>

namespace thermo {

using Rng = std::mt19937_64;

Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

// Haar-distributed unitary (QR of a complex Ginibre matrix with phase fix).
ComplexMatrix haar_unitary(std::size_t n, Rng& rng);
// Uniform on the probability simplex.
ProbabilityVector random_probability(std::size_t n, Rng& rng);
ComplexVector random_pure_state(std::size_t n, Rng& rng);
// Haar eigenbasis with a uniformly drawn spectrum.
DensityMatrix random_density(std::size_t n, Rng& rng);

}  // namespace thermo
