#pragma once

// Seeded generators for random states, tests and unitaries.
//
// PRNG stream: every randomized suite draws from std::mt19937_64. Item k of a
// suite seeded with S uses the sub-seed splitmix64(S + k), so results do not
// depend on the order or parallelism in which items are evaluated.

#include <cstdint>
#include <random>

#include "renyi/opalg.hpp"

namespace renyi::rnd {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Generator for item `index` of a stream seeded with `seed`.
Rng substream(std::uint64_t seed, std::uint64_t index);

/// Complex Ginibre matrix with i.i.d. standard normal entries.
opalg::Matrix ginibre(opalg::Index rows, opalg::Index cols, Rng& rng);

/// Haar-random unitary.
opalg::Matrix haar_unitary(opalg::Index dim, Rng& rng);

/// Hilbert-Schmidt random density operator of full rank (almost surely).
opalg::DensityOperator random_density(opalg::Index dim, Rng& rng);
/// Random density operator of the given rank.
opalg::DensityOperator random_density(opalg::Index dim, opalg::Index rank, Rng& rng);
opalg::DensityOperator random_pure(opalg::Index dim, Rng& rng);

/// Random PSD operator (Wishart-like), not normalized.
opalg::HermitianOperator random_psd(opalg::Index dim, Rng& rng);

/// Random test 0 <= T <= 1 with uniformly distributed eigenvalues in a Haar basis.
opalg::Effect random_effect(opalg::Index dim, Rng& rng);
/// Random test with eigenvalues in [floor, 1].
opalg::Effect random_positive_effect(opalg::Index dim, double floor, Rng& rng);

/// Random Hermitian matrix with unit Frobenius norm.
opalg::HermitianOperator random_direction(opalg::Index dim, Rng& rng);

/// Uniform point of the probability simplex (flat Dirichlet).
std::vector<double> random_simplex(std::size_t n, Rng& rng);

}  // namespace renyi::rnd
