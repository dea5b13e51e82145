#pragma once
// Seeded generators for property tests and the acceptance run.
#include <random>

#include "eaesc/coupling.hpp"

namespace eaesc::rnd {

using Rng = std::mt19937_64;

Scalar rational(Rng& rng, int span = 3);
Correction correction(Rng& rng, int bound, int entries);

// Monomial-symbol operator c z^-k (+ correction) on the first Seq factor,
// identity symbol on further Seq factors, random cross and Fin blocks.
// Index is k whenever the shape has a Seq factor.
BlockOp fredholm(Rng& rng, const SpaceShape& s, int k, int bound = 3);

// Partner of u on shape y with equal (alpha, beta).
BlockOp eae_partner(Rng& rng, const BlockOp& u, const SpaceShape& y);

// I + finite window part, with exact inverse.
Iso invertible(Rng& rng, const SpaceShape& s, int window = 4);

// witness_from_complemented(r, z) with random r of index k, then random
// finite-rank perturbations of s and t.
Witness witness(Rng& rng, const SpaceShape& y, const SpaceShape& z, int k);

}  // namespace eaesc::rnd
