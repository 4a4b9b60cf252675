#pragma once

#include "mctree/chain.hpp"
#include "mctree/wilson.hpp"

namespace mctree {

// Rows are k = n integer weights drawn from 1..max_weight, each cell zeroed
// with probability 1/3, then normalised. Rows that come out all zero are
// redrawn.
struct RandomChainOptions {
    unsigned max_weight = 9;
    bool sparse = true;
    bool irreducible = false;
    bool aperiodic = false;
};

TransitionMatrix random_chain(Rng& rng, std::size_t n, const RandomChainOptions& opts = {});

// Symmetric Laplacian with integer conductances in 0..max_weight, zeroed
// like random_chain. Not necessarily connected.
SquareMatrix random_symmetric_laplacian(Rng& rng, std::size_t n, unsigned max_weight = 9);

} // namespace mctree
