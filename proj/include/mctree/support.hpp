#pragma once

#include "mctree/chain.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace mctree {

// Graph algorithms on the positive-probability digraph i -> j iff p_ij > 0.

std::vector<std::vector<State>> support_adjacency(const TransitionMatrix& p);

// Strongly connected components, each sorted, listed in order of their
// smallest state.
std::vector<std::vector<State>> strongly_connected_components(const TransitionMatrix& p);

// nullopt when irreducible, else a pair (from, to) with `to` unreachable.
std::optional<std::pair<State, State>> unreachable_pair(const TransitionMatrix& p);

// Throws ReducibleChain with the certificate above.
void require_irreducible(const TransitionMatrix& p);

// True iff every state outside `targets` has a positive path into `targets`.
bool reaches(const TransitionMatrix& p, const StateSet& targets);

// gcd of cycle lengths of an irreducible chain.
std::size_t period(const TransitionMatrix& p);

} // namespace mctree
