#pragma once

#include "mctree/matrix.hpp"
#include "mctree/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace mctree {

using State = std::size_t;
using RationalMatrix = Matrix<Rational>;
using SquareMatrix = Matrix<Rational>;

// Sorted set of distinct states.
class StateSet {
  public:
    StateSet() = default;
    StateSet(std::initializer_list<State> states);
    explicit StateSet(std::vector<State> states);

    static StateSet all(std::size_t n);
    static StateSet from_mask(std::uint64_t mask);

    bool contains(State s) const;
    bool empty() const noexcept { return states_.empty(); }
    std::size_t size() const noexcept { return states_.size(); }

    StateSet with(State s) const;
    // States of 0..n-1 not in this set.
    std::vector<State> complement(std::size_t n) const;
    std::uint64_t mask() const;

    auto begin() const noexcept { return states_.begin(); }
    auto end() const noexcept { return states_.end(); }
    const std::vector<State>& states() const noexcept { return states_; }

    friend bool operator==(const StateSet&, const StateSet&) = default;
    friend auto operator<=>(const StateSet&, const StateSet&) = default;

  private:
    std::vector<State> states_;
};

std::string to_string(const StateSet& set);

// Row-stochastic matrix of exact rationals. Self-loops are allowed.
class TransitionMatrix {
  public:
    // Throws InvalidChain on a negative entry or a row that does not sum to 1.
    explicit TransitionMatrix(RationalMatrix entries);
    TransitionMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

    std::size_t size() const noexcept { return entries_.rows(); }
    const Rational& operator()(State i, State j) const { return entries_(i, j); }
    const RationalMatrix& entries() const noexcept { return entries_; }

    friend bool operator==(const TransitionMatrix&, const TransitionMatrix&) = default;

  private:
    RationalMatrix entries_;
};

struct Arc {
    State tail;
    State head;
    Rational conductance;
};

// Directed graph with semiconductances; no self-arcs, no parallel arcs.
class WeightedDigraph {
  public:
    // Throws InvalidChain when an invariant fails, including a vertex with
    // zero total outgoing conductance.
    WeightedDigraph(std::size_t n, std::vector<Arc> arcs);

    std::size_t size() const noexcept { return n_; }
    const std::vector<Arc>& arcs() const noexcept { return arcs_; }
    Rational out_degree(State v) const;
    bool symmetric() const;

  private:
    std::size_t n_;
    std::vector<Arc> arcs_;
};

// p_ij = c(i,j) / sum_k c(i,k), p_ii = 0.
TransitionMatrix from_conductances(const WeightedDigraph& g);

// L = I - P.
SquareMatrix laplacian(const TransitionMatrix& p);

// Out-degree on the diagonal, -c(i,j) off it.
SquareMatrix weighted_laplacian(const WeightedDigraph& g);

// Canonical test chains.
namespace fixtures {
TransitionMatrix two_cycle();            // D2
TransitionMatrix uniform(std::size_t n); // U(n)
TransitionMatrix three_state_a();        // A
TransitionMatrix absorbing_split();      // R3
} // namespace fixtures

} // namespace mctree
