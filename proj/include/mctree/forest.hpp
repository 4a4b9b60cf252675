#pragma once

#include "mctree/chain.hpp"

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace mctree {

inline constexpr State no_state = static_cast<State>(-1);

// Default cap on the number of non-root states an exhaustive enumeration may
// range over: 9^8 candidate maps is desk scale.
inline constexpr std::size_t default_guard = 8;

// Spanning forest with edges v -> parent(v) directed toward the roots.
class RootedForest {
  public:
    // parent[r] must be no_state exactly for r in roots. Throws
    // std::invalid_argument if the parent map has a cycle or a self-pointer.
    RootedForest(StateSet roots, std::vector<State> parent);

    std::size_t size() const noexcept { return parent_.size(); }
    const StateSet& roots() const noexcept { return roots_; }
    State parent(State v) const { return parent_.at(v); }
    const std::vector<State>& parents() const noexcept { return parent_; }
    bool is_root(State v) const { return parent_.at(v) == no_state; }

    State root_of(State v) const;
    // v, parent(v), ..., root.
    std::vector<State> path_to_root(State v) const;

    friend bool operator==(const RootedForest&, const RootedForest&) = default;
    friend auto operator<=>(const RootedForest&, const RootedForest&) = default;

  private:
    StateSet roots_;
    std::vector<State> parent_;
};

// Functional subgraph on S \ R: each component is a tree into R or a tree
// hanging off one directed cycle that avoids R. successor(v) == v is a
// cycle of length one.
class Ecrsf {
  public:
    Ecrsf(StateSet tree_roots, std::vector<State> successor);

    std::size_t size() const noexcept { return successor_.size(); }
    const StateSet& tree_roots() const noexcept { return roots_; }
    State successor(State v) const { return successor_.at(v); }
    const std::vector<State>& successors() const noexcept { return successor_; }

    // Each cycle rotated so its smallest state comes first; sorted.
    std::vector<std::vector<State>> cycles() const;
    // Root reached from v, or no_state if v's component is cycle-rooted.
    State root_of(State v) const;

    friend bool operator==(const Ecrsf&, const Ecrsf&) = default;
    friend auto operator<=>(const Ecrsf&, const Ecrsf&) = default;

  private:
    StateSet roots_;
    std::vector<State> successor_;
};

// Selection parameter alpha(cycle) in [0, 1].
class CycleWeights {
  public:
    using Rule = std::function<Rational(std::span<const State>)>;

    explicit CycleWeights(Rule rule);
    static CycleWeights constant(Rational value);

    // The cycle is rotated to start at its minimal state before the rule
    // sees it. Throws std::domain_error if the rule leaves [0, 1].
    Rational operator()(std::span<const State> cycle) const;

    const std::optional<Rational>& constant_value() const noexcept { return constant_; }

  private:
    Rule rule_;
    std::optional<Rational> constant_;
};

std::vector<State> canonical_cycle(std::span<const State> cycle);

// -- enumeration ---------------------------------------------------------

// Visitor sees the parent map of each forest (no_state at roots).
using ForestVisitor = std::function<void(std::span<const State> parent)>;
using WeightedForestVisitor = std::function<void(std::span<const State> parent, const Rational& weight)>;

void check_guard(std::size_t free_states, std::size_t guard);

// Every forest with root set exactly `roots`, once each, in lexicographic
// order of the parent map. Throws std::invalid_argument on an empty root set.
void for_each_forest(std::size_t n, const StateSet& roots, const ForestVisitor& visit,
                     std::size_t guard = default_guard);
std::vector<RootedForest> enumerate_forests(std::size_t n, const StateSet& roots, std::size_t guard = default_guard);

// Same traversal restricted to forests of positive P-weight.
void for_each_weighted_forest(const TransitionMatrix& p, const StateSet& roots, const WeightedForestVisitor& visit,
                              std::size_t guard = default_guard);

Rational forest_weight(const RootedForest& f, const TransitionMatrix& p);

// w(R).
Rational w_sum(const TransitionMatrix& p, const StateSet& roots, std::size_t guard = default_guard);

// w_ij(R u {j}): forests with roots R u {j} in which i's tree has root j.
Rational w_target_sum(const TransitionMatrix& p, const StateSet& roots, State i, State j,
                      std::size_t guard = default_guard);

// One pass over the forests with root set R: total weight and, for every
// state i and root j, the weight of forests in which i's tree has root j.
struct RootedWeights {
    Rational total;
    RationalMatrix to_root; // n x n; column j is zero unless j in R
};
RootedWeights rooted_weights(const TransitionMatrix& p, const StateSet& roots, std::size_t guard = default_guard);

// Sigma_j for every j and Sigma^(1) = sum_j Sigma_j.
struct TreeSums {
    std::vector<Rational> sigma;
    Rational sigma1;
};
TreeSums sigma_sums(const TransitionMatrix& p, std::size_t guard = default_guard);

// Sigma^(r): weight of all forests with exactly r trees.
Rational sigma_r(const TransitionMatrix& p, std::size_t r, std::size_t guard = default_guard);

enum class PairMethod { tree_deletion, two_forest };

// Sigma_ij for i != j.
Rational sigma_pair(const TransitionMatrix& p, State i, State j, PairMethod method,
                    std::size_t guard = default_guard);

// Penultimate state on the path from i to the root of tree t.
State last_exit_state(const RootedForest& t, State i);

// k * n^(n-k-1), with c(n, n) = 1.
Integer cayley_count(std::size_t n, std::size_t k);

// Full record of forest sums for a chain, from a single sweep over every
// nonempty root set.
struct ForestSums {
    std::vector<Rational> sigma;        // Sigma_j
    Rational sigma1;                    // Sigma^(1)
    std::vector<Rational> sigma_r;      // index r = 1..n; sigma_r[0] unused
    RationalMatrix sigma_pair;          // Sigma_ij, diagonal unused
    std::map<StateSet, RootedWeights> w; // w(R) and w_ij(R) per root set

    const Rational& w_of(const StateSet& roots) const { return w.at(roots).total; }
    // w_ij(R u {j}).
    const Rational& w_target(const StateSet& roots, State i, State j) const {
        return w.at(roots.with(j)).to_root(i, j);
    }
};
ForestSums forest_sums(const TransitionMatrix& p, std::size_t guard = default_guard);

// -- cycle-rooted forests ------------------------------------------------

void for_each_ecrsf(std::size_t n, const StateSet& tree_roots, const std::function<void(std::span<const State>)>& visit,
                    std::size_t guard = default_guard);
std::vector<Ecrsf> enumerate_ecrsf(std::size_t n, const StateSet& tree_roots, std::size_t guard = default_guard);

Rational ecrsf_weight(const Ecrsf& f, const TransitionMatrix& p, const CycleWeights& alpha);

// w^ec(R) and w^ec_ij(R) (i in a tree rooted at j in R).
struct EcSums {
    Rational total;
    RationalMatrix to_root;
};
EcSums w_ec_sums(const TransitionMatrix& p, const CycleWeights& alpha, const StateSet& tree_roots,
                 std::size_t guard = default_guard);

} // namespace mctree
