#pragma once

#include "mctree/chain.hpp"
#include "mctree/forest.hpp"

#include <vector>

namespace mctree {

// Chain quantities computed from forest weight sums alone. Nothing in this
// module solves a linear system; linalg.hpp holds the independent route.

struct ChainAnalysis {
    std::vector<Rational> pi;
    RationalMatrix mfpt; // diagonal holds mean return times
    Rational kemeny;
};

// All three from one sweep of forest_sums(). Throws ReducibleChain.
ChainAnalysis analyze_chain(const TransitionMatrix& p, std::size_t guard = default_guard);

// pi_j = Sigma_j / Sigma^(1). Throws ReducibleChain.
std::vector<Rational> stationary(const TransitionMatrix& p, std::size_t guard = default_guard);

// m_jj = Sigma^(1) / Sigma_j.
Rational mean_return_time(const TransitionMatrix& p, State j, std::size_t guard = default_guard);

// m_ij = Sigma_ij / Sigma_j for i != j.
Rational mfpt(const TransitionMatrix& p, State i, State j, std::size_t guard = default_guard);

// K = 1 + Sigma^(2) / Sigma^(1).
Rational kemeny(const TransitionMatrix& p, std::size_t guard = default_guard);

// Expected visits to j before entering R, from i: w_ij(R u {j}) / w(R).
// Throws InfeasibleRoots when w(R) == 0.
Rational green_occupation(const TransitionMatrix& p, const StateSet& roots, State i, State j,
                          std::size_t guard = default_guard);

// E_i T_R; zero for i in R.
Rational mean_hitting_time(const TransitionMatrix& p, const StateSet& roots, State i,
                           std::size_t guard = default_guard);

// P_i(X_{T_R} = j) for j in R (in increasing order): w_ij(R) / w(R).
std::vector<Rational> hitting_distribution(const TransitionMatrix& p, const StateSet& roots, State i,
                                           std::size_t guard = default_guard);

struct AbsorptionAnalysis {
    StateSet roots;
    std::vector<State> free;  // S \ R, increasing
    RationalMatrix green;     // free x free
    RationalMatrix hit;       // free x roots
    std::vector<Rational> mean_hit;
};
AbsorptionAnalysis absorption_analysis(const TransitionMatrix& p, const StateSet& roots,
                                       std::size_t guard = default_guard);

// Probability that i's tree has root j in the random forest with one tree
// rooted in each recurrent class. Any chain.
Rational cesaro_forest(const TransitionMatrix& p, State i, State j, std::size_t guard = default_guard);
RationalMatrix cesaro_forest_matrix(const TransitionMatrix& p, std::size_t guard = default_guard);

// (m_ik + m_kj - m_ij 1(i != j)) / m_jj, for i, j != k.
Rational chung_occupation(const TransitionMatrix& p, State i, State j, State k, std::size_t guard = default_guard);

// Law of X at T_R ^ T_loop under alpha == 1: entries for j in R, and
// P_i(T_R < T_loop) as their sum.
struct StoppedDistribution {
    std::vector<Rational> at_root;
    Rational before_loop;
};
StoppedDistribution ecrsf_stopped_distribution(const TransitionMatrix& p, const StateSet& roots, State i,
                                               std::size_t guard = default_guard);

struct FeasibilityReport {
    bool weight_positive;        // w(R) > 0 by enumeration
    bool positive_forest_exists; // some forest with every edge positive
    bool paths_reach_roots;      // graph search
    bool det_nonzero;            // det L(R) != 0
    bool consistent() const {
        return weight_positive == positive_forest_exists && weight_positive == paths_reach_roots &&
               weight_positive == det_nonzero;
    }
    bool feasible() const { return consistent() && weight_positive; }
};
FeasibilityReport feasibility(const TransitionMatrix& p, const StateSet& roots, std::size_t guard = default_guard);

// m_ij through the chain with row j replaced by a unit jump to i, using tree
// sums over its recurrent class C containing {i, j}. Also returns the pieces
// of the factorisations Sigma_j = Sigma~_j w(C) and Sigma_ij = sum_{k != j}
// Sigma~_k w(C).
struct ModifiedChainMfpt {
    std::vector<State> recurrent_class;
    Rational sigma_tilde_j;
    Rational sigma_tilde_others;
    Rational w_class;
    Rational mfpt() const { return sigma_tilde_others / sigma_tilde_j; }
};
ModifiedChainMfpt modified_chain_mfpt(const TransitionMatrix& p, State i, State j, std::size_t guard = default_guard);

} // namespace mctree
