#pragma once

#include "mctree/forest.hpp"
#include "mctree/gof.hpp"

#include <map>
#include <vector>

namespace mctree {

// Exact distribution over configurations (parent or successor maps),
// including zero-probability ones so that impossible draws are caught.
struct ExactLaw {
    std::vector<std::vector<State>> configs;
    std::vector<Rational> prob;
    std::map<std::vector<State>, std::size_t> index;

    std::vector<double> probabilities() const;
};

// Pi^P(f) / w(R) over forests with root set R. Throws InfeasibleRoots when
// w(R) == 0.
ExactLaw forest_law(const TransitionMatrix& p, const StateSet& roots, std::size_t guard = default_guard);

// Pi^{P,alpha}(f) / w^ec(R).
ExactLaw ecrsf_law(const TransitionMatrix& p, const CycleWeights& alpha, const StateSet& tree_roots,
                   std::size_t guard = default_guard);

// Tally of observed configurations against a law. A configuration missing
// from the law lands in an extra zero-probability cell.
class LawTally {
  public:
    explicit LawTally(const ExactLaw& law) : law_(&law), counts_(law.configs.size() + 1, 0) {}
    LawTally(ExactLaw&&) = delete; // the law must outlive the tally
    void add(const std::vector<State>& config);
    GofReport test(double significance) const;
    const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

  private:
    const ExactLaw* law_;
    std::vector<std::uint64_t> counts_;
};

} // namespace mctree
