#include "mctree/law.hpp"

#include "mctree/error.hpp"

namespace mctree {

std::vector<double> ExactLaw::probabilities() const {
    std::vector<double> out;
    out.reserve(prob.size());
    for (const auto& x : prob)
        out.push_back(to_double(x));
    return out;
}

ExactLaw forest_law(const TransitionMatrix& p, const StateSet& roots, std::size_t guard) {
    ExactLaw law;
    Rational total = 0;
    for_each_forest(
        p.size(), roots,
        [&](std::span<const State> parent) {
            Rational w = 1;
            for (State v = 0; v < parent.size(); ++v)
                if (parent[v] != no_state)
                    w *= p(v, parent[v]);
            law.index.emplace(std::vector<State>(parent.begin(), parent.end()), law.configs.size());
            law.configs.emplace_back(parent.begin(), parent.end());
            total += w;
            law.prob.push_back(std::move(w));
        },
        guard);
    if (sgn(total) == 0)
        throw InfeasibleRoots("w(R) = 0 for R = " + to_string(roots));
    for (auto& x : law.prob)
        x /= total;
    return law;
}

ExactLaw ecrsf_law(const TransitionMatrix& p, const CycleWeights& alpha, const StateSet& tree_roots,
                   std::size_t guard) {
    ExactLaw law;
    Rational total = 0;
    for_each_ecrsf(
        p.size(), tree_roots,
        [&](std::span<const State> succ) {
            std::vector<State> config(succ.begin(), succ.end());
            Rational w = ecrsf_weight(Ecrsf(tree_roots, config), p, alpha);
            law.index.emplace(config, law.configs.size());
            law.configs.push_back(std::move(config));
            total += w;
            law.prob.push_back(std::move(w));
        },
        guard);
    if (sgn(total) == 0)
        throw InfeasibleRoots("w^ec(R) = 0 for R = " + to_string(tree_roots));
    for (auto& x : law.prob)
        x /= total;
    return law;
}

void LawTally::add(const std::vector<State>& config) {
    auto it = law_->index.find(config);
    ++counts_[it == law_->index.end() ? law_->configs.size() : it->second];
}

GofReport LawTally::test(double significance) const {
    std::vector<double> expected = law_->probabilities();
    expected.push_back(0.0);
    return gof_test(counts_, expected, significance);
}

} // namespace mctree
