#include "mctree/formulas.hpp"

#include "mctree/error.hpp"
#include "mctree/linalg.hpp"
#include "mctree/support.hpp"

#include <stdexcept>

namespace mctree {

namespace {

void require_state(const TransitionMatrix& p, State s) {
    if (s >= p.size())
        throw std::out_of_range("state " + std::to_string(s) + " out of range");
}

void require_outside(const StateSet& roots, State s) {
    if (roots.contains(s))
        throw std::invalid_argument("state " + std::to_string(s) + " lies in the root set");
}

Rational checked_w(const TransitionMatrix& p, const StateSet& roots, std::size_t guard) {
    Rational w = w_sum(p, roots, guard);
    if (sgn(w) == 0)
        throw InfeasibleRoots("w(R) = 0 for R = " + to_string(roots));
    return w;
}

} // namespace

ChainAnalysis analyze_chain(const TransitionMatrix& p, std::size_t guard) {
    require_irreducible(p);
    const std::size_t n = p.size();
    const ForestSums sums = forest_sums(p, guard);
    ChainAnalysis out{std::vector<Rational>(n), RationalMatrix(n, n), Rational(0)};
    for (State j = 0; j < n; ++j) {
        out.pi[j] = sums.sigma[j] / sums.sigma1;
        for (State i = 0; i < n; ++i)
            out.mfpt(i, j) = i == j ? sums.sigma1 / sums.sigma[j] : sums.sigma_pair(i, j) / sums.sigma[j];
    }
    out.kemeny = 1 + (n >= 2 ? sums.sigma_r[2] : Rational(0)) / sums.sigma1;
    return out;
}

std::vector<Rational> stationary(const TransitionMatrix& p, std::size_t guard) {
    require_irreducible(p);
    const TreeSums t = sigma_sums(p, guard);
    std::vector<Rational> pi(p.size());
    for (State j = 0; j < p.size(); ++j)
        pi[j] = t.sigma[j] / t.sigma1;
    return pi;
}

Rational mean_return_time(const TransitionMatrix& p, State j, std::size_t guard) {
    require_state(p, j);
    require_irreducible(p);
    const TreeSums t = sigma_sums(p, guard);
    return t.sigma1 / t.sigma[j];
}

Rational mfpt(const TransitionMatrix& p, State i, State j, std::size_t guard) {
    require_state(p, i);
    require_state(p, j);
    if (i == j)
        throw std::invalid_argument("mfpt needs i != j; use mean_return_time");
    require_irreducible(p);
    return sigma_pair(p, i, j, PairMethod::two_forest, guard) / w_sum(p, StateSet{j}, guard);
}

Rational kemeny(const TransitionMatrix& p, std::size_t guard) {
    require_irreducible(p);
    const Rational sigma1 = sigma_r(p, 1, guard);
    if (p.size() == 1)
        return 1;
    return 1 + sigma_r(p, 2, guard) / sigma1;
}

Rational green_occupation(const TransitionMatrix& p, const StateSet& roots, State i, State j, std::size_t guard) {
    require_state(p, i);
    require_state(p, j);
    require_outside(roots, i);
    require_outside(roots, j);
    const Rational w = checked_w(p, roots, guard);
    return w_target_sum(p, roots, i, j, guard) / w;
}

Rational mean_hitting_time(const TransitionMatrix& p, const StateSet& roots, State i, std::size_t guard) {
    require_state(p, i);
    if (roots.contains(i))
        return 0;
    const Rational w = checked_w(p, roots, guard);
    Rational total = 0;
    for (State j : roots.complement(p.size()))
        total += w_target_sum(p, roots, i, j, guard);
    return total / w;
}

std::vector<Rational> hitting_distribution(const TransitionMatrix& p, const StateSet& roots, State i,
                                           std::size_t guard) {
    require_state(p, i);
    const RootedWeights rw = rooted_weights(p, roots, guard);
    if (sgn(rw.total) == 0)
        throw InfeasibleRoots("w(R) = 0 for R = " + to_string(roots));
    std::vector<Rational> out;
    out.reserve(roots.size());
    for (State j : roots)
        out.push_back(rw.to_root(i, j) / rw.total);
    return out;
}

AbsorptionAnalysis absorption_analysis(const TransitionMatrix& p, const StateSet& roots, std::size_t guard) {
    AbsorptionAnalysis out;
    out.roots = roots;
    out.free = roots.complement(p.size());
    const std::size_t m = out.free.size();
    const RootedWeights base = rooted_weights(p, roots, guard);
    if (sgn(base.total) == 0)
        throw InfeasibleRoots("w(R) = 0 for R = " + to_string(roots));
    out.green = RationalMatrix(m, m);
    out.hit = RationalMatrix(m, roots.size());
    out.mean_hit.assign(m, Rational(0));
    for (std::size_t b = 0; b < m; ++b) {
        const State j = out.free[b];
        const RootedWeights with_j = rooted_weights(p, roots.with(j), guard);
        for (std::size_t a = 0; a < m; ++a) {
            out.green(a, b) = with_j.to_root(out.free[a], j) / base.total;
            out.mean_hit[a] += out.green(a, b);
        }
    }
    for (std::size_t a = 0; a < m; ++a) {
        std::size_t c = 0;
        for (State r : roots)
            out.hit(a, c++) = base.to_root(out.free[a], r) / base.total;
    }
    return out;
}

RationalMatrix cesaro_forest_matrix(const TransitionMatrix& p, std::size_t guard) {
    const std::size_t n = p.size();
    const ClassReport classes = recurrent_classes(p);
    const std::size_t k = classes.recurrent.size();
    check_guard(n - k, guard);
    RationalMatrix weight(n, n);
    Rational total = 0;
    // Odometer over one root per recurrent class.
    std::vector<std::size_t> pick(k, 0);
    while (true) {
        std::vector<State> roots(k);
        for (std::size_t c = 0; c < k; ++c)
            roots[c] = classes.recurrent[c][pick[c]];
        const RootedWeights rw = rooted_weights(p, StateSet(roots), guard);
        total += rw.total;
        weight = weight + rw.to_root;
        std::size_t c = 0;
        while (c < k && ++pick[c] == classes.recurrent[c].size())
            pick[c++] = 0;
        if (c == k)
            break;
    }
    for (State i = 0; i < n; ++i)
        for (State j = 0; j < n; ++j)
            weight(i, j) /= total;
    return weight;
}

Rational cesaro_forest(const TransitionMatrix& p, State i, State j, std::size_t guard) {
    require_state(p, i);
    require_state(p, j);
    return cesaro_forest_matrix(p, guard)(i, j);
}

Rational chung_occupation(const TransitionMatrix& p, State i, State j, State k, std::size_t guard) {
    require_state(p, i);
    require_state(p, j);
    require_state(p, k);
    if (i == k || j == k)
        throw std::invalid_argument("chung_occupation needs i, j != k");
    Rational num = mfpt(p, i, k, guard) + mfpt(p, k, j, guard);
    if (i != j)
        num -= mfpt(p, i, j, guard);
    return num / mean_return_time(p, j, guard);
}

StoppedDistribution ecrsf_stopped_distribution(const TransitionMatrix& p, const StateSet& roots, State i,
                                               std::size_t guard) {
    require_state(p, i);
    StoppedDistribution out;
    if (roots.contains(i)) {
        for (State r : roots)
            out.at_root.push_back(r == i ? Rational(1) : Rational(0));
        out.before_loop = 1;
        return out;
    }
    const EcSums sums = w_ec_sums(p, CycleWeights::constant(1), roots, guard);
    if (sgn(sums.total) == 0)
        throw InfeasibleRoots("w^ec(R) = 0 for R = " + to_string(roots));
    out.before_loop = 0;
    for (State r : roots) {
        out.at_root.push_back(sums.to_root(i, r) / sums.total);
        out.before_loop += out.at_root.back();
    }
    return out;
}

FeasibilityReport feasibility(const TransitionMatrix& p, const StateSet& roots, std::size_t guard) {
    if (roots.empty())
        throw std::invalid_argument("feasibility needs a nonempty root set");
    FeasibilityReport r{};
    r.weight_positive = sgn(w_sum(p, roots, guard)) > 0;
    bool found = false;
    for_each_weighted_forest(
        p, roots,
        [&](std::span<const State> parent, const Rational&) {
            if (found)
                return;
            bool all_positive = true;
            for (State v = 0; v < parent.size(); ++v)
                if (parent[v] != no_state && sgn(p(v, parent[v])) == 0)
                    all_positive = false;
            found = all_positive;
        },
        guard);
    r.positive_forest_exists = found;
    r.paths_reach_roots = reaches(p, roots);
    r.det_nonzero = sgn(exact_det(reduced_laplacian(p, roots))) != 0;
    return r;
}

ModifiedChainMfpt modified_chain_mfpt(const TransitionMatrix& p, State i, State j, std::size_t guard) {
    require_state(p, i);
    require_state(p, j);
    if (i == j)
        throw std::invalid_argument("modified_chain_mfpt needs i != j");
    require_irreducible(p);
    const std::size_t n = p.size();
    RationalMatrix tilde = p.entries();
    for (State k = 0; k < n; ++k)
        tilde(j, k) = k == i ? 1 : 0;
    const TransitionMatrix modified(tilde);

    // The closed class of the modified chain containing i and j is exactly
    // what i reaches.
    std::vector<State> cls;
    for (const auto& c : recurrent_classes(modified).recurrent)
        if (StateSet(c).contains(i))
            cls = c;
    if (!StateSet(cls).contains(j))
        throw std::logic_error("modified chain lost the class of {i, j}");

    RationalMatrix restricted = modified.entries().submatrix(cls, cls);
    const TransitionMatrix sub(restricted);
    const TreeSums tilde_sums = sigma_sums(sub, guard);

    ModifiedChainMfpt out;
    out.recurrent_class = cls;
    out.sigma_tilde_others = 0;
    for (std::size_t a = 0; a < cls.size(); ++a) {
        if (cls[a] == j)
            out.sigma_tilde_j = tilde_sums.sigma[a];
        else
            out.sigma_tilde_others += tilde_sums.sigma[a];
    }
    out.w_class = w_sum(p, StateSet(cls), guard);
    return out;
}

} // namespace mctree
