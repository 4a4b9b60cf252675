#include "mctree/forest.hpp"

#include "mctree/error.hpp"

#include <algorithm>
#include <stdexcept>

namespace mctree {

// -- RootedForest / Ecrsf ------------------------------------------------

RootedForest::RootedForest(StateSet roots, std::vector<State> parent)
    : roots_(std::move(roots)), parent_(std::move(parent)) {
    const std::size_t n = parent_.size();
    if (roots_.empty())
        throw std::invalid_argument("forest needs at least one root");
    for (State v = 0; v < n; ++v) {
        const bool root = roots_.contains(v);
        if (root != (parent_[v] == no_state))
            throw std::invalid_argument("state " + std::to_string(v) + (root ? " is a root but has a parent" : " has no parent"));
        if (!root && (parent_[v] >= n || parent_[v] == v))
            throw std::invalid_argument("invalid parent for state " + std::to_string(v));
    }
    for (State v = 0; v < n; ++v) {
        State w = v;
        for (std::size_t steps = 0; parent_[w] != no_state; ++steps) {
            if (steps > n)
                throw std::invalid_argument("parent map has a cycle through state " + std::to_string(v));
            w = parent_[w];
        }
    }
}

State RootedForest::root_of(State v) const {
    while (parent_.at(v) != no_state)
        v = parent_[v];
    return v;
}

std::vector<State> RootedForest::path_to_root(State v) const {
    std::vector<State> path{v};
    while (parent_.at(v) != no_state) {
        v = parent_[v];
        path.push_back(v);
    }
    return path;
}

Ecrsf::Ecrsf(StateSet tree_roots, std::vector<State> successor)
    : roots_(std::move(tree_roots)), successor_(std::move(successor)) {
    const std::size_t n = successor_.size();
    for (State v = 0; v < n; ++v) {
        const bool root = roots_.contains(v);
        if (root != (successor_[v] == no_state))
            throw std::invalid_argument("state " + std::to_string(v) + (root ? " is a root but has a successor" : " has no successor"));
        if (!root && successor_[v] >= n)
            throw std::invalid_argument("successor out of range at state " + std::to_string(v));
    }
}

namespace {

// Cycles of a functional graph given as a successor map with no_state at
// roots. Each cycle is canonical (minimal state first).
std::vector<std::vector<State>> functional_cycles(std::span<const State> succ) {
    const std::size_t n = succ.size();
    // 0 = unvisited, 1 = on current trail, 2 = done
    std::vector<char> color(n, 0);
    std::vector<std::vector<State>> cycles;
    std::vector<State> trail;
    for (State start = 0; start < n; ++start) {
        if (color[start] != 0)
            continue;
        trail.clear();
        State v = start;
        while (v != no_state && color[v] == 0) {
            color[v] = 1;
            trail.push_back(v);
            v = succ[v];
        }
        if (v != no_state && color[v] == 1) {
            auto at = std::find(trail.begin(), trail.end(), v);
            cycles.push_back(canonical_cycle(std::vector<State>(at, trail.end())));
        }
        for (State t : trail)
            color[t] = 2;
    }
    std::sort(cycles.begin(), cycles.end());
    return cycles;
}

// Root of each state's component, or no_state for cycle-rooted components.
std::vector<State> component_roots(std::span<const State> succ) {
    const std::size_t n = succ.size();
    constexpr State pending = static_cast<State>(-2);
    std::vector<State> root(n, pending);
    std::vector<State> trail;
    for (State start = 0; start < n; ++start) {
        if (root[start] != pending)
            continue;
        trail.clear();
        std::vector<bool> on_trail(n, false);
        State v = start;
        State result;
        while (true) {
            if (succ[v] == no_state) {
                result = v;
                break;
            }
            if (root[v] != pending) {
                result = root[v];
                break;
            }
            if (on_trail[v]) {
                result = no_state;
                break;
            }
            on_trail[v] = true;
            trail.push_back(v);
            v = succ[v];
        }
        if (succ[v] == no_state)
            root[v] = v;
        for (State t : trail)
            root[t] = result;
    }
    return root;
}

// Depth-first assignment of an outgoing pointer to every non-root state.
// `acyclic` rejects pointer choices that would close a cycle (forests);
// otherwise every map is produced (ECRSFs, self-loops included). When
// `chain` is set, zero-probability pointers are skipped and the running
// product of p(v, pointer(v)) is tracked.
class PointerEnumerator {
  public:
    using Leaf = std::function<void(std::span<const State>, const Rational&)>;

    PointerEnumerator(std::size_t n, const StateSet& roots, bool acyclic, const TransitionMatrix* chain, std::size_t guard)
        : n_(n), acyclic_(acyclic), chain_(chain), pointer_(n, no_state), free_(roots.complement(n)) {
        for (State r : roots)
            if (r >= n)
                throw std::invalid_argument("root " + std::to_string(r) + " out of range");
        check_guard(free_.size(), guard);
        partial_.assign(free_.size() + 1, Rational(1));
    }

    void run(const Leaf& leaf) {
        leaf_ = &leaf;
        descend(0);
    }

  private:
    bool closes_cycle(State v, State u) const {
        State w = u;
        while (pointer_[w] != no_state)
            w = pointer_[w];
        return w == v;
    }

    void descend(std::size_t depth) {
        if (depth == free_.size()) {
            (*leaf_)(pointer_, partial_[depth]);
            return;
        }
        const State v = free_[depth];
        for (State u = 0; u < n_; ++u) {
            if (acyclic_ && (u == v || closes_cycle(v, u)))
                continue;
            if (chain_ != nullptr) {
                const Rational& pvu = (*chain_)(v, u);
                if (sgn(pvu) == 0)
                    continue;
                partial_[depth + 1] = partial_[depth] * pvu;
            }
            pointer_[v] = u;
            descend(depth + 1);
            pointer_[v] = no_state;
        }
    }

    std::size_t n_;
    bool acyclic_;
    const TransitionMatrix* chain_;
    std::vector<State> pointer_;
    std::vector<State> free_;
    std::vector<Rational> partial_;
    const Leaf* leaf_ = nullptr;
};

void require_roots(const StateSet& roots) {
    if (roots.empty())
        throw std::invalid_argument("root set must be nonempty");
}

void require_state(const TransitionMatrix& p, State s) {
    if (s >= p.size())
        throw std::out_of_range("state " + std::to_string(s) + " out of range");
}

} // namespace

std::vector<State> canonical_cycle(std::span<const State> cycle) {
    std::vector<State> out(cycle.begin(), cycle.end());
    if (!out.empty())
        std::rotate(out.begin(), std::min_element(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::vector<State>> Ecrsf::cycles() const { return functional_cycles(successor_); }

State Ecrsf::root_of(State v) const { return component_roots(successor_).at(v); }

CycleWeights::CycleWeights(Rule rule) : rule_(std::move(rule)) {}

CycleWeights CycleWeights::constant(Rational value) {
    if (sgn(value) < 0 || value > 1)
        throw std::domain_error("cycle weight " + to_string(value) + " outside [0, 1]");
    CycleWeights w([value](std::span<const State>) { return value; });
    w.constant_ = value;
    return w;
}

Rational CycleWeights::operator()(std::span<const State> cycle) const {
    const std::vector<State> canon = canonical_cycle(cycle);
    Rational a = rule_(canon);
    if (sgn(a) < 0 || a > 1)
        throw std::domain_error("cycle weight " + to_string(a) + " outside [0, 1]");
    return a;
}

// -- enumeration ---------------------------------------------------------

void check_guard(std::size_t free_states, std::size_t guard) {
    if (free_states > guard)
        throw GuardExceeded(free_states, guard);
}

void for_each_forest(std::size_t n, const StateSet& roots, const ForestVisitor& visit, std::size_t guard) {
    require_roots(roots);
    PointerEnumerator e(n, roots, true, nullptr, guard);
    e.run([&](std::span<const State> parent, const Rational&) { visit(parent); });
}

std::vector<RootedForest> enumerate_forests(std::size_t n, const StateSet& roots, std::size_t guard) {
    std::vector<RootedForest> out;
    for_each_forest(
        n, roots, [&](std::span<const State> parent) { out.emplace_back(roots, std::vector<State>(parent.begin(), parent.end())); },
        guard);
    return out;
}

void for_each_weighted_forest(const TransitionMatrix& p, const StateSet& roots, const WeightedForestVisitor& visit,
                              std::size_t guard) {
    require_roots(roots);
    PointerEnumerator e(p.size(), roots, true, &p, guard);
    e.run(visit);
}

Rational forest_weight(const RootedForest& f, const TransitionMatrix& p) {
    if (f.size() != p.size())
        throw std::invalid_argument("forest and chain sizes differ");
    Rational w = 1;
    for (State v = 0; v < f.size(); ++v)
        if (!f.is_root(v))
            w *= p(v, f.parent(v));
    return w;
}

Rational w_sum(const TransitionMatrix& p, const StateSet& roots, std::size_t guard) {
    Rational total = 0;
    for_each_weighted_forest(p, roots, [&](std::span<const State>, const Rational& w) { total += w; }, guard);
    return total;
}

RootedWeights rooted_weights(const TransitionMatrix& p, const StateSet& roots, std::size_t guard) {
    const std::size_t n = p.size();
    RootedWeights out{Rational(0), RationalMatrix(n, n)};
    for_each_weighted_forest(
        p, roots,
        [&](std::span<const State> parent, const Rational& w) {
            out.total += w;
            const std::vector<State> root = component_roots(parent);
            for (State i = 0; i < n; ++i)
                out.to_root(i, root[i]) += w;
        },
        guard);
    return out;
}

Rational w_target_sum(const TransitionMatrix& p, const StateSet& roots, State i, State j, std::size_t guard) {
    require_state(p, i);
    require_state(p, j);
    const StateSet all_roots = roots.with(j);
    Rational total = 0;
    for_each_weighted_forest(
        p, all_roots,
        [&](std::span<const State> parent, const Rational& w) {
            State v = i;
            while (parent[v] != no_state)
                v = parent[v];
            if (v == j)
                total += w;
        },
        guard);
    return total;
}

TreeSums sigma_sums(const TransitionMatrix& p, std::size_t guard) {
    TreeSums out{std::vector<Rational>(p.size()), Rational(0)};
    for (State j = 0; j < p.size(); ++j) {
        out.sigma[j] = w_sum(p, StateSet{j}, guard);
        out.sigma1 += out.sigma[j];
    }
    return out;
}

namespace {

template <typename F>
void for_each_subset_of_size(std::size_t n, std::size_t r, F&& f) {
    std::vector<State> pick(r);
    for (std::size_t k = 0; k < r; ++k)
        pick[k] = k;
    while (true) {
        f(StateSet(pick));
        std::size_t k = r;
        while (k > 0 && pick[k - 1] == n - r + (k - 1))
            --k;
        if (k == 0)
            return;
        ++pick[k - 1];
        for (std::size_t t = k; t < r; ++t)
            pick[t] = pick[t - 1] + 1;
    }
}

} // namespace

Rational sigma_r(const TransitionMatrix& p, std::size_t r, std::size_t guard) {
    const std::size_t n = p.size();
    if (r < 1 || r > n)
        throw std::out_of_range("tree count " + std::to_string(r) + " outside 1.." + std::to_string(n));
    check_guard(n - r, guard);
    Rational total = 0;
    for_each_subset_of_size(n, r, [&](const StateSet& roots) { total += w_sum(p, roots, guard); });
    return total;
}

State last_exit_state(const RootedForest& t, State i) {
    if (t.roots().size() != 1)
        throw std::invalid_argument("last_exit_state needs a tree (single root)");
    if (t.is_root(i))
        throw std::invalid_argument("start state is the root");
    State prev = i;
    while (!t.is_root(t.parent(prev)))
        prev = t.parent(prev);
    return prev;
}

Rational sigma_pair(const TransitionMatrix& p, State i, State j, PairMethod method, std::size_t guard) {
    require_state(p, i);
    require_state(p, j);
    if (i == j)
        throw std::invalid_argument("sigma_pair needs i != j");
    const std::size_t n = p.size();
    Rational total = 0;
    if (method == PairMethod::tree_deletion) {
        // Product over the tree minus the edge k(i,j,t) -> j. Computing the
        // product without that factor keeps trees whose only zero factor is
        // p_kj; they map to positive two-tree forests.
        for_each_forest(
            n, StateSet{j},
            [&](std::span<const State> parent) {
                State k = i;
                while (parent[k] != j)
                    k = parent[k];
                Rational w = 1;
                for (State v = 0; v < n && sgn(w) != 0; ++v)
                    if (v != j && v != k)
                        w *= p(v, parent[v]);
                total += w;
            },
            guard);
    } else {
        for (State k = 0; k < n; ++k)
            if (k != j)
                total += w_target_sum(p, StateSet{j}, i, k, guard);
    }
    return total;
}

Integer cayley_count(std::size_t n, std::size_t k) {
    if (k < 1 || k > n)
        throw std::out_of_range("root count " + std::to_string(k) + " outside 1.." + std::to_string(n));
    if (k == n)
        return 1;
    Integer power;
    mpz_ui_pow_ui(power.get_mpz_t(), n, n - k - 1);
    return Integer(static_cast<unsigned long>(k)) * power;
}

ForestSums forest_sums(const TransitionMatrix& p, std::size_t guard) {
    const std::size_t n = p.size();
    if (n >= 64)
        throw std::out_of_range("forest_sums supports fewer than 64 states");
    check_guard(n - 1, guard);
    ForestSums out;
    out.sigma.assign(n, Rational(0));
    out.sigma_r.assign(n + 1, Rational(0));
    out.sigma_pair = RationalMatrix(n, n);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        StateSet roots = StateSet::from_mask(mask);
        RootedWeights rw = rooted_weights(p, roots, guard);
        out.sigma_r[roots.size()] += rw.total;
        out.w.emplace(std::move(roots), std::move(rw));
    }
    for (State j = 0; j < n; ++j) {
        out.sigma[j] = out.w_of(StateSet{j});
        out.sigma1 += out.sigma[j];
    }
    for (State j = 0; j < n; ++j)
        for (State k = 0; k < n; ++k) {
            if (k == j)
                continue;
            const RootedWeights& rw = out.w.at(StateSet{j, k});
            for (State i = 0; i < n; ++i)
                if (i != j)
                    out.sigma_pair(i, j) += rw.to_root(i, k);
        }
    return out;
}

// -- cycle-rooted forests ------------------------------------------------

void for_each_ecrsf(std::size_t n, const StateSet& tree_roots, const std::function<void(std::span<const State>)>& visit,
                    std::size_t guard) {
    PointerEnumerator e(n, tree_roots, false, nullptr, guard);
    e.run([&](std::span<const State> succ, const Rational&) { visit(succ); });
}

std::vector<Ecrsf> enumerate_ecrsf(std::size_t n, const StateSet& tree_roots, std::size_t guard) {
    std::vector<Ecrsf> out;
    for_each_ecrsf(
        n, tree_roots,
        [&](std::span<const State> succ) { out.emplace_back(tree_roots, std::vector<State>(succ.begin(), succ.end())); },
        guard);
    return out;
}

Rational ecrsf_weight(const Ecrsf& f, const TransitionMatrix& p, const CycleWeights& alpha) {
    if (f.size() != p.size())
        throw std::invalid_argument("configuration and chain sizes differ");
    Rational w = 1;
    for (State v = 0; v < f.size(); ++v)
        if (f.successor(v) != no_state)
            w *= p(v, f.successor(v));
    for (const auto& cycle : f.cycles())
        w *= alpha(cycle);
    return w;
}

EcSums w_ec_sums(const TransitionMatrix& p, const CycleWeights& alpha, const StateSet& tree_roots, std::size_t guard) {
    const std::size_t n = p.size();
    EcSums out{Rational(0), RationalMatrix(n, n)};
    PointerEnumerator e(n, tree_roots, false, &p, guard);
    e.run([&](std::span<const State> succ, const Rational& edge_weight) {
        Rational w = edge_weight;
        for (const auto& cycle : functional_cycles(succ)) {
            if (sgn(w) == 0)
                break;
            w *= alpha(cycle);
        }
        if (sgn(w) == 0)
            return;
        out.total += w;
        const std::vector<State> root = component_roots(succ);
        for (State i = 0; i < n; ++i)
            if (root[i] != no_state)
                out.to_root(i, root[i]) += w;
    });
    return out;
}

} // namespace mctree
