#include "mctree/wilson.hpp"

#include "mctree/error.hpp"
#include "mctree/support.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace mctree {

bool PathTrace::self_avoiding() const {
    std::vector<State> sorted = states;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

PathTrace loop_erase(const PathTrace& path) {
    if (path.states.empty())
        throw std::invalid_argument("loop_erase needs a nonempty path");
    // Equivalent to the last-exit description: keep a stack and, whenever
    // the walk revisits a state on it, pop back to that state.
    PathTrace out;
    for (State x : path.states) {
        auto it = std::find(out.states.begin(), out.states.end(), x);
        if (it != out.states.end())
            out.states.erase(it + 1, out.states.end());
        else
            out.states.push_back(x);
    }
    return out;
}

// -- randomness ----------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(splitmix64(seed ^ splitmix64(stream + 1))) {}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0)
        throw std::invalid_argument("Rng::below needs a positive bound");
    // Reject the top partial block.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

double Rng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

namespace {

constexpr unsigned long exact_limit_bits = 63;

bool fits(const Integer& z) { return sgn(z) >= 0 && mpz_sizeinbase(z.get_mpz_t(), 2) <= exact_limit_bits; }

std::uint64_t to_u64(const Integer& z) {
    // mpz_get_ui is only 64-bit on LP64; go through export for portability.
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, -1, sizeof out, 0, 0, z.get_mpz_t());
    return out;
}

} // namespace

TransitionSampler::TransitionSampler(const TransitionMatrix& p) : rows_(p.size()) {
    const std::size_t n = p.size();
    for (State i = 0; i < n; ++i) {
        Row& row = rows_[i];
        Integer den = 1;
        for (State j = 0; j < n; ++j)
            if (sgn(p(i, j)) > 0) {
                mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), p(i, j).get_den_mpz_t());
                row.target.push_back(j);
            }
        if (fits(den)) {
            row.denominator = to_u64(den);
            Integer acc = 0;
            for (State j : row.target) {
                acc += p(i, j).get_num() * (den / p(i, j).get_den());
                row.cumulative.push_back(to_u64(acc));
            }
        } else {
            double acc = 0;
            for (State j : row.target) {
                acc += to_double(p(i, j));
                row.cumulative_double.push_back(acc);
            }
            row.cumulative_double.back() = 1.0;
        }
    }
}

State TransitionSampler::step(State from, Rng& rng) const {
    const Row& row = rows_[from];
    std::size_t k;
    if (row.denominator != 0) {
        const std::uint64_t u = rng.below(row.denominator);
        k = static_cast<std::size_t>(std::upper_bound(row.cumulative.begin(), row.cumulative.end(), u) -
                                     row.cumulative.begin());
    } else {
        const double u = rng.unit();
        k = static_cast<std::size_t>(std::upper_bound(row.cumulative_double.begin(), row.cumulative_double.end(), u) -
                                     row.cumulative_double.begin());
        k = std::min(k, row.target.size() - 1);
    }
    return row.target[k];
}

bool coin(const Rational& alpha, Rng& rng) {
    if (sgn(alpha) <= 0)
        return false;
    if (alpha >= 1)
        return true;
    if (fits(alpha.get_den()))
        return rng.below(to_u64(alpha.get_den())) < to_u64(alpha.get_num());
    return rng.unit() < to_double(alpha);
}

// -- samplers ------------------------------------------------------------

WilsonSampler::WilsonSampler(const TransitionMatrix& p, std::uint64_t seed, SiteOrder order, std::size_t guard)
    : p_(p), steps_(p), rng_(seed), order_(order), guard_(guard) {}

std::vector<State> WilsonSampler::site_order(const StateSet& roots) const {
    std::vector<State> sites = roots.complement(p_.size());
    if (order_ == SiteOrder::decreasing)
        std::reverse(sites.begin(), sites.end());
    return sites;
}

void WilsonSampler::require_forest_feasible(const StateSet& roots) {
    if (checked_roots_ && *checked_roots_ == roots)
        return;
    if (roots.empty())
        throw std::invalid_argument("forest sampling needs a nonempty root set");
    for (State r : roots)
        if (r >= p_.size())
            throw std::out_of_range("root out of range");
    if (!reaches(p_, roots))
        throw InfeasibleRoots("some state cannot reach R = " + to_string(roots) + "; w(R) = 0");
    checked_roots_ = roots;
}

void WilsonSampler::require_ecrsf_feasible(const CycleWeights& alpha, const StateSet& roots) {
    for (State r : roots)
        if (r >= p_.size())
            throw std::out_of_range("root out of range");
    if (const auto& c = alpha.constant_value()) {
        // A positive constant keeps every cycle with positive probability;
        // zero reduces to the forest condition.
        if (sgn(*c) > 0)
            return;
        if (roots.empty() || !reaches(p_, roots))
            throw InfeasibleRoots("alpha == 0 and R = " + to_string(roots) + " is not reachable; w^ec(R) = 0");
        return;
    }
    if (sgn(w_ec_sums(p_, alpha, roots, guard_).total) == 0)
        throw InfeasibleRoots("w^ec(R) = 0 for R = " + to_string(roots));
}

RootedForest WilsonSampler::forest(const StateSet& roots) {
    require_forest_feasible(roots);
    const std::size_t n = p_.size();
    std::vector<State> parent(n, no_state);
    std::vector<bool> in_forest(n, false);
    for (State r : roots)
        in_forest[r] = true;
    constexpr std::size_t off_path = static_cast<std::size_t>(-1);
    std::vector<std::size_t> position(n, off_path);
    std::vector<State> path;

    for (State start : site_order(roots)) {
        if (in_forest[start])
            continue;
        path.assign(1, start);
        position[start] = 0;
        State u = start;
        State hit;
        while (true) {
            const State v = steps_.step(u, rng_);
            if (in_forest[v]) {
                hit = v;
                break;
            }
            if (position[v] != off_path) {
                // Erase the loop v -> ... -> u -> v.
                for (std::size_t k = position[v] + 1; k < path.size(); ++k)
                    position[path[k]] = off_path;
                path.resize(position[v] + 1);
            } else {
                position[v] = path.size();
                path.push_back(v);
            }
            u = v;
        }
        for (std::size_t k = 0; k < path.size(); ++k) {
            parent[path[k]] = k + 1 < path.size() ? path[k + 1] : hit;
            in_forest[path[k]] = true;
            position[path[k]] = off_path;
        }
    }
    return RootedForest(roots, std::move(parent));
}

Ecrsf WilsonSampler::cycle_rooted(const CycleWeights& alpha, const StateSet& tree_roots) {
    require_ecrsf_feasible(alpha, tree_roots);
    const std::size_t n = p_.size();
    std::vector<State> succ(n, no_state);
    std::vector<bool> attached(n, false);
    for (State r : tree_roots)
        attached[r] = true;
    constexpr std::size_t off_path = static_cast<std::size_t>(-1);
    std::vector<std::size_t> position(n, off_path);
    std::vector<State> path;

    for (State start : site_order(tree_roots)) {
        if (attached[start])
            continue;
        path.assign(1, start);
        position[start] = 0;
        State u = start;
        State last_target;
        while (true) {
            const State v = steps_.step(u, rng_);
            if (attached[v]) {
                last_target = v;
                break;
            }
            if (position[v] != off_path) {
                const std::span<const State> cycle(path.data() + position[v], path.size() - position[v]);
                if (coin(alpha(cycle), rng_)) {
                    last_target = v;
                    break;
                }
                for (std::size_t k = position[v] + 1; k < path.size(); ++k)
                    position[path[k]] = off_path;
                path.resize(position[v] + 1);
            } else {
                position[v] = path.size();
                path.push_back(v);
            }
            u = v;
        }
        for (std::size_t k = 0; k < path.size(); ++k) {
            succ[path[k]] = k + 1 < path.size() ? path[k + 1] : last_target;
            attached[path[k]] = true;
            position[path[k]] = off_path;
        }
    }
    return Ecrsf(tree_roots, std::move(succ));
}

std::vector<RootedForest> wilson_forest(const TransitionMatrix& p, const StateSet& roots, const SamplerConfig& cfg) {
    if (cfg.sample_count == 0)
        throw std::invalid_argument("sample_count must be at least 1");
    WilsonSampler sampler(p, cfg.seed, cfg.order);
    std::vector<RootedForest> out;
    out.reserve(cfg.sample_count);
    for (std::size_t k = 0; k < cfg.sample_count; ++k)
        out.push_back(sampler.forest(roots));
    return out;
}

std::vector<RootedForest> wilson_tree(const TransitionMatrix& p, State root, const SamplerConfig& cfg) {
    return wilson_forest(p, StateSet{root}, cfg);
}

std::vector<Ecrsf> kkw_sample(const TransitionMatrix& p, const CycleWeights& alpha, const StateSet& tree_roots,
                              const SamplerConfig& cfg) {
    if (cfg.sample_count == 0)
        throw std::invalid_argument("sample_count must be at least 1");
    WilsonSampler sampler(p, cfg.seed, cfg.order);
    std::vector<Ecrsf> out;
    out.reserve(cfg.sample_count);
    for (std::size_t k = 0; k < cfg.sample_count; ++k)
        out.push_back(sampler.cycle_rooted(alpha, tree_roots));
    return out;
}

Rational lerw_path_prob(const TransitionMatrix& p, const StateSet& roots, const PathTrace& path, std::size_t guard) {
    const auto& s = path.states;
    if (s.size() < 2)
        throw std::invalid_argument("path must have at least one step");
    if (!path.self_avoiding())
        throw std::invalid_argument("path is not self-avoiding");
    if (roots.contains(s.front()))
        throw std::invalid_argument("path starts inside R");
    if (!roots.contains(s.back()))
        throw std::invalid_argument("path does not end in R");
    for (std::size_t k = 1; k + 1 < s.size(); ++k)
        if (roots.contains(s[k]))
            throw std::invalid_argument("path enters R before its last state");
    const Rational base = w_sum(p, roots, guard);
    if (sgn(base) == 0)
        throw InfeasibleRoots("w(R) = 0 for R = " + to_string(roots));
    std::vector<State> grown(roots.begin(), roots.end());
    grown.insert(grown.end(), s.begin(), s.end() - 1);
    Rational prob = w_sum(p, StateSet(std::move(grown)), guard) / base;
    for (std::size_t k = 0; k + 1 < s.size(); ++k)
        prob *= p(s[k], s[k + 1]);
    return prob;
}

std::vector<PathTrace> self_avoiding_paths(std::size_t n, const StateSet& roots, State start) {
    std::vector<PathTrace> out;
    PathTrace current{{start}};
    std::vector<bool> used(n, false);
    used[start] = true;
    auto extend = [&](auto&& self) -> void {
        for (State v = 0; v < n; ++v) {
            if (used[v])
                continue;
            current.states.push_back(v);
            if (roots.contains(v)) {
                out.push_back(current);
            } else {
                used[v] = true;
                self(self);
                used[v] = false;
            }
            current.states.pop_back();
        }
    };
    extend(extend);
    return out;
}

} // namespace mctree
