#include "mctree/support.hpp"

#include "mctree/error.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>

namespace mctree {

std::vector<std::vector<State>> support_adjacency(const TransitionMatrix& p) {
    const std::size_t n = p.size();
    std::vector<std::vector<State>> adj(n);
    for (State i = 0; i < n; ++i)
        for (State j = 0; j < n; ++j)
            if (sgn(p(i, j)) > 0)
                adj[i].push_back(j);
    return adj;
}

std::vector<std::vector<State>> strongly_connected_components(const TransitionMatrix& p) {
    // Tarjan, recursive; n is small.
    const std::size_t n = p.size();
    const auto adj = support_adjacency(p);
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unset), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<State> stack;
    std::vector<std::vector<State>> components;
    std::size_t counter = 0;

    std::function<void(State)> connect = [&](State v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (State w : adj[v]) {
            if (index[w] == unset) {
                connect(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<State> component;
            State w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                component.push_back(w);
            } while (w != v);
            std::sort(component.begin(), component.end());
            components.push_back(std::move(component));
        }
    };
    for (State v = 0; v < n; ++v)
        if (index[v] == unset)
            connect(v);
    std::sort(components.begin(), components.end());
    return components;
}

namespace {

std::vector<bool> reachable_from(const std::vector<std::vector<State>>& adj, State start) {
    std::vector<bool> seen(adj.size(), false);
    std::deque<State> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
        State v = queue.front();
        queue.pop_front();
        for (State w : adj[v])
            if (!seen[w]) {
                seen[w] = true;
                queue.push_back(w);
            }
    }
    return seen;
}

} // namespace

std::optional<std::pair<State, State>> unreachable_pair(const TransitionMatrix& p) {
    const auto adj = support_adjacency(p);
    for (State i = 0; i < p.size(); ++i) {
        auto seen = reachable_from(adj, i);
        for (State j = 0; j < p.size(); ++j)
            if (!seen[j])
                return std::pair{i, j};
    }
    return std::nullopt;
}

void require_irreducible(const TransitionMatrix& p) {
    if (auto pair = unreachable_pair(p))
        throw ReducibleChain(pair->first, pair->second);
}

bool reaches(const TransitionMatrix& p, const StateSet& targets) {
    // Backward search from the targets.
    const std::size_t n = p.size();
    std::vector<std::vector<State>> reverse(n);
    for (State i = 0; i < n; ++i)
        for (State j = 0; j < n; ++j)
            if (sgn(p(i, j)) > 0)
                reverse[j].push_back(i);
    std::vector<bool> seen(n, false);
    std::deque<State> queue;
    for (State r : targets) {
        seen[r] = true;
        queue.push_back(r);
    }
    while (!queue.empty()) {
        State v = queue.front();
        queue.pop_front();
        for (State w : reverse[v])
            if (!seen[w]) {
                seen[w] = true;
                queue.push_back(w);
            }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

std::size_t period(const TransitionMatrix& p) {
    require_irreducible(p);
    // BFS levels from state 0; the period is the gcd of level[u] + 1 - level[v]
    // over all support arcs u -> v.
    const auto adj = support_adjacency(p);
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> level(p.size(), unset);
    std::deque<State> queue{0};
    level[0] = 0;
    while (!queue.empty()) {
        State v = queue.front();
        queue.pop_front();
        for (State w : adj[v])
            if (level[w] == unset) {
                level[w] = level[v] + 1;
                queue.push_back(w);
            }
    }
    std::size_t g = 0;
    for (State u = 0; u < p.size(); ++u)
        for (State v : adj[u]) {
            long long d = static_cast<long long>(level[u]) + 1 - static_cast<long long>(level[v]);
            g = std::gcd(g, static_cast<std::size_t>(d < 0 ? -d : d));
        }
    return g;
}

} // namespace mctree
