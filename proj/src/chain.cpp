#include "mctree/chain.hpp"

#include "mctree/error.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace mctree {

StateSet::StateSet(std::initializer_list<State> states) : StateSet(std::vector<State>(states)) {}

StateSet::StateSet(std::vector<State> states) : states_(std::move(states)) {
    std::sort(states_.begin(), states_.end());
    states_.erase(std::unique(states_.begin(), states_.end()), states_.end());
}

StateSet StateSet::all(std::size_t n) {
    std::vector<State> v(n);
    for (State s = 0; s < n; ++s)
        v[s] = s;
    return StateSet(std::move(v));
}

StateSet StateSet::from_mask(std::uint64_t mask) {
    std::vector<State> v;
    for (State s = 0; mask != 0; ++s, mask >>= 1)
        if (mask & 1u)
            v.push_back(s);
    return StateSet(std::move(v));
}

bool StateSet::contains(State s) const { return std::binary_search(states_.begin(), states_.end(), s); }

StateSet StateSet::with(State s) const {
    std::vector<State> v = states_;
    v.push_back(s);
    return StateSet(std::move(v));
}

std::vector<State> StateSet::complement(std::size_t n) const {
    std::vector<State> out;
    out.reserve(n);
    for (State s = 0; s < n; ++s)
        if (!contains(s))
            out.push_back(s);
    return out;
}

std::uint64_t StateSet::mask() const {
    std::uint64_t m = 0;
    for (State s : states_) {
        if (s >= 64)
            throw std::out_of_range("state set mask needs states < 64");
        m |= std::uint64_t{1} << s;
    }
    return m;
}

std::string to_string(const StateSet& set) {
    std::string out = "{";
    for (State s : set) {
        if (out.size() > 1)
            out += ",";
        out += std::to_string(s);
    }
    return out + "}";
}

TransitionMatrix::TransitionMatrix(RationalMatrix entries) : entries_(std::move(entries)) {
    if (!entries_.square())
        throw InvalidChain("transition matrix must be square");
    if (entries_.rows() == 0)
        throw InvalidChain("transition matrix must have at least one state");
    for (State i = 0; i < entries_.rows(); ++i) {
        Rational sum = 0;
        for (State j = 0; j < entries_.cols(); ++j) {
            entries_(i, j).canonicalize();
            if (sgn(entries_(i, j)) < 0)
                throw InvalidChain("negative entry " + to_string(entries_(i, j)) + " at (" + std::to_string(i) + "," +
                                   std::to_string(j) + ")");
            sum += entries_(i, j);
        }
        if (sum != 1)
            throw InvalidChain("row " + std::to_string(i) + " sums to " + to_string(sum));
    }
}

TransitionMatrix::TransitionMatrix(std::initializer_list<std::initializer_list<Rational>> rows)
    : TransitionMatrix(RationalMatrix(rows)) {}

WeightedDigraph::WeightedDigraph(std::size_t n, std::vector<Arc> arcs) : n_(n), arcs_(std::move(arcs)) {
    std::map<std::pair<State, State>, int> seen;
    std::vector<bool> has_out(n, false);
    for (Arc& a : arcs_) {
        a.conductance.canonicalize();
        if (a.tail >= n || a.head >= n)
            throw InvalidChain("arc endpoint out of range");
        if (a.tail == a.head)
            throw InvalidChain("self-arc at vertex " + std::to_string(a.tail));
        if (sgn(a.conductance) < 0)
            throw InvalidChain("negative conductance on arc " + std::to_string(a.tail) + "->" + std::to_string(a.head));
        if (++seen[{a.tail, a.head}] > 1)
            throw InvalidChain("parallel arc " + std::to_string(a.tail) + "->" + std::to_string(a.head));
        if (sgn(a.conductance) > 0)
            has_out[a.tail] = true;
    }
    for (State v = 0; v < n; ++v)
        if (!has_out[v])
            throw InvalidChain("vertex " + std::to_string(v) + " has zero total outgoing conductance");
}

Rational WeightedDigraph::out_degree(State v) const {
    Rational d = 0;
    for (const Arc& a : arcs_)
        if (a.tail == v)
            d += a.conductance;
    return d;
}

bool WeightedDigraph::symmetric() const {
    std::map<std::pair<State, State>, Rational> c;
    for (const Arc& a : arcs_)
        c[{a.tail, a.head}] = a.conductance;
    for (const auto& [edge, value] : c) {
        auto it = c.find({edge.second, edge.first});
        const Rational back = it == c.end() ? Rational(0) : it->second;
        if (back != value)
            return false;
    }
    return true;
}

TransitionMatrix from_conductances(const WeightedDigraph& g) {
    const std::size_t n = g.size();
    RationalMatrix p(n, n);
    std::vector<Rational> degree(n);
    for (const Arc& a : g.arcs())
        degree[a.tail] += a.conductance;
    for (const Arc& a : g.arcs())
        p(a.tail, a.head) = a.conductance / degree[a.tail];
    return TransitionMatrix(std::move(p));
}

SquareMatrix laplacian(const TransitionMatrix& p) {
    return SquareMatrix::identity(p.size()) - p.entries();
}

SquareMatrix weighted_laplacian(const WeightedDigraph& g) {
    const std::size_t n = g.size();
    SquareMatrix l(n, n);
    for (const Arc& a : g.arcs()) {
        l(a.tail, a.tail) += a.conductance;
        l(a.tail, a.head) -= a.conductance;
    }
    return l;
}

namespace fixtures {

TransitionMatrix two_cycle() { return TransitionMatrix{{0, 1}, {1, 0}}; }

TransitionMatrix uniform(std::size_t n) {
    return TransitionMatrix(RationalMatrix(n, n, Rational(1, static_cast<unsigned long>(n))));
}

TransitionMatrix three_state_a() {
    return TransitionMatrix{
        {0, Rational(1, 2), Rational(1, 2)},
        {Rational(1, 3), 0, Rational(2, 3)},
        {1, 0, 0},
    };
}

TransitionMatrix absorbing_split() {
    return TransitionMatrix{
        {0, Rational(1, 2), Rational(1, 2)},
        {0, 1, 0},
        {0, 0, 1},
    };
}

} // namespace fixtures

} // namespace mctree
