#include "helpers.hpp"

#include "mctree/error.hpp"
#include "mctree/formulas.hpp"
#include "mctree/linalg.hpp"
#include "mctree/support.hpp"

#include <functional>

using namespace mctree;
using testing::q;

TEST_CASE("fixture A") {
    const TransitionMatrix a = fixtures::three_state_a();
    CHECK(stationary(a) == std::vector<Rational>{q("3/7"), q("3/14"), q("5/14")});
    CHECK(mean_return_time(a, 0) == q("7/3"));
    CHECK(mfpt(a, 0, 1) == 3);
    CHECK(mfpt(a, 0, 2) == q("9/5"));
    CHECK(mfpt(a, 1, 0) == q("5/3"));
    CHECK(mfpt(a, 1, 2) == q("8/5"));
    CHECK(mfpt(a, 2, 0) == 1);
    CHECK(mfpt(a, 2, 1) == 4);
    CHECK(kemeny(a) == q("16/7"));

    const ChainAnalysis all = analyze_chain(a);
    CHECK(all.kemeny == q("16/7"));
    CHECK(all.mfpt(1, 1) == q("14/3"));
    for (State j = 0; j < 3; ++j)
        CHECK(all.mfpt(j, j) * all.pi[j] == 1);
}

TEST_CASE("two-state and uniform chains") {
    const TransitionMatrix d2 = fixtures::two_cycle();
    CHECK(stationary(d2) == std::vector<Rational>{q("1/2"), q("1/2")});
    CHECK(mean_return_time(d2, 0) == 2);
    CHECK(mfpt(d2, 1, 0) == 1);
    CHECK(kemeny(d2) == q("3/2"));
    for (std::size_t n = 1; n <= 6; ++n) {
        const TransitionMatrix u = fixtures::uniform(n);
        CHECK(kemeny(u) == static_cast<long>(n));
        CHECK(mean_return_time(u, 0) == static_cast<long>(n));
        for (const auto& x : stationary(u))
            CHECK(x == Rational(1, static_cast<long>(n)));
    }
}

TEST_CASE("the closed forms for two and three states") {
    for (const auto& p : testing::corpus(31, 50, 2, 3, {.irreducible = true})) {
        if (p.size() == 2) {
            CHECK(mfpt(p, 1, 0) == 1 / p(1, 0));
            CHECK(mfpt(p, 0, 1) == 1 / p(0, 1));
            continue;
        }
        const Rational m10 = (p(1, 2) + p(2, 1) + p(2, 0)) / (p(1, 2) * p(2, 0) + p(2, 1) * p(1, 0) + p(1, 0) * p(2, 0));
        CHECK(mfpt(p, 1, 0) == m10);
    }
}

TEST_CASE("reducible chains are refused with a certificate") {
    const TransitionMatrix r3 = fixtures::absorbing_split();
    CHECK_THROWS_AS(stationary(r3), ReducibleChain);
    CHECK_THROWS_AS(kemeny(r3), ReducibleChain);
    CHECK_THROWS_AS(mfpt(r3, 0, 1), ReducibleChain);
    try {
        analyze_chain(r3);
    } catch (const ReducibleChain& e) {
        CHECK(e.from() != e.to());
        CHECK_FALSE(reaches(r3, StateSet{e.to()}));
    }
    CHECK_THROWS(mfpt(fixtures::three_state_a(), 1, 1));
}

TEST_CASE("Green function and hitting") {
    const TransitionMatrix a = fixtures::three_state_a();
    CHECK(green_occupation(a, StateSet{0}, 1, 1) == 1);
    CHECK(green_occupation(a, StateSet{0}, 1, 2) == q("2/3"));
    CHECK(mean_hitting_time(a, StateSet{0}, 1) == q("5/3"));
    CHECK(mean_hitting_time(a, StateSet{0}, 0) == 0);
    CHECK(mean_hitting_time(fixtures::two_cycle(), StateSet{0}, 1) == 1);
    CHECK(hitting_distribution(fixtures::absorbing_split(), StateSet{1, 2}, 0) ==
          std::vector<Rational>{q("1/2"), q("1/2")});
    CHECK(hitting_distribution(a, StateSet{1, 2}, 0) == std::vector<Rational>{q("1/2"), q("1/2")});
    CHECK(hitting_distribution(a, StateSet{1, 2}, 2) == std::vector<Rational>{0, 1});

    const TransitionMatrix u6 = fixtures::uniform(6);
    for (State i = 2; i < 6; ++i)
        for (State j = 2; j < 6; ++j)
            CHECK(green_occupation(u6, StateSet{0, 1}, i, j) == (i == j ? q("3/2") : q("1/2")));
    for (std::size_t n = 2; n <= 6; ++n)
        for (std::size_t k = 1; k < n; ++k) {
            std::vector<State> r(k);
            for (std::size_t c = 0; c < k; ++c)
                r[c] = c;
            CHECK(mean_hitting_time(fixtures::uniform(n), StateSet(r), n - 1) ==
                  Rational(static_cast<long>(n)) / static_cast<long>(k));
        }

    const TransitionMatrix stuck{{1, 0}, {1, 0}};
    CHECK_THROWS_AS(green_occupation(stuck, StateSet{1}, 0, 0), InfeasibleRoots);
    CHECK_THROWS_AS(hitting_distribution(stuck, StateSet{1}, 0), InfeasibleRoots);
    CHECK_THROWS(green_occupation(a, StateSet{0}, 0, 1));
}

TEST_CASE("absorption analysis invariants") {
    for (const auto& p : testing::corpus(41, 40, 2, 5)) {
        const std::size_t n = p.size();
        for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
            const StateSet r = StateSet::from_mask(mask);
            if (!reaches(p, r)) {
                CHECK_THROWS_AS(absorption_analysis(p, r), InfeasibleRoots);
                continue;
            }
            const AbsorptionAnalysis aa = absorption_analysis(p, r);
            for (std::size_t a = 0; a < aa.free.size(); ++a) {
                Rational row = 0;
                for (std::size_t c = 0; c < r.size(); ++c)
                    row += aa.hit(a, c);
                CHECK(row == 1);
                CHECK(aa.green(a, a) >= 1);
                Rational green_row = 0;
                for (std::size_t b = 0; b < aa.free.size(); ++b) {
                    CHECK(aa.green(a, b) >= 0);
                    green_row += aa.green(a, b);
                }
                CHECK(green_row == aa.mean_hit[a]);
            }
            CHECK(aa.green == green_matrix_solve(p, r));
            CHECK(aa.hit == hitting_solve(p, r));
        }
    }
}

TEST_CASE("Cesaro forest limit") {
    const TransitionMatrix r3 = fixtures::absorbing_split();
    CHECK(cesaro_forest(r3, 0, 1) == q("1/2"));
    CHECK(cesaro_forest(r3, 1, 1) == 1);
    CHECK(cesaro_forest(r3, 1, 2) == 0);
    CHECK(cesaro_forest(r3, 0, 0) == 0);
    const TransitionMatrix a = fixtures::three_state_a();
    const auto pi = stationary(a);
    for (State i = 0; i < 3; ++i)
        for (State j = 0; j < 3; ++j)
            CHECK(cesaro_forest(a, i, j) == pi[j]);
    // Two closed classes {0,1} and {2}, transient 3.
    const TransitionMatrix two{{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {q("1/4"), 0, q("1/4"), q("1/2")}};
    const RationalMatrix f = cesaro_forest_matrix(two);
    CHECK(f(0, 0) == q("1/2"));
    CHECK(f(3, 2) == q("1/2"));
    CHECK(f(3, 0) == q("1/4"));
}

TEST_CASE("Chung's formula against the Green function") {
    const TransitionMatrix a = fixtures::three_state_a();
    CHECK(chung_occupation(a, 1, 1, 0) == 1);
    CHECK(chung_occupation(a, 1, 2, 0) == q("2/3"));
    CHECK(chung_occupation(fixtures::two_cycle(), 1, 1, 0) == 1);
    CHECK_THROWS(chung_occupation(a, 0, 1, 0));
    for (const auto& p : testing::corpus(51, 20, 2, 5, {.irreducible = true}))
        for (State k = 0; k < p.size(); ++k)
            for (State i = 0; i < p.size(); ++i)
                for (State j = 0; j < p.size(); ++j)
                    if (i != k && j != k)
                        CHECK(chung_occupation(p, i, j, k) == green_occupation(p, StateSet{k}, i, j));
}

namespace {

// P_i(X at T_R ^ T_loop = j) summed over the walks that reach R before
// revisiting anything, by depth-first search over the walk itself.
std::vector<Rational> stopped_by_paths(const TransitionMatrix& p, const StateSet& r, State i) {
    std::vector<Rational> out(r.size(), Rational(0));
    std::vector<bool> seen(p.size(), false);
    std::function<void(State, Rational)> walk = [&](State u, Rational mass) {
        seen[u] = true;
        for (State v = 0; v < p.size(); ++v) {
            if (sgn(p(u, v)) == 0)
                continue;
            if (r.contains(v)) {
                const auto at = std::find(r.begin(), r.end(), v) - r.begin();
                out[at] += mass * p(u, v);
            } else if (!seen[v]) {
                walk(v, mass * p(u, v));
            }
        }
        seen[u] = false;
    };
    walk(i, 1);
    return out;
}

} // namespace

TEST_CASE("stopped distribution with alpha = 1") {
    const auto d2 = ecrsf_stopped_distribution(fixtures::two_cycle(), StateSet{1}, 0);
    CHECK(d2.at_root == std::vector<Rational>{1});
    CHECK(d2.before_loop == 1);

    const TransitionMatrix a = fixtures::three_state_a();
    const auto sa = ecrsf_stopped_distribution(a, StateSet{2}, 0);
    CHECK(sa.at_root == stopped_by_paths(a, StateSet{2}, 0));
    // 0 -> 2 directly, or 0 -> 1 -> 2.
    CHECK(sa.before_loop == q("1/2") + q("1/2") * q("2/3"));

    const auto in_r = ecrsf_stopped_distribution(a, StateSet{0, 2}, 2);
    CHECK(in_r.at_root == std::vector<Rational>{0, 1});

    const auto empty = ecrsf_stopped_distribution(a, StateSet{}, 0);
    CHECK(empty.at_root.empty());
    CHECK(empty.before_loop == 0);

    for (const auto& p : testing::corpus(61, 30, 2, 5))
        for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << p.size()); ++mask) {
            const StateSet r = StateSet::from_mask(mask);
            for (State i : r.complement(p.size()))
                CHECK(ecrsf_stopped_distribution(p, r, i).at_root == stopped_by_paths(p, r, i));
        }
}

TEST_CASE("feasibility conditions agree") {
    const auto a = feasibility(fixtures::three_state_a(), StateSet{1});
    CHECK(a.feasible());
    const auto stuck = feasibility(TransitionMatrix{{1, 0}, {1, 0}}, StateSet{1});
    CHECK(stuck.consistent());
    CHECK_FALSE(stuck.weight_positive);
    CHECK_FALSE(stuck.det_nonzero);
    CHECK_THROWS(feasibility(fixtures::three_state_a(), StateSet{}));
    for (const auto& p : testing::corpus(71, 40, 1, 5))
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << p.size()); ++mask) {
            const auto f = feasibility(p, StateSet::from_mask(mask));
            CHECK(f.consistent());
            if (!unreachable_pair(p))
                CHECK(f.feasible());
        }
}

TEST_CASE("oracle equivalence on random chains") {
    for (const auto& p : testing::corpus(81, 60, 1, 6, {.irreducible = true})) {
        const ChainAnalysis a = analyze_chain(p);
        CHECK(a.pi == stationary_solve(p));
        CHECK(a.mfpt == mfpt_solve(p));
        CHECK(a.kemeny == kemeny_trace(p));
        CHECK(a.kemeny == kemeny(p));
        for (State i = 0; i < p.size(); ++i) {
            Rational k = 0;
            for (State j = 0; j < p.size(); ++j)
                k += a.mfpt(i, j) / a.mfpt(j, j);
            CHECK(k == a.kemeny);
        }
    }
}

TEST_CASE("modified chain") {
    for (const auto& p : testing::corpus(91, 30, 2, 5, {.irreducible = true})) {
        const ForestSums fs = forest_sums(p);
        for (State i = 0; i < p.size(); ++i)
            for (State j = 0; j < p.size(); ++j) {
                if (i == j)
                    continue;
                const ModifiedChainMfpt m = modified_chain_mfpt(p, i, j);
                CHECK(m.mfpt() == mfpt(p, i, j));
                CHECK(m.sigma_tilde_j * m.w_class == fs.sigma[j]);
                CHECK(m.sigma_tilde_others * m.w_class == fs.sigma_pair(i, j));
            }
    }
}
