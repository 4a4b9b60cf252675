#include "helpers.hpp"

#include "mctree/error.hpp"
#include "mctree/gof.hpp"
#include "mctree/law.hpp"
#include "mctree/serialize.hpp"
#include "mctree/wilson.hpp"

using namespace mctree;
using testing::q;

namespace {
constexpr State x = no_state;
constexpr double significance = 1e-3;
}

TEST_CASE("loop erasure") {
    CHECK(loop_erase({{0, 1, 0, 2}}).states == std::vector<State>{0, 2});
    CHECK(loop_erase({{0, 1, 2}}).states == std::vector<State>{0, 1, 2});
    CHECK(loop_erase({{0, 1, 2, 1, 3}}).states == std::vector<State>{0, 1, 3});
    CHECK(loop_erase({{4}}).states == std::vector<State>{4});
    CHECK_THROWS(loop_erase({}));
    Rng rng(3);
    for (int t = 0; t < 200; ++t) {
        PathTrace walk;
        for (int k = 0; k < 1 + t % 17; ++k)
            walk.states.push_back(rng.below(5));
        const PathTrace erased = loop_erase(walk);
        CHECK(erased.self_avoiding());
        CHECK(loop_erase(erased) == erased);
        CHECK(erased.states.front() == walk.states.front());
        CHECK(erased.states.back() == walk.states.back());
    }
}

TEST_CASE("uniform draws") {
    Rng rng(7);
    std::vector<std::uint64_t> counts(6, 0);
    for (int k = 0; k < 60000; ++k)
        ++counts[rng.below(6)];
    CHECK(gof_test(counts, std::vector<double>(6, 1.0 / 6), significance).passed());
    CHECK_THROWS(rng.below(0));
    Rng a(1, 2), b(1, 2), c(1, 3);
    CHECK(a.next() == b.next());
    CHECK(a.next() != c.next());
}

TEST_CASE("chi-square report") {
    std::vector<std::uint64_t> all_one(16, 0);
    all_one[0] = 1000;
    CHECK_FALSE(gof_test(all_one, std::vector<double>(16, 1.0 / 16), significance).passed());
    const GofReport single = gof_test({500}, {1.0}, significance);
    CHECK(single.passed());
    CHECK(single.dof == 0);
    const GofReport impossible = gof_test({10, 1}, {1.0, 0.0}, significance);
    CHECK(impossible.impossible_observed);
    CHECK_FALSE(impossible.passed());
    CHECK_THROWS(gof_test({1, 2}, {0.5, 0.6}, significance));
    // With 2 degrees of freedom the tail is exp(-x/2).
    const GofReport two = gof_test({60, 40, 100}, {0.25, 0.25, 0.5}, significance);
    CHECK(two.statistic == doctest::Approx(4.0));
    CHECK(two.dof == 2);
    CHECK(two.p_value == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("deterministic samples") {
    const auto d2 = wilson_tree(fixtures::two_cycle(), 0, {.seed = 4, .sample_count = 20});
    for (const auto& t : d2)
        CHECK(t == RootedForest(StateSet{0}, {x, 0}));
    const auto a = wilson_forest(fixtures::three_state_a(), StateSet{0, 1}, {.seed = 4, .sample_count = 50});
    for (const auto& f : a)
        CHECK(f == RootedForest(StateSet{0, 1}, {x, x, 0}));
    const auto all = wilson_forest(fixtures::three_state_a(), StateSet{0, 1, 2}, {.seed = 4, .sample_count = 3});
    for (const auto& f : all)
        CHECK(f.parents() == std::vector<State>{x, x, x});
    const auto cyc = kkw_sample(fixtures::two_cycle(), CycleWeights::constant(1), StateSet{}, {.seed = 4, .sample_count = 20});
    for (const auto& f : cyc)
        CHECK(f.cycles() == std::vector<std::vector<State>>{{0, 1}});
}

TEST_CASE("infeasible roots are refused before walking") {
    const TransitionMatrix stuck{{1, 0}, {1, 0}};
    CHECK_THROWS_AS(wilson_tree(stuck, 1, {}), InfeasibleRoots);
    CHECK_THROWS_AS(kkw_sample(stuck, CycleWeights::constant(0), StateSet{1}, {}), InfeasibleRoots);
    CHECK_NOTHROW(kkw_sample(stuck, CycleWeights::constant(q("1/2")), StateSet{1}, {}));
    CHECK_THROWS_AS(kkw_sample(fixtures::two_cycle(), CycleWeights::constant(0), StateSet{}, {}), InfeasibleRoots);
    // A rule that only keeps 3-cycles on a chain with no 3-cycles.
    const CycleWeights only_three([](std::span<const State> c) { return Rational(c.size() == 3 ? 1 : 0); });
    CHECK_THROWS_AS(kkw_sample(fixtures::two_cycle(), only_three, StateSet{}, {}), InfeasibleRoots);
    CHECK_THROWS(wilson_tree(fixtures::two_cycle(), 0, {.sample_count = 0}));
}

TEST_CASE("reproducible streams") {
    const TransitionMatrix a = fixtures::three_state_a();
    CHECK(wilson_tree(a, 0, {.seed = 9, .sample_count = 50}) == wilson_tree(a, 0, {.seed = 9, .sample_count = 50}));
    CHECK(wilson_tree(a, 0, {.seed = 9, .sample_count = 50}) != wilson_tree(a, 0, {.seed = 10, .sample_count = 50}));
}

TEST_CASE("tree law on U(4) and fixture A") {
    const TransitionMatrix u4 = fixtures::uniform(4);
    const ExactLaw law = forest_law(u4, StateSet{0});
    CHECK(law.configs.size() == 16);
    LawTally tally(law);
    for (const auto& t : wilson_tree(u4, 0, {.seed = 12, .sample_count = 100000}))
        tally.add(t.parents());
    CHECK(tally.test(significance).passed());

    const TransitionMatrix a = fixtures::three_state_a();
    std::size_t hits = 0;
    const std::size_t draws = 30000;
    for (const auto& t : wilson_tree(a, 0, {.seed = 13, .sample_count = draws}))
        hits += t == RootedForest(StateSet{0}, {x, 2, 0});
    const std::vector<std::uint64_t> observed{hits, draws - hits};
    CHECK(gof_test(observed, {2.0 / 3, 1.0 / 3}, significance).passed());
}

TEST_CASE("forest laws on random chains, both site orders") {
    int t = 0;
    for (const auto& p : testing::corpus(201, 8, 2, 4, {.irreducible = true})) {
        const StateSet roots = p.size() > 2 ? StateSet{0, 2} : StateSet{1};
        const ExactLaw law = forest_law(p, roots);
        for (auto order : {SiteOrder::increasing, SiteOrder::decreasing}) {
            LawTally tally(law);
            for (const auto& f : wilson_forest(p, roots, {.seed = 300u + t++, .sample_count = 40000, .order = order}))
                tally.add(f.parents());
            CHECK(tally.test(significance).passed());
        }
    }
}

TEST_CASE("R3 splits evenly") {
    std::vector<std::uint64_t> counts(2, 0);
    for (const auto& f : wilson_forest(fixtures::absorbing_split(), StateSet{1, 2}, {.seed = 5, .sample_count = 20000}))
        ++counts[f.parent(0) == 1 ? 0 : 1];
    CHECK(gof_test(counts, {0.5, 0.5}, significance).passed());
}

TEST_CASE("loop-erased path probabilities") {
    CHECK(lerw_path_prob(fixtures::two_cycle(), StateSet{1}, {{0, 1}}) == 1);
    const TransitionMatrix a = fixtures::three_state_a();
    CHECK(lerw_path_prob(a, StateSet{0}, {{1, 2, 0}}) == q("2/3"));
    CHECK(lerw_path_prob(a, StateSet{0}, {{1, 0}}) == q("1/3"));
    CHECK(self_avoiding_paths(3, StateSet{0}, 1).size() == 2);
    CHECK_THROWS(lerw_path_prob(a, StateSet{0}, {{1, 2, 1, 0}}));
    CHECK_THROWS(lerw_path_prob(a, StateSet{0}, {{1, 2}}));
    CHECK_THROWS(lerw_path_prob(a, StateSet{0}, {{0, 1, 0}}));
    CHECK_THROWS(lerw_path_prob(a, StateSet{0, 2}, {{1, 2, 0}}));

    for (const auto& p : testing::corpus(211, 24, 2, 5)) {
        const std::size_t n = p.size();
        for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
            const StateSet r = StateSet::from_mask(mask);
            if (sgn(w_sum(p, r)) == 0) {
                CHECK_THROWS_AS(lerw_path_prob(p, r, self_avoiding_paths(n, r, r.complement(n).front()).front()),
                                InfeasibleRoots);
                continue;
            }
            for (State i : r.complement(n)) {
                Rational total = 0;
                for (const auto& path : self_avoiding_paths(n, r, i))
                    total += lerw_path_prob(p, r, path);
                CHECK(total == 1);
            }
        }
    }
}

TEST_CASE("the first branch follows the loop-erased law") {
    const TransitionMatrix p = testing::corpus(221, 1, 4, 4, {.irreducible = true}).front();
    const StateSet roots{3};
    const auto paths = self_avoiding_paths(4, roots, 0);
    std::vector<double> expected;
    for (const auto& path : paths)
        expected.push_back(to_double(lerw_path_prob(p, roots, path)));
    std::vector<std::uint64_t> counts(paths.size(), 0);
    for (const auto& t : wilson_tree(p, 3, {.seed = 17, .sample_count = 50000})) {
        const auto it = std::find(paths.begin(), paths.end(), PathTrace{t.path_to_root(0)});
        REQUIRE(it != paths.end());
        ++counts[it - paths.begin()];
    }
    CHECK(gof_test(counts, expected, significance).passed());
}

TEST_CASE("cycle-rooted sampling") {
    // alpha = 1 on U(3) with no roots: all 27 maps.
    const TransitionMatrix u3 = fixtures::uniform(3);
    const CycleWeights one = CycleWeights::constant(1);
    const ExactLaw law = ecrsf_law(u3, one, StateSet{});
    CHECK(law.configs.size() == 27);
    LawTally tally(law);
    for (const auto& f : kkw_sample(u3, one, StateSet{}, {.seed = 21, .sample_count = 60000}))
        tally.add(f.successors());
    CHECK(tally.test(significance).passed());

    // alpha = 0 is Wilson.
    const TransitionMatrix p = testing::corpus(231, 1, 4, 4, {.irreducible = true}).front();
    const StateSet roots{1};
    const ExactLaw tree_law = forest_law(p, roots);
    LawTally zero(tree_law);
    for (const auto& f : kkw_sample(p, CycleWeights::constant(0), roots, {.seed = 22, .sample_count = 60000}))
        zero.add(f.successors());
    CHECK(zero.test(significance).passed());

    // A cycle-dependent alpha with roots present.
    const CycleWeights by_length([](std::span<const State> c) { return Rational(1, static_cast<long>(c.size() + 1)); });
    const ExactLaw mixed_law = ecrsf_law(p, by_length, roots);
    LawTally mixed(mixed_law);
    for (const auto& f : kkw_sample(p, by_length, roots, {.seed = 23, .sample_count = 60000}))
        mixed.add(f.successors());
    CHECK(mixed.test(significance).passed());
}

TEST_CASE("forest JSON round trip") {
    const std::vector<std::string> labels{"a", "b", "c"};
    const RootedForest f(StateSet{0}, {x, 2, 0});
    const Json doc = forest_json(f, labels);
    CHECK(doc.dump() == R"({"parent":{"b":"c","c":"a"},"roots":["a"]})");
    CHECK(forest_from_json(doc, labels) == f);
    const Ecrsf e(StateSet{}, {1, 0, 0});
    const Json edoc = ecrsf_json(e, labels);
    CHECK(edoc["cycles"] == Json::parse(R"([["a","b"]])"));
    CHECK(ecrsf_from_json(edoc, labels) == e);
    CHECK_THROWS_AS(forest_from_json(Json::parse(R"({"roots":["a"],"parent":{"b":"z"}})"), labels), ParseError);
    CHECK_THROWS_AS(forest_from_json(Json::parse(R"({"roots":["a"],"parent":{"b":"c","c":"b"}})"), labels), ParseError);
}
