#include "helpers.hpp"

#include "mctree/error.hpp"
#include "mctree/io.hpp"
#include "mctree/support.hpp"

using namespace mctree;
using testing::q;

TEST_CASE("rationals are canonical") {
    CHECK(to_string(q("6/8")) == "3/4");
    CHECK(to_string(q("4/2")) == "2");
    CHECK(to_string(q("-3")) == "-3");
    CHECK(to_string(q("0/5")) == "0");
    CHECK_THROWS_AS(q("2/-4"), ParseError);
    CHECK(q("-2/4") == Rational(-1, 2));
    CHECK_THROWS_AS(q("1/0"), ParseError);
    CHECK_THROWS_AS(q("1//2"), ParseError);
    CHECK_THROWS_AS(q("x"), ParseError);
    CHECK_THROWS_AS(q(""), ParseError);
    CHECK(rounded_12(Rational(1, 3)) == doctest::Approx(0.333333333333).epsilon(1e-13));
}

TEST_CASE("parse matrix document") {
    const auto lc = parse_chain(R"({"n": 3, "rows": [["0","1/2","1/2"],["1/3","0","2/3"],["1","0","0"]]})",
                                ChainFormat::matrix);
    CHECK(lc.chain == fixtures::three_state_a());
    CHECK(lc.chain(1, 2) == q("2/3"));
    CHECK(lc.labels == std::vector<std::string>{"0", "1", "2"});

    const auto ints = parse_chain(R"({"n": 2, "rows": [[0, 1], [1, 0]]})", ChainFormat::matrix);
    CHECK(ints.chain == fixtures::two_cycle());
}

TEST_CASE("row sum violations name the row and its sum") {
    try {
        parse_chain(R"({"n": 2, "rows": [["1/2","1/3"],["1","0"]]})", ChainFormat::matrix);
        FAIL("accepted a substochastic row");
    } catch (const InvalidChain& e) {
        CHECK(std::string(e.what()).find("row 0 sums to 5/6") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_chain(R"({"n": 2, "rows": [["3/2","-1/2"],["1","0"]]})", ChainFormat::matrix), InvalidChain);
    CHECK_THROWS_AS(parse_chain(R"({"n": 2, "rows": [["1/2"],["1","0"]]})", ChainFormat::matrix), ParseError);
    CHECK_THROWS_AS(parse_chain(R"({"n": 3, "rows": [["1","0"],["1","0"]]})", ChainFormat::matrix), ParseError);
    CHECK_THROWS_AS(parse_chain("{not json", ChainFormat::matrix), ParseError);
    CHECK_THROWS_AS(parse_chain(R"({"n": 1, "rows": [["a/b"]]})", ChainFormat::matrix), ParseError);
}

TEST_CASE("edge lists") {
    const auto d2 = parse_chain("0 1 1/1\n1 0 1/1\n", ChainFormat::edges);
    CHECK(d2.chain == fixtures::two_cycle());

    const auto named = parse_chain("# weather\nsun rain 1/2\nsun sun 1/2\nrain sun 1\n", ChainFormat::edges);
    CHECK(named.labels == std::vector<std::string>{"sun", "rain"});
    CHECK(named.chain(0, 0) == q("1/2"));
    CHECK(named.chain(1, 0) == 1);

    CHECK_THROWS_AS(parse_chain("0 1 1\n0 1 1\n1 0 1\n", ChainFormat::edges), ParseError);
    CHECK_THROWS_AS(parse_chain("0 1\n", ChainFormat::edges), ParseError);
    CHECK_THROWS_AS(parse_chain("0 1 1/2\n1 0 1\n", ChainFormat::edges), InvalidChain);
}

TEST_CASE("serialize then parse is the identity") {
    for (const auto& p : testing::corpus(3, 20, 1, 6)) {
        const LabeledChain lc{p, default_labels(p.size())};
        const std::string text = serialize_chain(lc);
        const auto back = parse_chain(text, ChainFormat::matrix);
        CHECK(back.chain == p);
        CHECK(serialize_chain(back) == text);
    }
    const LabeledChain named{fixtures::two_cycle(), {"a", "b"}};
    CHECK(parse_chain(serialize_chain(named), ChainFormat::matrix).labels == named.labels);
}

TEST_CASE("conductances") {
    const WeightedDigraph triangle(3, {{0, 1, 1}, {1, 0, 1}, {1, 2, 1}, {2, 1, 1}, {0, 2, 1}, {2, 0, 1}});
    const TransitionMatrix p = from_conductances(triangle);
    for (State i = 0; i < 3; ++i)
        for (State j = 0; j < 3; ++j)
            CHECK(p(i, j) == (i == j ? Rational(0) : q("1/2")));
    const SquareMatrix l = weighted_laplacian(triangle);
    CHECK(l(0, 0) == 2);
    CHECK(l(0, 1) == -1);

    const TransitionMatrix two = from_conductances(WeightedDigraph(2, {{0, 1, 3}, {1, 0, 5}}));
    CHECK(two == fixtures::two_cycle());

    const WeightedDigraph path(3, {{0, 1, 1}, {1, 0, 1}, {1, 2, 2}, {2, 1, 1}});
    const TransitionMatrix pp = from_conductances(path);
    CHECK(pp(1, 0) == q("1/3"));
    CHECK(pp(1, 2) == q("2/3"));

    // A lone arc has an outgoing-conductance-free head, which is refused.
    CHECK_THROWS_AS(WeightedDigraph(2, {{0, 1, 7}}), InvalidChain);
    CHECK_THROWS_AS(WeightedDigraph(2, {{0, 0, 1}, {1, 0, 1}}), InvalidChain);
    CHECK_THROWS_AS(WeightedDigraph(2, {{0, 1, 1}, {0, 1, 2}, {1, 0, 1}}), InvalidChain);
    CHECK_THROWS_AS(WeightedDigraph(2, {{0, 1, -1}, {1, 0, 1}}), InvalidChain);
}

TEST_CASE("weighted Laplacian of a single arc") {
    // Built by hand since the vertex without out-arcs is not a valid digraph.
    SquareMatrix expect(2, 2);
    expect(0, 0) = 7;
    expect(0, 1) = -7;
    const WeightedDigraph g(2, {{0, 1, 7}, {1, 0, 1}});
    const SquareMatrix l = weighted_laplacian(g);
    CHECK(l(0, 0) == expect(0, 0));
    CHECK(l(0, 1) == expect(0, 1));
}

TEST_CASE("L = D (I - P) for random digraphs") {
    Rng rng(11);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 2 + t % 4;
        std::vector<Arc> arcs;
        for (State i = 0; i < n; ++i) {
            bool any = false;
            for (State j = 0; j < n; ++j) {
                const long c = static_cast<long>(rng.below(4));
                if (i != j && c > 0) {
                    arcs.push_back({i, j, Rational(c, 1 + static_cast<long>(rng.below(3)))});
                    any = true;
                }
            }
            if (!any)
                arcs.push_back({i, (i + 1) % n, 1});
        }
        const WeightedDigraph g(n, arcs);
        const SquareMatrix l = weighted_laplacian(g);
        SquareMatrix d(n, n);
        for (State i = 0; i < n; ++i)
            d(i, i) = g.out_degree(i);
        CHECK(l == d * laplacian(from_conductances(g)));
        const TransitionMatrix p = from_conductances(g);
        for (State i = 0; i < n; ++i)
            CHECK(p(i, i) == 0);
    }
}

TEST_CASE("Laplacian I - P") {
    const SquareMatrix d2 = laplacian(fixtures::two_cycle());
    CHECK(d2 == SquareMatrix{{1, -1}, {-1, 1}});
    const SquareMatrix a = laplacian(fixtures::three_state_a());
    CHECK(a(2, 0) == -1);
    CHECK(a(2, 1) == 0);
    CHECK(a(2, 2) == 1);
    CHECK(laplacian(fixtures::uniform(2)) == SquareMatrix{{q("1/2"), q("-1/2")}, {q("-1/2"), q("1/2")}});
}

TEST_CASE("support graph") {
    CHECK_FALSE(unreachable_pair(fixtures::three_state_a()));
    const auto cert = unreachable_pair(fixtures::absorbing_split());
    REQUIRE(cert);
    CHECK(cert->first != cert->second);
    CHECK_FALSE(reaches(fixtures::absorbing_split(), StateSet{cert->second}));
    CHECK_THROWS_AS(require_irreducible(fixtures::absorbing_split()), ReducibleChain);
    CHECK(strongly_connected_components(fixtures::absorbing_split()) ==
          std::vector<std::vector<State>>{{0}, {1}, {2}});
    CHECK(period(fixtures::two_cycle()) == 2);
    CHECK(period(fixtures::uniform(3)) == 1);
    CHECK(period(fixtures::three_state_a()) == 1); // cycles of length 2 and 3
    CHECK(period(TransitionMatrix{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}) == 3);
    CHECK(reaches(fixtures::absorbing_split(), StateSet{1, 2}));
    CHECK_FALSE(reaches(TransitionMatrix{{1, 0}, {1, 0}}, StateSet{1}));
}

TEST_CASE("random chains are stochastic and respect the filters") {
    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 1 + t % 6;
        const TransitionMatrix p = random_chain(rng, n, {.irreducible = true});
        CHECK_FALSE(unreachable_pair(p));
        const TransitionMatrix a = random_chain(rng, n, {.aperiodic = true});
        CHECK(period(a) == 1);
    }
}
