#include "mctree/cli.hpp"

#include "mctree/error.hpp"
#include "mctree/formulas.hpp"
#include "mctree/io.hpp"
#include "mctree/law.hpp"
#include "mctree/linalg.hpp"
#include "mctree/serialize.hpp"
#include "mctree/support.hpp"
#include "mctree/verify.hpp"
#include "mctree/wilson.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace mctree {

namespace {

struct GlobalOptions {
    std::string input;
    std::string format = "matrix";
    bool conductances = false;
    bool with_float = false;
    std::size_t guard = default_guard;
    std::uint64_t seed = 1;
};

struct Loaded {
    LabeledChain chain;
    std::optional<WeightedDigraph> graph; // present for conductance input
};

// Thrown for bad command-line values; maps to the parse exit code.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class Session {
  public:
    Session(const GlobalOptions& g, std::istream& in, std::ostream& out, std::ostream& err)
        : g_(g), in_(in), out_(out), err_(err) {}

    const Loaded& load() {
        if (loaded_)
            return *loaded_;
        std::string text;
        if (g_.input.empty() || g_.input == "-") {
            std::ostringstream buf;
            buf << in_.rdbuf();
            text = buf.str();
        } else {
            std::ifstream file(g_.input);
            if (!file)
                throw ParseError("cannot open " + g_.input);
            std::ostringstream buf;
            buf << file.rdbuf();
            text = buf.str();
        }
        if (g_.conductances) {
            LabeledDigraph d = parse_conductances(text);
            loaded_ = Loaded{LabeledChain{from_conductances(d.graph), d.labels}, d.graph};
        } else {
            const ChainFormat f = g_.format == "edges" ? ChainFormat::edges : ChainFormat::matrix;
            loaded_ = Loaded{parse_chain(text, f), std::nullopt};
        }
        return *loaded_;
    }

    const std::vector<std::string>* labels() const { return loaded_ ? &loaded_->chain.labels : nullptr; }

    std::string label(State s) const {
        if (const auto* l = labels(); l && s < l->size())
            return (*l)[s];
        return std::to_string(s);
    }

    State state(const std::string& name) {
        const auto& labels = load().chain.labels;
        for (State s = 0; s < labels.size(); ++s)
            if (labels[s] == name)
                return s;
        throw UsageError("unknown state '" + name + "'");
    }

    StateSet states(const std::vector<std::string>& names) {
        std::vector<State> out;
        for (const auto& group : names) {
            std::istringstream parts(group);
            std::string name;
            while (std::getline(parts, name, ','))
                if (!name.empty())
                    out.push_back(state(name));
        }
        return StateSet(std::move(out));
    }

    Json labelled(const std::vector<State>& xs) const {
        Json out = Json::array();
        for (State s : xs)
            out.push_back(label(s));
        return out;
    }

    void emit(const Json& doc) { out_ << doc.dump(2) << '\n'; }
    void emit_line(const Json& doc) { out_ << doc.dump() << '\n'; }
    std::ostream& err() { return err_; }
    const GlobalOptions& globals() const { return g_; }

  private:
    const GlobalOptions& g_;
    std::istream& in_;
    std::ostream& out_;
    std::ostream& err_;
    std::optional<Loaded> loaded_;
};

// -- analyze ---------------------------------------------------------------

int cmd_analyze(Session& s) {
    const auto& lc = s.load().chain;
    const TransitionMatrix& p = lc.chain;
    const std::size_t guard = s.globals().guard;
    const ChainAnalysis a = analyze_chain(p, guard);
    const auto pi = stationary_solve(p);
    const RationalMatrix m = mfpt_solve(p);
    const Rational trace = kemeny_trace(p);
    Json doc{{"command", "analyze"},
             {"n", p.size()},
             {"labels", lc.labels},
             {"pi", rationals_json(a.pi)},
             {"mfpt", matrix_json(a.mfpt)},
             {"kemeny", rational_json(a.kemeny)},
             {"oracle", {{"pi", rationals_json(pi)}, {"mfpt", matrix_json(m)}, {"kemeny", rational_json(trace)}}},
             {"agree", {{"pi", a.pi == pi}, {"mfpt", a.mfpt == m}, {"kemeny", a.kemeny == trace}}}};
    if (s.globals().with_float)
        doc["float"] = {{"pi", floats_json(a.pi)}, {"mfpt", float_matrix_json(a.mfpt)}, {"kemeny", float_json(a.kemeny)}};
    s.emit(doc);
    return exit_ok;
}

// -- hit / green -------------------------------------------------------------

struct AbsorptionSides {
    AbsorptionAnalysis tree;
    SquareMatrix green;
    RationalMatrix hit;
};

AbsorptionSides absorption_sides(Session& s, const StateSet& roots) {
    const TransitionMatrix& p = s.load().chain.chain;
    if (roots.empty())
        throw UsageError("--targets must name at least one state");
    AbsorptionSides out{absorption_analysis(p, roots, s.globals().guard), {}, {}};
    if (out.tree.free.empty())
        return out;
    out.green = green_matrix_solve(p, roots);
    out.hit = hitting_solve(p, roots);
    return out;
}

Json hit_row(Session& s, const AbsorptionSides& sides, State i) {
    const auto& tree = sides.tree;
    const std::size_t m = tree.free.size();
    const auto where = std::find(tree.free.begin(), tree.free.end(), i);
    Json row{{"from", s.label(i)}};
    std::vector<Rational> hit_tree, hit_oracle, green_tree, green_oracle;
    Rational mean_tree = 0, mean_oracle = 0;
    if (where == tree.free.end()) {
        for (State r : tree.roots)
            hit_tree.push_back(r == i ? 1 : 0);
        hit_oracle = hit_tree;
        green_tree.assign(m, Rational(0));
        green_oracle = green_tree;
    } else {
        const std::size_t a = where - tree.free.begin();
        for (std::size_t c = 0; c < tree.roots.size(); ++c) {
            hit_tree.push_back(tree.hit(a, c));
            hit_oracle.push_back(sides.hit(a, c));
        }
        for (std::size_t b = 0; b < m; ++b) {
            green_tree.push_back(tree.green(a, b));
            green_oracle.push_back(sides.green(a, b));
            mean_oracle += sides.green(a, b);
        }
        mean_tree = tree.mean_hit[a];
    }
    row["hitting"] = {{"tree", rationals_json(hit_tree)}, {"oracle", rationals_json(hit_oracle)}};
    row["mean_hit"] = {{"tree", rational_json(mean_tree)}, {"oracle", rational_json(mean_oracle)}};
    row["green_row"] = {{"tree", rationals_json(green_tree)}, {"oracle", rationals_json(green_oracle)}};
    row["agree"] = hit_tree == hit_oracle && green_tree == green_oracle && mean_tree == mean_oracle;
    if (s.globals().with_float)
        row["float"] = {{"hitting", floats_json(hit_tree)},
                        {"mean_hit", float_json(mean_tree)},
                        {"green_row", floats_json(green_tree)}};
    return row;
}

int cmd_hit(Session& s, const std::vector<std::string>& targets, const std::string& from) {
    const StateSet roots = s.states(targets);
    const AbsorptionSides sides = absorption_sides(s, roots);
    Json doc{{"command", "hit"},
             {"targets", s.labelled(roots.states())},
             {"free", s.labelled(sides.tree.free)}};
    if (!from.empty()) {
        doc.update(hit_row(s, sides, s.state(from)));
    } else {
        Json rows = Json::array();
        for (State i = 0; i < s.load().chain.chain.size(); ++i)
            rows.push_back(hit_row(s, sides, i));
        doc["rows"] = std::move(rows);
    }
    s.emit(doc);
    return exit_ok;
}

int cmd_green(Session& s, const std::vector<std::string>& targets) {
    const StateSet roots = s.states(targets);
    const AbsorptionSides sides = absorption_sides(s, roots);
    const bool empty = sides.tree.free.empty();
    Json doc{{"command", "green"},
             {"targets", s.labelled(roots.states())},
             {"free", s.labelled(sides.tree.free)},
             {"green", {{"tree", matrix_json(sides.tree.green)}, {"oracle", empty ? Json::array() : matrix_json(sides.green)}}},
             {"hitting", {{"tree", matrix_json(sides.tree.hit)}, {"oracle", empty ? Json::array() : matrix_json(sides.hit)}}},
             {"mean_hit", rationals_json(sides.tree.mean_hit)},
             {"agree", empty || (sides.tree.green == sides.green && sides.tree.hit == sides.hit)}};
    if (s.globals().with_float)
        doc["float"] = {{"green", float_matrix_json(sides.tree.green)},
                        {"hitting", float_matrix_json(sides.tree.hit)},
                        {"mean_hit", floats_json(sides.tree.mean_hit)}};
    s.emit(doc);
    return exit_ok;
}

// -- count -------------------------------------------------------------------

Integer binomial(std::size_t n, std::size_t k) {
    Integer out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

int cmd_count(Session& s, const std::vector<std::size_t>& cayley, const std::vector<std::size_t>& prism) {
    const std::size_t guard = s.globals().guard;
    if (!cayley.empty()) {
        const std::size_t n = cayley[0], k = cayley[1];
        if (k < 1 || k > n)
            throw UsageError("--cayley needs 1 <= k <= n");
        check_guard(n - k, guard);
        std::vector<State> roots(k);
        for (std::size_t a = 0; a < k; ++a)
            roots[a] = a;
        Integer enumerated = 0;
        for_each_forest(n, StateSet(roots), [&](std::span<const State>) { ++enumerated; }, guard);
        const Integer closed = cayley_count(n, k);
        s.emit({{"command", "count"},
                {"cayley",
                 {{"n", n},
                  {"k", k},
                  {"closed_form", closed.get_str()},
                  {"enumerated", enumerated.get_str()},
                  {"agree", closed == enumerated}}}});
        return exit_ok;
    }
    if (!prism.empty()) {
        const std::size_t n = prism[0], m = prism[1];
        if (n < 2 || m < 3)
            throw UsageError("--prism needs n >= 2 and m >= 3");
        const Integer closed = prism_tree_count(n, m);
        const Rational det = undirected_tree_count(prism_graph(n, m));
        s.emit({{"command", "count"},
                {"prism",
                 {{"n", n},
                  {"m", m},
                  {"closed_form", closed.get_str()},
                  {"determinant", to_string(det)},
                  {"agree", Rational(closed) == det}}}});
        return exit_ok;
    }

    const Loaded& loaded = s.load();
    const TransitionMatrix& p = loaded.chain.chain;
    const std::size_t n = p.size();
    check_guard(n - 1, guard);
    std::vector<Integer> counts(n + 1, 0);
    std::vector<Rational> weights(n + 1, Rational(0));
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        const StateSet roots = StateSet::from_mask(mask);
        for_each_forest(
            n, roots,
            [&](std::span<const State> parent) {
                ++counts[roots.size()];
                Rational w = 1;
                for (State v = 0; v < n; ++v)
                    if (parent[v] != no_state)
                        w *= p(v, parent[v]);
                weights[roots.size()] += w;
            },
            guard);
    }
    Json by_trees = Json::array();
    bool agree = true;
    for (std::size_t k = 1; k <= n; ++k) {
        const Integer closed = binomial(n, k) * cayley_count(n, k);
        agree = agree && closed == counts[k];
        Json row{{"trees", k},
                 {"forests", counts[k].get_str()},
                 {"closed_form", closed.get_str()},
                 {"sigma", rational_json(weights[k])}};
        if (s.globals().with_float)
            row["sigma_float"] = float_json(weights[k]);
        by_trees.push_back(std::move(row));
    }
    const TreeSums ts = sigma_sums(p, guard);
    Json doc{{"command", "count"},
             {"n", n},
             {"labels", loaded.chain.labels},
             {"by_tree_count", std::move(by_trees)},
             {"tree_sums", rationals_json(ts.sigma)},
             {"agree", agree}};
    if (loaded.graph && loaded.graph->symmetric())
        doc["undirected_tree_count"] = rational_json(undirected_tree_count(*loaded.graph));
    s.emit(doc);
    return exit_ok;
}

// -- sample ------------------------------------------------------------------

struct SampleArgs {
    std::string mode = "tree";
    std::string root;
    std::vector<std::string> roots;
    std::string alpha = "1";
    std::size_t count = 1;
    bool gof = false;
    std::string order = "increasing";
};

int cmd_sample(Session& s, const SampleArgs& args) {
    const auto& lc = s.load().chain;
    const TransitionMatrix& p = lc.chain;
    const std::uint64_t seed = s.globals().seed;
    const std::size_t guard = s.globals().guard;
    if (args.count == 0)
        throw UsageError("--count must be at least 1");
    const SiteOrder order = args.order == "decreasing" ? SiteOrder::decreasing : SiteOrder::increasing;

    StateSet roots;
    if (args.mode == "tree") {
        if (args.root.empty())
            throw UsageError("--mode tree needs --root");
        roots = StateSet{s.state(args.root)};
    } else {
        roots = s.states(args.roots);
        if (args.mode == "forest" && roots.empty())
            throw UsageError("--mode forest needs --roots");
    }
    const bool ecrsf = args.mode == "ecrsf";
    const CycleWeights alpha = CycleWeights::constant(parse_rational(args.alpha));
    if (ecrsf && (*alpha.constant_value() < 0 || *alpha.constant_value() > 1))
        throw UsageError("--alpha must lie in [0, 1]");

    WilsonSampler sampler(p, seed, order, guard);
    // Feasibility is decided before anything is printed.
    std::vector<State> first;
    if (ecrsf)
        first = sampler.cycle_rooted(alpha, roots).successors();
    else
        first = sampler.forest(roots).parents();

    std::optional<ExactLaw> law;
    std::string gof_skipped;
    if (args.gof) {
        if (roots.complement(p.size()).size() > guard)
            gof_skipped = "state space beyond the enumeration guard";
        else
            law = ecrsf ? ecrsf_law(p, alpha, roots, guard) : forest_law(p, roots, guard);
    }
    std::optional<LawTally> tally;
    if (law)
        tally.emplace(*law);

    std::set<std::vector<State>> distinct;
    auto emit = [&](std::size_t k, std::vector<State> config) {
        if (tally)
            tally->add(config);
        Json line{{"index", k}};
        if (ecrsf)
            line["ecrsf"] = ecrsf_json(Ecrsf(roots, config), lc.labels);
        else
            line["forest"] = forest_json(RootedForest(roots, config), lc.labels);
        s.emit_line(line);
        distinct.insert(std::move(config));
    };
    emit(0, std::move(first));
    for (std::size_t k = 1; k < args.count; ++k)
        emit(k, ecrsf ? sampler.cycle_rooted(alpha, roots).successors() : sampler.forest(roots).parents());

    Json summary{{"mode", args.mode},
                 {"roots", s.labelled(roots.states())},
                 {"count", args.count},
                 {"seed", seed},
                 {"distinct", distinct.size()}};
    if (ecrsf)
        summary["alpha"] = to_string(*alpha.constant_value());
    int code = exit_ok;
    if (tally) {
        const GofReport r = tally->test(1e-3);
        summary["gof"] = {{"statistic", r.statistic}, {"dof", r.dof},          {"p_value", r.p_value},
                          {"cells", r.cells},         {"significance", 1e-3}, {"impossible_observed", r.impossible_observed},
                          {"passed", r.passed()}};
        if (!r.passed()) {
            s.err() << "sample: goodness of fit failed: " << r.summary() << '\n';
            code = exit_verification;
        }
    } else if (args.gof) {
        summary["gof"] = {{"skipped", gof_skipped}};
    }
    s.emit_line({{"summary", summary}});
    return code;
}

// -- verify ------------------------------------------------------------------

struct VerifyArgs {
    std::string suite = "all";
    std::optional<std::size_t> trials;
    std::optional<std::size_t> max_n;
    std::optional<std::size_t> samples;
    bool inject_fault = false;
};

int cmd_verify(Session& s, const VerifyArgs& args) {
    VerifyOptions opts;
    opts.seed = s.globals().seed;
    opts.trials = args.trials;
    opts.max_n = args.max_n;
    opts.guard = s.globals().guard;
    opts.inject_fault = args.inject_fault;
    if (args.samples)
        opts.samples = *args.samples;

    std::vector<std::string> names;
    if (args.suite == "all")
        names = suite_names();
    else
        names.push_back(args.suite);

    Json suites = Json::array();
    bool passed = true;
    for (const auto& name : names) {
        const SuiteReport r = run_suite(name, opts);
        passed = passed && r.passed();
        Json entry{{"name", r.name},     {"trials", r.trials},   {"checks", r.checks}, {"failures", r.failures},
                   {"passed", r.passed()}, {"seconds", r.seconds}, {"notes", r.notes}};
        if (r.counterexample) {
            const auto& ce = *r.counterexample;
            entry["counterexample"] = {{"trial", ce.trial}, {"size", ce.size}, {"input", ce.input}, {"detail", ce.detail}};
            s.err() << "verify: suite " << r.name << " failed " << r.failures << " of " << r.checks
                    << " checks; smallest counterexample (trial " << ce.trial << "): " << ce.detail << '\n'
                    << ce.input.dump() << '\n';
        }
        suites.push_back(std::move(entry));
    }
    s.emit({{"command", "verify"}, {"seed", opts.seed}, {"suites", std::move(suites)}, {"passed", passed}});
    return passed ? exit_ok : exit_verification;
}

Json error_doc(const std::string& kind, const std::string& message) {
    return Json{{"error", kind}, {"message", message}};
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact tree formulas for finite Markov chains", "mctree"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--input", g.input, "Chain file (default: standard input)");
    app.add_option("--format", g.format, "Input format")->check(CLI::IsMember({"matrix", "edges"}));
    app.add_flag("--conductances", g.conductances, "Edge list holds conductances; the chain is their normalisation");
    app.add_flag("--float", g.with_float, "Add 12-digit decimals next to exact values");
    app.add_option("--guard", g.guard, "Largest number of free states an enumeration may range over");
    app.add_option("--seed", g.seed, "Seed for sampling and verify");

    auto* analyze = app.add_subcommand("analyze", "Stationary law, mean first passage times, Kemeny constant");

    std::vector<std::string> targets;
    std::string from;
    auto* hit = app.add_subcommand("hit", "Hitting distribution, mean hitting time and Green row");
    hit->add_option("--targets", targets, "Target set R (labels, comma separated)")->required();
    hit->add_option("--from", from, "Start state (default: every state)");

    auto* green = app.add_subcommand("green", "Green matrix of the chain killed on R");
    green->add_option("--targets", targets, "Target set R (labels, comma separated)")->required();

    std::vector<std::size_t> cayley, prism;
    auto* count = app.add_subcommand("count", "Forest counts and weights");
    auto* cayley_opt = count->add_option("--cayley", cayley, "Forests on n labelled states with k given roots")->expected(2);
    count->add_option("--prism", prism, "Spanning trees of K_n x C_m")->expected(2)->excludes(cayley_opt);

    SampleArgs sa;
    auto* sample = app.add_subcommand("sample", "Draw forests with Wilson's algorithm");
    sample->add_option("--mode", sa.mode)->check(CLI::IsMember({"tree", "forest", "ecrsf"}));
    sample->add_option("--root", sa.root, "Root for --mode tree");
    sample->add_option("--roots", sa.roots, "Root set for forest and ecrsf modes");
    sample->add_option("--alpha", sa.alpha, "Constant cycle-keeping probability for ecrsf mode");
    sample->add_option("--count", sa.count, "Number of samples");
    sample->add_flag("--gof", sa.gof, "Chi-square test against the enumerated law");
    sample->add_option("--order", sa.order, "Site order")->check(CLI::IsMember({"increasing", "decreasing"}));

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run identity suites on seeded random chains");
    std::vector<std::string> suite_choices = suite_names();
    suite_choices.push_back("all");
    verify->add_option("--suite", va.suite)->check(CLI::IsMember(suite_choices));
    verify->add_option("--trials", va.trials, "Random chains per suite");
    verify->add_option("--max-n", va.max_n, "Largest chain size");
    verify->add_option("--samples", va.samples, "Draws per chi-square test");
    verify->add_flag("--inject-fault", va.inject_fault, "Corrupt w(R) to exercise the failure path");

    std::vector<std::string> argv_store{"mctree"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store)
        argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code == 0)
            return exit_ok;
        out << error_doc("usage", e.what()).dump(2) << '\n';
        return exit_parse;
    }

    Session session(g, in, out, err);
    auto fail = [&](int code, const std::string& kind, const std::string& message, Json extra = Json::object()) {
        err << "mctree: " << message << '\n';
        Json doc = error_doc(kind, message);
        doc.update(extra);
        out << doc.dump(2) << '\n';
        return code;
    };
    try {
        if (analyze->parsed())
            return cmd_analyze(session);
        if (hit->parsed())
            return cmd_hit(session, targets, from);
        if (green->parsed())
            return cmd_green(session, targets);
        if (count->parsed())
            return cmd_count(session, cayley, prism);
        if (sample->parsed())
            return cmd_sample(session, sa);
        if (verify->parsed())
            return cmd_verify(session, va);
    } catch (const ReducibleChain& e) {
        return fail(exit_reducible, "reducible", e.what(),
                    {{"certificate", {{"from", session.label(e.from())}, {"to", session.label(e.to())}}}});
    } catch (const InfeasibleRoots& e) {
        return fail(exit_infeasible, "infeasible", e.what());
    } catch (const ParseError& e) {
        return fail(exit_parse, "parse", e.what());
    } catch (const InvalidChain& e) {
        return fail(exit_parse, "invalid_chain", e.what());
    } catch (const GuardExceeded& e) {
        return fail(exit_parse, "guard", e.what());
    } catch (const UsageError& e) {
        return fail(exit_parse, "usage", e.what());
    } catch (const std::invalid_argument& e) {
        return fail(exit_parse, "usage", e.what());
    } catch (const std::out_of_range& e) {
        return fail(exit_parse, "usage", e.what());
    } catch (const std::domain_error& e) {
        return fail(exit_parse, "usage", e.what());
    }
    return exit_parse;
}

} // namespace mctree
