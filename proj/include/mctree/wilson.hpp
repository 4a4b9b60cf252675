#pragma once

#include "mctree/chain.hpp"
#include "mctree/forest.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace mctree {

// A walk (x_0, ..., x_l).
struct PathTrace {
    std::vector<State> states;

    std::size_t steps() const noexcept { return states.empty() ? 0 : states.size() - 1; }
    bool self_avoiding() const;
    friend bool operator==(const PathTrace&, const PathTrace&) = default;
    friend auto operator<=>(const PathTrace&, const PathTrace&) = default;
};

// Chronological loop erasure. Throws std::invalid_argument on an empty path.
PathTrace loop_erase(const PathTrace& path);

// Generator contract: std::mt19937_64 (its output sequence is fixed by the
// C++ standard), seeded through splitmix64 so that (seed, stream) pairs give
// independent, reproducible streams. Uniform draws are produced by this
// file's own routines, never by std:: distributions, whose algorithms are
// implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next() { return engine_(); }
    // Uniform on [0, bound), bound > 0, without modulo bias.
    std::uint64_t below(std::uint64_t bound);
    // Uniform on [0, 1) with 53 random bits.
    double unit();

  private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

enum class SiteOrder { increasing, decreasing };

struct SamplerConfig {
    std::uint64_t seed = 0;
    std::size_t sample_count = 1;
    std::optional<CycleWeights> alpha; // for cycle-rooted sampling
    SiteOrder order = SiteOrder::increasing;
};

// Exact categorical draws from the rows of a transition matrix: when a
// row's common denominator fits in 63 bits the draw is an exact integer
// comparison, otherwise cumulative doubles are used.
class TransitionSampler {
  public:
    explicit TransitionSampler(const TransitionMatrix& p);
    State step(State from, Rng& rng) const;

  private:
    struct Row {
        std::uint64_t denominator = 0;          // 0 when using doubles
        std::vector<std::uint64_t> cumulative;  // exact thresholds
        std::vector<double> cumulative_double;
        std::vector<State> target;
    };
    std::vector<Row> rows_;
};

// Bernoulli(alpha) with an exact comparison when alpha's denominator fits.
bool coin(const Rational& alpha, Rng& rng);

// One sampler instance owns one generator; samples from it form a
// reproducible stream.
class WilsonSampler {
  public:
    WilsonSampler(const TransitionMatrix& p, std::uint64_t seed, SiteOrder order = SiteOrder::increasing,
                  std::size_t guard = default_guard);

    // Law Pi^P(f) / w(R) over forests with root set R. Throws
    // InfeasibleRoots before walking when some state cannot reach R.
    RootedForest forest(const StateSet& roots);
    RootedForest tree(State root) { return forest(StateSet{root}); }

    // Kassel-Kenyon-Wilson: law Pi^{P,alpha}(f) / w^ec(R). Throws
    // InfeasibleRoots when the total weight is zero.
    Ecrsf cycle_rooted(const CycleWeights& alpha, const StateSet& tree_roots);

    // Order in which unvisited states start walks.
    std::vector<State> site_order(const StateSet& roots) const;

  private:
    void require_forest_feasible(const StateSet& roots);
    void require_ecrsf_feasible(const CycleWeights& alpha, const StateSet& roots);

    TransitionMatrix p_;
    TransitionSampler steps_;
    Rng rng_;
    SiteOrder order_;
    std::size_t guard_;
    std::optional<StateSet> checked_roots_;
};

std::vector<RootedForest> wilson_tree(const TransitionMatrix& p, State root, const SamplerConfig& cfg);
std::vector<RootedForest> wilson_forest(const TransitionMatrix& p, const StateSet& roots, const SamplerConfig& cfg);
std::vector<Ecrsf> kkw_sample(const TransitionMatrix& p, const CycleWeights& alpha, const StateSet& tree_roots,
                              const SamplerConfig& cfg);

// Probability that the loop erasure of the chain from path[0] run until T_R
// is exactly `path`: w(R u {path[0..K-2]}) / w(R) * prod p along the path.
// Throws std::invalid_argument for a path that is not self-avoiding, starts
// in R, or does not end in R; InfeasibleRoots when w(R) == 0.
Rational lerw_path_prob(const TransitionMatrix& p, const StateSet& roots, const PathTrace& path,
                        std::size_t guard = default_guard);

// Every self-avoiding path from `start` into R that stays outside R before
// its last state.
std::vector<PathTrace> self_avoiding_paths(std::size_t n, const StateSet& roots, State start);

} // namespace mctree
