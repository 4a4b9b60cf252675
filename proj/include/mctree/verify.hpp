#pragma once

#include "mctree/chain.hpp"
#include "mctree/forest.hpp"
#include "mctree/wilson.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mctree {

struct VerifyOptions {
    std::uint64_t seed = 1;
    std::optional<std::size_t> trials; // per-suite default when unset
    std::optional<std::size_t> max_n;  // per-suite default when unset
    std::size_t samples = 100000;      // draws per chi-square test
    double significance = 1e-3;
    std::size_t guard = default_guard;
    bool inject_fault = false;          // corrupts w(R) in the kirchhoff suite
};

// The failing input as a document: a chain in matrix form, or whatever the
// suite generates (a Laplacian, a Cayley size pair).
struct Counterexample {
    std::size_t trial;
    std::size_t size;
    nlohmann::json input;
    std::string detail;
};

struct SuiteReport {
    std::string name;
    std::size_t trials = 0;
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::vector<std::string> notes;
    std::optional<Counterexample> counterexample; // smallest failing chain
    double seconds = 0;

    bool passed() const { return failures == 0; }
};

// Suites run by "all", in order.
const std::vector<std::string>& suite_names();

// Generator for one trial of a suite; the corpus a suite sees at a given seed.
Rng trial_rng(const std::string& suite, std::uint64_t seed, std::size_t trial);

// Throws std::invalid_argument for an unknown suite name.
SuiteReport run_suite(const std::string& name, const VerifyOptions& opts);

} // namespace mctree
