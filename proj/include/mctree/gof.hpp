#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mctree {

// Pearson chi-square goodness of fit. Cells with expected count below
// min_expected are pooled so the chi-square approximation stays sane.
struct GofReport {
    double statistic = 0;
    std::size_t dof = 0;
    double p_value = 1;
    double significance = 0;
    std::size_t cells = 0;        // after pooling
    std::uint64_t total = 0;
    // Observations landed in a cell of probability zero: a certain bug,
    // independent of the statistic.
    bool impossible_observed = false;
    std::size_t impossible_cell = 0;

    bool passed() const { return !impossible_observed && p_value > significance; }
    std::string summary() const;
};

// `expected` must be nonnegative and sum to 1 (to within 1e-9).
GofReport gof_test(const std::vector<std::uint64_t>& observed, const std::vector<double>& expected,
                   double significance, double min_expected = 5.0);

} // namespace mctree
