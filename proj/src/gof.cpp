#include "mctree/gof.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace mctree {

std::string GofReport::summary() const {
    char buf[256];
    if (impossible_observed)
        std::snprintf(buf, sizeof buf, "observation in zero-probability cell %zu", impossible_cell);
    else
        std::snprintf(buf, sizeof buf, "chi2=%.4f dof=%zu p=%.4g (threshold %.0e) %s", statistic, dof, p_value,
                      significance, passed() ? "pass" : "fail");
    return buf;
}

GofReport gof_test(const std::vector<std::uint64_t>& observed, const std::vector<double>& expected,
                   double significance, double min_expected) {
    if (observed.size() != expected.size())
        throw std::invalid_argument("observed and expected tables differ in size");
    if (observed.empty())
        throw std::invalid_argument("empty table");
    double mass = 0;
    for (double e : expected) {
        if (!(e >= 0))
            throw std::invalid_argument("negative expected probability");
        mass += e;
    }
    if (std::abs(mass - 1) > 1e-9)
        throw std::invalid_argument("expected probabilities do not sum to 1");

    GofReport r;
    r.significance = significance;
    r.total = std::accumulate(observed.begin(), observed.end(), std::uint64_t{0});
    if (r.total == 0)
        throw std::invalid_argument("no observations");

    struct Cell {
        double expected;
        double observed;
    };
    std::vector<Cell> cells;
    Cell pool{0, 0};
    for (std::size_t k = 0; k < observed.size(); ++k) {
        if (expected[k] == 0) {
            if (observed[k] != 0 && !r.impossible_observed) {
                r.impossible_observed = true;
                r.impossible_cell = k;
            }
            continue;
        }
        const Cell c{expected[k] * static_cast<double>(r.total), static_cast<double>(observed[k])};
        if (c.expected < min_expected) {
            pool.expected += c.expected;
            pool.observed += c.observed;
        } else {
            cells.push_back(c);
        }
    }
    if (pool.expected > 0) {
        if (pool.expected >= min_expected || cells.empty()) {
            cells.push_back(pool);
        } else {
            auto smallest = std::min_element(cells.begin(), cells.end(),
                                             [](const Cell& a, const Cell& b) { return a.expected < b.expected; });
            smallest->expected += pool.expected;
            smallest->observed += pool.observed;
        }
    }
    r.cells = cells.size();
    if (cells.size() <= 1) {
        r.dof = 0;
        r.p_value = 1;
        return r;
    }
    for (const Cell& c : cells) {
        const double d = c.observed - c.expected;
        r.statistic += d * d / c.expected;
    }
    r.dof = cells.size() - 1;
    r.p_value = boost::math::gamma_q(static_cast<double>(r.dof) / 2, r.statistic / 2);
    return r;
}

} // namespace mctree
