#pragma once

#include "mctree/chain.hpp"
#include "mctree/random_chain.hpp"

#include <doctest.h>

#include <string>

namespace testing {

using namespace mctree;

inline Rational q(const char* text) { return parse_rational(text); }

// Plain Laplace expansion along the first row; an oracle with nothing in
// common with fraction-free elimination.
inline Rational laplace_det(const SquareMatrix& m) {
    const std::size_t n = m.rows();
    if (n == 0)
        return 1;
    Rational total = 0;
    std::vector<std::size_t> rows;
    for (std::size_t i = 1; i < n; ++i)
        rows.push_back(i);
    for (std::size_t j = 0; j < n; ++j) {
        if (sgn(m(0, j)) == 0)
            continue;
        std::vector<std::size_t> cols;
        for (std::size_t c = 0; c < n; ++c)
            if (c != j)
                cols.push_back(c);
        const Rational minor = laplace_det(m.submatrix(rows, cols));
        total += (j % 2 == 0 ? 1 : -1) * m(0, j) * minor;
    }
    return total;
}

inline std::vector<TransitionMatrix> corpus(std::uint64_t seed, std::size_t count, std::size_t min_n, std::size_t max_n,
                                            RandomChainOptions opts = {}) {
    std::vector<TransitionMatrix> out;
    Rng rng(seed, 77);
    for (std::size_t t = 0; t < count; ++t)
        out.push_back(random_chain(rng, min_n + t % (max_n - min_n + 1), opts));
    return out;
}

} // namespace testing

namespace doctest {
template <> struct StringMaker<mctree::Rational> {
    static String convert(const mctree::Rational& x) { return mctree::to_string(x).c_str(); }
};
} // namespace doctest
