#include "mctree/random_chain.hpp"

#include "mctree/support.hpp"

#include <stdexcept>

namespace mctree {

namespace {

unsigned draw_weight(Rng& rng, unsigned max_weight, bool sparse) {
    if (sparse && rng.below(3) == 0)
        return 0;
    return 1 + static_cast<unsigned>(rng.below(max_weight));
}

TransitionMatrix draw_once(Rng& rng, std::size_t n, const RandomChainOptions& opts) {
    RationalMatrix m(n, n);
    for (State i = 0; i < n; ++i) {
        std::vector<unsigned> w(n);
        unsigned total = 0;
        while (total == 0) {
            total = 0;
            for (unsigned& x : w) {
                x = draw_weight(rng, opts.max_weight, opts.sparse);
                total += x;
            }
        }
        for (State j = 0; j < n; ++j) {
            m(i, j) = Rational(w[j], total);
            m(i, j).canonicalize();
        }
    }
    return TransitionMatrix(std::move(m));
}

} // namespace

TransitionMatrix random_chain(Rng& rng, std::size_t n, const RandomChainOptions& opts) {
    if (n == 0)
        throw std::invalid_argument("random_chain needs n >= 1");
    if (opts.max_weight == 0)
        throw std::invalid_argument("max_weight must be positive");
    while (true) {
        TransitionMatrix p = draw_once(rng, n, opts);
        if ((opts.irreducible || opts.aperiodic) && unreachable_pair(p))
            continue;
        if (opts.aperiodic && period(p) != 1)
            continue;
        return p;
    }
}

SquareMatrix random_symmetric_laplacian(Rng& rng, std::size_t n, unsigned max_weight) {
    SquareMatrix l(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const Rational c = draw_weight(rng, max_weight, true);
            l(i, j) = -c;
            l(j, i) = -c;
            l(i, i) += c;
            l(j, j) += c;
        }
    return l;
}

} // namespace mctree
