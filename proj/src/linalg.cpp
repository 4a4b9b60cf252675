#include "mctree/linalg.hpp"

#include "mctree/error.hpp"
#include "mctree/support.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mctree {

Rational exact_det(const SquareMatrix& m) {
    if (!m.square())
        throw std::invalid_argument("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0)
        return 1;

    // Scale each row to integers; det(m) = det(a) / prod(scale).
    Matrix<Integer> a(n, n);
    Integer scale_product = 1;
    for (std::size_t i = 0; i < n; ++i) {
        Integer lcm = 1;
        for (std::size_t j = 0; j < n; ++j)
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), m(i, j).get_den_mpz_t());
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = m(i, j).get_num() * (lcm / m(i, j).get_den());
        scale_product *= lcm;
    }

    int sign = 1;
    Integer prev_pivot = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t swap = k + 1;
            while (swap < n && a(swap, k) == 0)
                ++swap;
            if (swap == n)
                return 0;
            for (std::size_t j = k; j < n; ++j)
                std::swap(a(k, j), a(swap, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev_pivot.get_mpz_t());
            }
            a(i, k) = 0;
        }
        prev_pivot = a(k, k);
    }
    Rational det(a(n - 1, n - 1) * sign, scale_product);
    det.canonicalize();
    return det;
}

RationalMatrix exact_solve(const SquareMatrix& a, const RationalMatrix& b) {
    if (!a.square() || a.rows() != b.rows())
        throw std::invalid_argument("exact_solve shape mismatch");
    const std::size_t n = a.rows(), m = b.cols();
    SquareMatrix lhs = a;
    RationalMatrix rhs = b;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && sgn(lhs(pivot, col)) == 0)
            ++pivot;
        if (pivot == n)
            throw std::domain_error("singular matrix");
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(lhs(col, j), lhs(pivot, j));
            for (std::size_t j = 0; j < m; ++j)
                std::swap(rhs(col, j), rhs(pivot, j));
        }
        const Rational inv = 1 / lhs(col, col);
        for (std::size_t j = 0; j < n; ++j)
            lhs(col, j) *= inv;
        for (std::size_t j = 0; j < m; ++j)
            rhs(col, j) *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || sgn(lhs(i, col)) == 0)
                continue;
            const Rational f = lhs(i, col);
            for (std::size_t j = 0; j < n; ++j)
                lhs(i, j) -= f * lhs(col, j);
            for (std::size_t j = 0; j < m; ++j)
                rhs(i, j) -= f * rhs(col, j);
        }
    }
    return rhs;
}

SquareMatrix exact_inverse(const SquareMatrix& m) { return exact_solve(m, SquareMatrix::identity(m.rows())); }

SquareMatrix reduced_laplacian(const TransitionMatrix& p, const StateSet& removed) {
    const auto keep = removed.complement(p.size());
    return laplacian(p).submatrix(keep, keep);
}

SquareMatrix green_matrix_solve(const TransitionMatrix& p, const StateSet& roots) {
    try {
        return exact_inverse(reduced_laplacian(p, roots));
    } catch (const std::domain_error&) {
        throw InfeasibleRoots("L(R) is singular for R = " + to_string(roots));
    }
}

std::vector<Rational> stationary_solve(const TransitionMatrix& p) {
    require_irreducible(p);
    // pi L(1, last) = e_last, transposed.
    const std::size_t n = p.size();
    SquareMatrix l = laplacian(p);
    SquareMatrix at(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            at(j, i) = (j == n - 1) ? Rational(1) : l(i, j);
    RationalMatrix rhs(n, 1);
    rhs(n - 1, 0) = 1;
    RationalMatrix x = exact_solve(at, rhs);
    std::vector<Rational> pi(n);
    for (std::size_t i = 0; i < n; ++i)
        pi[i] = x(i, 0);
    return pi;
}

RationalMatrix mfpt_solve(const TransitionMatrix& p) {
    require_irreducible(p);
    const std::size_t n = p.size();
    const std::vector<Rational> pi = stationary_solve(p);
    RationalMatrix m(n, n);
    for (State j = 0; j < n; ++j) {
        m(j, j) = 1 / pi[j];
        if (n == 1)
            continue;
        const auto others = StateSet{j}.complement(n);
        RationalMatrix ones(n - 1, 1, Rational(1));
        RationalMatrix x = exact_solve(reduced_laplacian(p, StateSet{j}), ones);
        for (std::size_t a = 0; a < others.size(); ++a)
            m(others[a], j) = x(a, 0);
    }
    return m;
}

SquareMatrix fundamental_matrix(const TransitionMatrix& p) {
    const std::vector<Rational> pi = stationary_solve(p);
    const std::size_t n = p.size();
    SquareMatrix a = laplacian(p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) += pi[j];
    return exact_inverse(a);
}

Rational kemeny_trace(const TransitionMatrix& p) { return fundamental_matrix(p).trace(); }

namespace {

Matrix<double> to_double_matrix(const TransitionMatrix& p) {
    Matrix<double> d(p.size(), p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j)
            d(i, j) = to_double(p(i, j));
    return d;
}

} // namespace

Matrix<double> cesaro_average(const TransitionMatrix& p, std::size_t steps) {
    if (steps == 0)
        throw std::invalid_argument("cesaro_average needs at least one step");
    const Matrix<double> pd = to_double_matrix(p);
    Matrix<double> power = pd;
    Matrix<double> sum = pd;
    for (std::size_t k = 2; k <= steps; ++k) {
        power = power * pd;
        sum = sum + power;
    }
    const double inv = 1.0 / static_cast<double>(steps);
    for (std::size_t i = 0; i < sum.rows(); ++i)
        for (double& x : sum.row(i))
            x *= inv;
    return sum;
}

double sigma1_series(const TransitionMatrix& p, std::size_t terms) {
    if (const std::size_t d = period(p); d != 1)
        throw PeriodicChain(d);
    const Matrix<double> pd = to_double_matrix(p);
    Matrix<double> power = Matrix<double>::identity(p.size());
    double exponent = 0;
    for (std::size_t k = 1; k <= terms; ++k) {
        power = power * pd;
        exponent += (power.trace() - 1.0) / static_cast<double>(k);
    }
    return std::exp(-exponent);
}

RationalMatrix hitting_solve(const TransitionMatrix& p, const StateSet& roots) {
    const auto free = roots.complement(p.size());
    const RationalMatrix rhs = p.entries().submatrix(free, roots.states());
    try {
        return exact_solve(reduced_laplacian(p, roots), rhs);
    } catch (const std::domain_error&) {
        throw InfeasibleRoots("L(R) is singular for R = " + to_string(roots));
    }
}

Rational cofactor(const SquareMatrix& m, std::size_t i, std::size_t j) {
    const StateSet row{i}, col{j};
    const auto rows = row.complement(m.rows());
    const auto cols = col.complement(m.cols());
    Rational d = exact_det(m.submatrix(rows, cols));
    return (i + j) % 2 == 0 ? d : Rational(-d);
}

Rational undirected_tree_count(const WeightedDigraph& g, std::size_t i, std::size_t j) {
    if (!g.symmetric())
        throw std::invalid_argument("undirected_tree_count needs c(i,j) == c(j,i)");
    return cofactor(weighted_laplacian(g), i, j);
}

namespace {

void require_symmetric_laplacian(const SquareMatrix& l) {
    if (!l.square() || l.rows() == 0)
        throw std::invalid_argument("Laplacian must be square and nonempty");
    for (std::size_t i = 0; i < l.rows(); ++i) {
        Rational sum = 0;
        for (std::size_t j = 0; j < l.cols(); ++j) {
            if (l(i, j) != l(j, i))
                throw std::invalid_argument("Laplacian is not symmetric");
            sum += l(i, j);
        }
        if (sum != 0)
            throw std::invalid_argument("Laplacian row " + std::to_string(i) + " does not sum to zero");
    }
}

} // namespace

IdentitySides temperley_check(const SquareMatrix& l) {
    require_symmetric_laplacian(l);
    const std::size_t n = l.rows();
    SquareMatrix shifted = l;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            shifted(i, j) += 1;
    return {cofactor(l, 0, 0), exact_det(shifted) / Rational(static_cast<unsigned long>(n * n))};
}

IdentitySides minor_product_check(const SquareMatrix& l) {
    require_symmetric_laplacian(l);
    const std::size_t n = l.rows();
    Rational sum = 0;
    for (std::size_t i = 0; i < n; ++i)
        sum += cofactor(l, i, i);
    return {cofactor(l, 0, 0), sum / Rational(static_cast<unsigned long>(n))};
}

double chebyshev_u(std::size_t k, double x) {
    double prev = 1.0;      // U_0
    double cur = 2.0 * x;   // U_1
    if (k == 0)
        return prev;
    for (std::size_t t = 1; t < k; ++t) {
        const double next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

WeightedDigraph prism_graph(std::size_t n, std::size_t m) {
    if (n < 1 || m < 3)
        throw std::domain_error("prism needs n >= 1 and m >= 3");
    std::vector<Arc> arcs;
    auto id = [m](std::size_t a, std::size_t b) { return a * m + b; };
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            for (std::size_t a2 = 0; a2 < n; ++a2)
                if (a2 != a)
                    arcs.push_back({id(a, b), id(a2, b), Rational(1)});
            arcs.push_back({id(a, b), id(a, (b + 1) % m), Rational(1)});
            arcs.push_back({id(a, b), id(a, (b + m - 1) % m), Rational(1)});
        }
    return WeightedDigraph(n * m, std::move(arcs));
}

Integer prism_tree_count(std::size_t n, std::size_t m) {
    if (n < 2 || m < 3)
        throw std::domain_error("prism_tree_count needs n >= 2 and m >= 3");
    const double nd = static_cast<double>(n);
    const double u = chebyshev_u(m - 1, std::sqrt((nd + 4.0) / 4.0));
    const double value = static_cast<double>(m) * std::pow(nd, nd - 2.0) * std::pow(u, 2.0 * nd - 2.0);
    if (!std::isfinite(value) || value > 9007199254740992.0)
        throw std::domain_error("prism count exceeds exact double range");
    const double nearest = std::nearbyint(value);
    if (std::abs(value - nearest) >= 1e-6 * std::max(1.0, value))
        throw std::domain_error("prism count residual too large");
    Integer out;
    mpz_set_d(out.get_mpz_t(), nearest);
    return out;
}

ClassReport recurrent_classes(const TransitionMatrix& p) {
    ClassReport report;
    const auto adj = support_adjacency(p);
    for (auto& component : strongly_connected_components(p)) {
        StateSet members(component);
        bool closed = true;
        for (State v : component)
            for (State w : adj[v])
                if (!members.contains(w))
                    closed = false;
        if (closed)
            report.recurrent.push_back(std::move(component));
        else
            report.transient.insert(report.transient.end(), component.begin(), component.end());
    }
    std::sort(report.transient.begin(), report.transient.end());
    return report;
}

} // namespace mctree
