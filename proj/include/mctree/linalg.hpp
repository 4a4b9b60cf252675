#pragma once

#include "mctree/chain.hpp"

#include <vector>

namespace mctree {

// Exact linear algebra over the rationals. This is the reference side that
// every forest-sum formula is checked against.

// Fraction-free (Bareiss) elimination after clearing row denominators.
// The empty matrix has determinant 1.
Rational exact_det(const SquareMatrix& m);

// Gauss-Jordan over Q. Throws std::domain_error on a singular matrix.
SquareMatrix exact_inverse(const SquareMatrix& m);
RationalMatrix exact_solve(const SquareMatrix& a, const RationalMatrix& b);

// L(R): rows and columns of L = I - P outside R, in increasing state order.
SquareMatrix reduced_laplacian(const TransitionMatrix& p, const StateSet& removed);

// L(R)^{-1}, indexed by S \ R in increasing order. Throws InfeasibleRoots
// when L(R) is singular.
SquareMatrix green_matrix_solve(const TransitionMatrix& p, const StateSet& roots);

// Solution of pi P = pi, sum pi = 1. Throws ReducibleChain.
std::vector<Rational> stationary_solve(const TransitionMatrix& p);

// First-step analysis for every target: m_ij for i != j, m_jj = 1/pi_j.
RationalMatrix mfpt_solve(const TransitionMatrix& p);

// Z = (I - P + Pi)^{-1}.
SquareMatrix fundamental_matrix(const TransitionMatrix& p);
Rational kemeny_trace(const TransitionMatrix& p);

// (1/N) sum_{n=1..N} P^n in double precision.
Matrix<double> cesaro_average(const TransitionMatrix& p, std::size_t steps);

// exp[-sum_{k=1..K} (tr P^k - 1)/k]. Throws ReducibleChain or PeriodicChain.
double sigma1_series(const TransitionMatrix& p, std::size_t terms);

// Solution of L(R) H = P_{(S\R) x R}: rows S \ R, columns R, both increasing.
RationalMatrix hitting_solve(const TransitionMatrix& p, const StateSet& roots);

// (-1)^(i+j) det L(i;j).
Rational cofactor(const SquareMatrix& m, std::size_t i, std::size_t j);

// Weighted spanning-tree count of a symmetric digraph through the (i, j)
// cofactor of its Laplacian. Throws std::invalid_argument if asymmetric.
Rational undirected_tree_count(const WeightedDigraph& g, std::size_t i = 0, std::size_t j = 0);

struct IdentitySides {
    Rational lhs;
    Rational rhs;
    bool holds() const { return lhs == rhs; }
};

// Throws std::invalid_argument unless l is symmetric with zero row sums.
// cofactor(L, 0, 0) against det(L + J) / n^2.
IdentitySides temperley_check(const SquareMatrix& l);
// cofactor(L, 0, 0) against (1/n) sum_i det L(i).
IdentitySides minor_product_check(const SquareMatrix& l);

// Chebyshev polynomial of the second kind by its three-term recurrence.
double chebyshev_u(std::size_t k, double x);

// K_n box C_m with unit conductances, vertex (a, b) at index a*m + b.
WeightedDigraph prism_graph(std::size_t n, std::size_t m);

// m n^(n-2) U_{m-1}(sqrt((n+4)/4))^(2n-2), rounded after checking the
// residual. Throws std::domain_error for n < 2, m < 3, or when the float
// evaluation cannot certify the integer.
Integer prism_tree_count(std::size_t n, std::size_t m);

struct ClassReport {
    std::vector<std::vector<State>> recurrent; // closed communicating classes
    std::vector<State> transient;
};
ClassReport recurrent_classes(const TransitionMatrix& p);

} // namespace mctree
