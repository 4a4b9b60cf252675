#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mctree {

class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A chain that violates a stochastic-matrix or digraph invariant.
class InvalidChain : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Raised by operations that need an irreducible chain. The certificate is a
// pair (from, to) such that `to` cannot be reached from `from`.
class ReducibleChain : public std::runtime_error {
  public:
    ReducibleChain(std::size_t from, std::size_t to);

    std::size_t from() const noexcept { return from_; }
    std::size_t to() const noexcept { return to_; }

  private:
    std::size_t from_;
    std::size_t to_;
};

// w(R) == 0: some state outside R has no positive-probability path into R.
class InfeasibleRoots : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class GuardExceeded : public std::runtime_error {
  public:
    GuardExceeded(std::size_t free_vertices, std::size_t guard);
};

class PeriodicChain : public std::runtime_error {
  public:
    explicit PeriodicChain(std::size_t period);
    std::size_t period() const noexcept { return period_; }

  private:
    std::size_t period_;
};

} // namespace mctree
