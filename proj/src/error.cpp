#include "mctree/error.hpp"

namespace mctree {

ReducibleChain::ReducibleChain(std::size_t from, std::size_t to)
    : std::runtime_error("chain is reducible: state " + std::to_string(to) + " is unreachable from state " +
                         std::to_string(from)),
      from_(from), to_(to) {}

GuardExceeded::GuardExceeded(std::size_t free_vertices, std::size_t guard)
    : std::runtime_error("enumeration over " + std::to_string(free_vertices) +
                         " free states exceeds the guard of " + std::to_string(guard) +
                         " (raise it explicitly with --guard)") {}

PeriodicChain::PeriodicChain(std::size_t period)
    : std::runtime_error("chain is periodic (period " + std::to_string(period) + ")"), period_(period) {}

} // namespace mctree
