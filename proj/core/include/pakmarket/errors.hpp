#pragma once

#include <stdexcept>
#include <string>

namespace pakmarket {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input: unknown variety, package outside the ground set, ...
struct DomainError : Error {
    using Error::Error;
};

/// A desk-scale enumeration guard was exceeded.
struct ResourceError : Error {
    using Error::Error;
};

/// An assignment-total vector does not correspond to any partition.
struct ConsistencyError : Error {
    using Error::Error;
};

/// Instance failed load-time validation (graph clauses, cost monotonicity, ...).
struct ValidationError : Error {
    using Error::Error;
};

/// Operation not defined for this seller model.
struct UnsupportedError : Error {
    using Error::Error;
};

/// An iterative procedure exceeded its termination bound.
struct AlgorithmError : Error {
    using Error::Error;
};

/// Reads the integer enumeration guard (total units) from PAKMARKET_GUARD,
/// falling back to the default of 12.
int unit_guard();

/// Node budget for the equilibrium price search; PAKMARKET_GUARD scales it
/// (guard * 1'000'000 nodes), default 12'000'000.
long long price_search_guard();

} // namespace pakmarket
