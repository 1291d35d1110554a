#pragma once

#include <stdexcept>
#include <string>

namespace dioman {

// Error taxonomy. The CLI maps categories to exit codes:
//   config/input problems -> 1, theorem-hypothesis violations -> 2,
//   internal certification failures (bug class) -> 3.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input outside the declared domain (point not in U, bad spec string, ...).
struct DomainError : Error {
    using Error::Error;
};

// A precondition of the underlying theorem fails (e.g. inf Q psi(Q) = 0).
struct HypothesisViolated : Error {
    using Error::Error;
};

// A search ran out of budget. For admissible-Q style searches this is a
// reportable outcome; for solve_system it signals a bug (existence is
// guaranteed by Minkowski's theorem on valid input).
struct Exhausted : Error {
    using Error::Error;
};
struct SearchExhausted : Error {
    using Error::Error;
};

// Direct re-verification of a returned solution failed. Always a bug.
struct CertificationFailed : Error {
    using Error::Error;
};

// No closed-form asymptotics available (tabulated psi in jarnik_classify).
struct Unclassifiable : Error {
    using Error::Error;
};

// Fewer than the minimum number of usable bands for a slope fit.
struct InsufficientData : Error {
    using Error::Error;
};

// A table violates the monotonicity requirement.
struct MonotonicityError : Error {
    using Error::Error;
};

}  // namespace dioman
