#pragma once

#include <stdexcept>
#include <string>

namespace cubicsieve {

// Input failed an operation's precondition (maps to CLI exit code 1).
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An internal consistency check failed (maps to CLI exit code 2).
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

struct reducible_polynomial_error : validation_error {
    using validation_error::validation_error;
};

// N(I) shares a factor with Disc(f); the congruence machinery does not apply.
struct discriminant_coprimality_error : validation_error {
    using validation_error::validation_error;
};

struct rho_zero_error : validation_error {
    using validation_error::validation_error;
};

struct zero_divisor_error : validation_error {
    using validation_error::validation_error;
};

struct non_exact_division_error : validation_error {
    using validation_error::validation_error;
};

}  // namespace cubicsieve
