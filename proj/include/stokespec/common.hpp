// Shared error types, tolerances, and small helpers.
#pragma once
#include <stdexcept>
#include <string>

namespace stokespec {

// Rejected user input (CLI maps this to exit code 1).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical computation failed or a computed certificate did not hold
// (CLI maps this to exit code 2).
struct ComputeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A structural pattern the assembly guarantees (inertia, kernel count)
// failed to hold; the message names the offending quantities.
struct StructureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void ensure(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

// Relative tolerances shared across certificates.
inline constexpr double kZeroClassRel = 1e-8;  // eigenvalue sign classification
inline constexpr double kResidualRel = 1e-9;   // eigenpair residual budget
inline constexpr double kOrthoTol = 1e-10;     // basis orthonormality budget

}  // namespace stokespec
