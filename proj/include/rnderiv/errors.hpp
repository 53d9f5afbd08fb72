#pragma once

#include <stdexcept>
#include <string>

namespace rnderiv {

// Error codes shared with the C API (see include/rnderiv.h). Keep values in
// sync with the RN_E* constants there.
enum class ErrorCode : int {
    ok = 0,
    invalid_argument = 1,     // malformed spec, non-canonical set, bad config
    point_not_interior = 2,
    not_a_refinement = 3,
    base_domination = 4,      // some cell has nu(A) > gamma(A)
    non_triadic_endpoint = 5, // exact Cantor mass requested off the triadic grid
    domain = 6,               // psi outside [0,1] and similar
    monotonicity = 7,         // trace audit failure
    iteration_budget = 8,     // Frank-Wolfe could not reach the target gap
    io = 9,
    internal = 10,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

} // namespace rnderiv
