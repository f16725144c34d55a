#pragma once

#include <stdexcept>
#include <string>

namespace majorana {

// Failure classes surfaced by the library. Each maps to one named
// precondition or runtime condition; CLI exit codes are derived from these.
enum class errc {
    degenerate_exponent,      // a = -2: no scaling exponent exists
    non_positive_scale,       // probe scale alpha <= 0
    domain_violation,         // probe point (or its scaled image) leaves the residual domain
    indeterminate_ratio,      // residual vanishes at every probe point
    no_invariant_exponent,    // defect minimum above threshold on the search interval
    out_of_gauge_domain,      // t outside the gauge validity interval / z out of power domain
    degenerate_gauge,         // zdot = 0 where the reduction needs zdot != 0
    inconsistent_derivatives, // supplied gauge derivatives fail the finite-difference check
    singular_denominator,     // a reduction denominator within eps_sing of zero
    step_underflow,           // adaptive step fell below h_min
    max_steps_exceeded,
    singularity_stop,         // integration stopped on the singular set (thrown only where fatal)
    root_not_found,           // implicit stage solve: no bracket after expansion
    domain_exit,              // direct integration left the equation domain
    non_monotone_x,
    bracket_lost,             // shooting endpoints classify identically
    range_not_covered,        // curve comparison range not covered by both curves
    singular_expansion_point, // P(t0, w0) ~ 0 in a series solve
    overflow_detected,        // series coefficient above overflow guard
    bad_input,                // malformed arguments / descriptor validation
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

} // namespace majorana
