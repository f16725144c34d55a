#include "majorana/error.hpp"

namespace majorana {

const char* errc_name(errc code) {
    switch (code) {
        case errc::degenerate_exponent: return "DegenerateExponent";
        case errc::non_positive_scale: return "NonPositiveScale";
        case errc::domain_violation: return "DomainViolation";
        case errc::indeterminate_ratio: return "IndeterminateRatio";
        case errc::no_invariant_exponent: return "NoInvariantExponent";
        case errc::out_of_gauge_domain: return "OutOfGaugeDomain";
        case errc::degenerate_gauge: return "DegenerateGauge";
        case errc::inconsistent_derivatives: return "InconsistentDerivatives";
        case errc::singular_denominator: return "SingularDenominator";
        case errc::step_underflow: return "StepUnderflow";
        case errc::max_steps_exceeded: return "MaxStepsExceeded";
        case errc::singularity_stop: return "SingularityStop";
        case errc::root_not_found: return "RootNotFound";
        case errc::domain_exit: return "DomainExit";
        case errc::non_monotone_x: return "NonMonotoneX";
        case errc::bracket_lost: return "BracketLost";
        case errc::range_not_covered: return "RangeNotCovered";
        case errc::singular_expansion_point: return "SingularExpansionPoint";
        case errc::overflow_detected: return "OverflowDetected";
        case errc::bad_input: return "BadInput";
    }
    return "UnknownError";
}

} // namespace majorana
