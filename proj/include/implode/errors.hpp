#pragma once

#include <stdexcept>
#include <string>

namespace implode {

// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation.
struct domain_error : error {
    using error::error;
};

// Requested value lies outside the reachable range of a monotone map.
struct bracket_error : error {
    double limit;  // the reported infimum / bound
    bracket_error(const std::string& msg, double lim) : error(msg), limit(lim) {}
};

// Coefficient requested within the guard radius of a resonance R in {2,3,4,...}.
struct pole_error : error {
    using error::error;
};

// A formula produced an out-of-contract intermediate (negative discriminant, ...).
struct numerical_error : error {
    using error::error;
};

// Series evaluated outside its estimated disk of convergence.
struct radius_error : error {
    using error::error;
};

// Integration finished without bracketing the requested event.
struct event_missed : error {
    using error::error;
};

// The adaptive step size underflowed (singularity hit by brute integration).
struct step_failure : error {
    using error::error;
};

// Residual scan found no sign change over the shooting bracket.
struct no_sign_change : error {
    using error::error;
};

// Glued profile pieces disagree beyond the seam tolerance.
struct seam_error : error {
    using error::error;
};

// A trajectory point escaped the trapping region it must stay in.
struct region_error : error {
    using error::error;
};

// Parameter outside the interval on which a critical-exponent map is defined.
struct range_error : error {
    using error::error;
};

}  // namespace implode
