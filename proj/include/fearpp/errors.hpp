#ifndef FEARPP_ERRORS_HPP
#define FEARPP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fearpp {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation at a point where a closed form is singular (u=0 or v=0 for the
// fractional-power Jacobian/Taylor expressions, u=0 for the reduced prey
// nullcline). Never clamped, always a hard error.
struct SingularityError : Error {
    using Error::Error;
};

// Vector-field evaluation produced a non-finite value (overflow).
struct EvaluationError : Error {
    using Error::Error;
};

// Step size underflowed before any event fired; carries the last good state.
struct StiffnessError : Error {
    double t, u, v;
    StiffnessError(const std::string& msg, double t_, double u_, double v_)
        : Error(msg), t(t_), u(u_), v(v_) {}
};

// Requested Hopf quantity at a point that is not a Hopf candidate.
struct NotAHopfError : Error {
    using Error::Error;
};

// Fewer than 3 separatrix points could be constructed.
struct NoSeparatrixError : Error {
    using Error::Error;
};

// Homoclinic indicator has the same sign at both interval endpoints.
struct NoBracketError : Error {
    using Error::Error;
};

struct UsageError : Error {
    using Error::Error;
};

} // namespace fearpp

#endif
