// Closed forms of the fear / herd-behavior / mutual-interference predator-prey
// model with optional predator harvesting:
//
//   du/dt = a u/(1+k v) - b u^2 - c u^p v^m
//   dv/dt = -d v - q v^r + e u^p v^m
//
// q = 0 recovers the non-harvested model exactly. Everything in this header is
// a pure function of its inputs.

#ifndef FEARPP_MODEL_HPP
#define FEARPP_MODEL_HPP

#include <string>

#include "fearpp/errors.hpp"

namespace fearpp {

struct ModelParams {
    double a = 1.0; // prey birth rate
    double b = 1.0; // prey intraspecific competition
    double c = 1.0; // predation rate
    double d = 1.0; // predator death rate
    double e = 1.0; // biomass conversion efficiency
    double k = 0.0; // strength of fear, >= 0
    double m = 0.5; // mutual interference exponent, (0,1]
    double p = 0.5; // herd exponent, (0,1]
    double q = 0.0; // harvesting effort, >= 0
    double r = 1.0; // harvesting exponent, (0,1]

    // Throws UsageError when a,b,c,d,e <= 0, k or q < 0, or an exponent
    // lies outside (0,1].
    void validate() const;

    double carrying_capacity() const { return a / b; } // u-axis equilibrium

    double get(const std::string& name) const;
    void set(const std::string& name, double value);
};

struct State {
    double u = 0.0; // prey density, >= 0
    double v = 0.0; // predator density, >= 0
};

struct Jacobian2 {
    double j11 = 0, j12 = 0, j21 = 0, j22 = 0;
    double trace() const { return j11 + j22; }
    double det() const { return j11 * j22 - j12 * j21; }
    // discriminant of eta^2 - tr*eta + det
    double discriminant() const { return trace() * trace() - 4.0 * det(); }
};

// Third-order Taylor coefficients of the model translated so a coexistence
// equilibrium sits at the origin: xdot = sum a_ij x^i y^j, ydot = sum b_ij.
// First-order entries coincide with the Jacobian.
struct TaylorCoeffs {
    double a10, a01, a20, a11, a02, a30, a21, a12, a03;
    double b10, b01, b20, b11, b02, b30, b21, b12, b03;
};

// x^y for x >= 0 with 0^y defined as 0 for every y > 0. Platform pow is not
// trusted for 0 raised to fractional powers.
double pow_pos(double x, double y);

// 1/(1+kv): equals 1 at k=0 or v=0, strictly decreasing in each argument.
double fear_factor(double k, double v);

// Right-hand side (du/dt, dv/dt). At u=0 the prey component is exactly zero,
// at v=0 the predator component is exactly zero. Throws EvaluationError on a
// non-finite result.
struct Deriv {
    double du, dv;
};
Deriv vector_field(const ModelParams& P, const State& s);

// Two evaluation modes of the Jacobian:
//  - General: valid at any interior point, used along trajectories.
//  - CoexistenceSimplified: substitutes the nullcline identities
//    (j11 = -u[b - c(1-p)u^{p-2}v^m], j22 = -d(1-m) - q(r-m)v^{r-1});
//    only meaningful on points solving both nullcline equations.
// Requires u>0 and v>0; otherwise throws SingularityError.
enum class JacobianMode { General, CoexistenceSimplified };
Jacobian2 jacobian(const ModelParams& P, const State& s,
                   JacobianMode mode = JacobianMode::General);

// All eighteen Taylor coefficients of the translated system at a coexistence
// equilibrium. The caller supplies params with k already at the value of
// interest; no re-solve happens here. Requires q = 0 (UsageError otherwise)
// and u>0, v>0 (SingularityError).
TaylorCoeffs taylor_coeffs(const ModelParams& P, const State& eq);

// Same expansion extended by the exact derivatives of the -q v^r harvesting
// term (affects b01, b02, b03 only). Used by the normal-form Lyapunov route,
// which must work on harvested Hopf points as well.
TaylorCoeffs taylor_coeffs_harvested(const ModelParams& P, const State& eq);

// Partial derivative of the right-hand side with respect to one scalar
// parameter, holding the state fixed. Used by Sotomayor checks and
// transversality diagnostics.
Deriv param_derivative(const ModelParams& P, const State& s, const std::string& name);

} // namespace fearpp

#endif
