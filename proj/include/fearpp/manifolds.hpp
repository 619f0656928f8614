// Invariant sets of the non-smooth origin. Backward-time integration is not
// available (solutions are non-unique in backward time at the origin), so the
// stable set is located by forward shooting: bisection on the classified
// outcome of probe trajectories. The unstable set is the forward orbit of a
// seed displaced from the origin along the prey axis, where the flow exits.

#ifndef FEARPP_MANIFOLDS_HPP
#define FEARPP_MANIFOLDS_HPP

#include <optional>
#include <string>
#include <vector>

#include "fearpp/bifurcation.hpp"
#include "fearpp/dynamics.hpp"
#include "fearpp/model.hpp"

namespace fearpp {

struct ProbeConfig {
    IntegratorConfig integrator{}; // probe horizon = integrator.t_end
    double state_tol = 1e-6;       // bisection tolerance in state space
    int scan_lines = 64;
    int horizon_doublings = 1; // Undecided probes retry with doubled horizon
    ProbeConfig() {
        integrator.rel_tol = 1e-9;
        integrator.abs_tol = 1e-12;
    }
};

// Which dichotomy the probe bisection separates.
//  - BasinBoundary: Coexistence/Cycle vs Extinction. Needs an attractor.
//  - FirstPass: orbits that escape right toward the prey axis before any
//    extinction vs orbits that crash directly into the predator axis. Defined
//    even when every orbit eventually goes extinct (unstable coexistence),
//    which is how the stable set of the origin is still measurable there.
enum class ProbeMode { BasinBoundary, FirstPass };

struct Separatrix {
    struct Point {
        double u, v;
        double probe_offset; // final bisection width at this scan line
    };
    std::vector<Point> polyline; // ordered by u
    ProbeMode mode = ProbeMode::BasinBoundary;
    int lines_scanned = 0;
    int lines_uniform = 0; // lines with no dichotomy (contributed no point)
};

// Boundary of the coexistence basin over vertical scan lines spanning
// u_range (default (0, 1.2 a/b]). Throws NoSeparatrixError when fewer than 3
// boundary points exist (e.g. past the fold, where nothing attracts).
Separatrix separatrix(const ModelParams& P, const ProbeConfig& cfg = {},
                      std::optional<Interval> u_range = std::nullopt,
                      ProbeMode mode = ProbeMode::BasinBoundary);

// Forward orbit of the seed (delta, delta^2) near the origin; delta defaults
// to 1e-5 a/b. The exit direction hugs the prey axis since prey growth
// dominates there; the origin has no eigen-directions to use instead.
Trajectory unstable_set(const ModelParams& P, const IntegratorConfig& cfg,
                        std::optional<double> delta = std::nullopt);

// Measurement backing the homoclinic indicator and the manifold-ordering
// checks: on the reference line u = u*_2 (abscissa of the largest-u
// coexistence equilibrium),
//   sigma = v of the unstable set's first leftward crossing
//         - v of the stable set (separatrix) on that line.
// sigma > 0 means the stable set lies below the unstable set.
struct ManifoldOffset {
    double sigma;
    double u_ref;
    double v_unstable;
    double v_stable;
    ProbeMode mode_used;
};
ManifoldOffset manifold_offset(const ModelParams& P, const ProbeConfig& cfg = {});

struct HomoclinicBracket {
    std::string param_name;
    double lo, hi;
    std::string evidence; // sigma values and orientation at the endpoints
};

// Bisects the sign change of sigma in [lo, hi] to the requested depth.
// Throws NoBracketError when sigma has the same sign at both endpoints.
HomoclinicBracket homoclinic_bracket(const ModelParams& P, const std::string& param_name,
                                     double lo, double hi, int depth,
                                     const ProbeConfig& cfg = {});

} // namespace fearpp

#endif
