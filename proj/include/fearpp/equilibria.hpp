// Equilibrium location and classification. Coexistence equilibria are the
// interior intersections of the prey nullcline
//     g1(u,v) = a/(1+kv) - b u - c u^{p-1} v^m = 0
// with the predator nullcline
//     g2(u,v) = -d - q v^{r-1} + e u^p v^{m-1} = 0.
// For q = 0 the predator nullcline has the closed form v = ((e/d)u^p)^{1/(1-m)}
// and the problem reduces to a scalar root scan; for q > 0 a damped 2-D Newton
// continues the q = 0 solutions in q.

#ifndef FEARPP_EQUILIBRIA_HPP
#define FEARPP_EQUILIBRIA_HPP

#include <optional>
#include <string>
#include <vector>

#include "fearpp/model.hpp"

namespace fearpp {

enum class EquilibriumKind { Trivial, Axial, Coexistence };

enum class Classification {
    StableNode,
    StableFocus,
    UnstableNode,
    UnstableFocus,
    Saddle,
    NonSmooth,       // trivial/axial points: linearization is singular
    CenterCandidate, // |trace| below hopf candidate tolerance, det > 0
};

struct Equilibrium {
    State location{};
    EquilibriumKind kind = EquilibriumKind::Coexistence;
    std::optional<Jacobian2> jac; // absent for Trivial/Axial
    Classification classification = Classification::NonSmooth;
    bool fold_degenerate = false; // double root reported at a fold tangency
};

struct CoexistenceScan {
    std::vector<Equilibrium> equilibria; // sorted by u
    std::optional<std::string> warning;  // set when a root may have been missed
};

// |trace| threshold below which a coexistence point is flagged CenterCandidate.
inline constexpr double kHopfCandidateTol = 1e-7;

// Closed-form predator nullcline ((e/d) u^p)^{1/(1-m)}; zero at u = 0.
// Requires m < 1 and q = 0.
double predator_nullcline_v(const ModelParams& P, double u);

// Prey nullcline evaluated along the predator nullcline,
// g1(u, predator_nullcline_v(u)); its positive roots on (0, a/b) are the
// coexistence equilibria. Requires u > 0 (u^{p-1} is unbounded at 0).
double coexistence_residual(const ModelParams& P, double u);

// Root scan for all coexistence equilibria. q = 0: geometric grid over
// (1e-6 a/b, a/b), sign brackets refined by bisection + Newton polish to
// |residual| < 1e-12. q > 0: 2-D Newton continuation from the q = 0 set.
CoexistenceScan find_coexistence(const ModelParams& P, int grid_points = 4096);

// The 2-D Newton route on (g1, g2), available at any q; for q = 0 it must
// agree with the scan route. Returned sorted by u.
std::vector<Equilibrium> find_coexistence_newton(const ModelParams& P);

// Polishes a nearby guess onto the nullcline intersection with damped Newton;
// nullopt when the iteration leaves the quadrant or stalls. Used for branch
// following during parameter continuation.
std::optional<State> refine_coexistence(const ModelParams& P, const State& guess);

// Routh-Hurwitz classification from the coexistence-simplified Jacobian.
Classification classify(const ModelParams& P, const State& eq);

Equilibrium trivial_equilibrium();
Equilibrium axial_equilibrium(const ModelParams& P);

// E0, E1 and every coexistence equilibrium.
std::vector<Equilibrium> find_all(const ModelParams& P);

const char* to_string(Classification c);
const char* to_string(EquilibriumKind k);

} // namespace fearpp

#endif
