// Detection and classification of saddle-node, Hopf, and generalized Hopf
// bifurcations of the coexistence equilibrium, in one and two parameters.
//
// Hopf points are located by continuing the equilibrium branch in the chosen
// parameter and root-finding S(param) = trace(J) = 0; the closed-form critical
// value of the parameter is checked afterwards as a residual, never used as a
// fixed-point iteration (it depends implicitly on the equilibrium).
//
// Two first-Lyapunov routes are provided. `first_lyapunov` evaluates the
// classical planar Liapunov-number expression in the Taylor coefficients, as
// commonly quoted in the literature. `first_lyapunov_normal_form` computes the
// coefficient through the complex Poincare normal form. The two agree on most
// inputs but the quoted expression provably mislabels criticality on some
// systems (direct long-horizon simulation arbitrates; see the bifurcation
// tests), so criticality decisions use the normal-form route.

#ifndef FEARPP_BIFURCATION_HPP
#define FEARPP_BIFURCATION_HPP

#include <optional>
#include <string>
#include <vector>

#include "fearpp/equilibria.hpp"
#include "fearpp/model.hpp"

namespace fearpp {

struct Interval {
    double lo, hi;
};

enum class Criticality { Supercritical, Subcritical, Undetermined };

enum class BifurcationKind { SaddleNode, Hopf, GeneralizedHopf };

struct HopfInfo {
    double lyapunov = 0.0;                    // normal-form first Lyapunov coefficient
    std::optional<double> lyapunov_planar_expr; // printed planar expression (q = 0 only)
    double omega = 0.0;                       // sqrt(det): imaginary part of the eigenpair
    Criticality criticality = Criticality::Undetermined;
    double dS_dparam = 0.0;        // secant of trace along the continued branch
    bool transversal = false;      // |dS_dparam| > 1e-10
    double closed_form_residual = 0.0; // trace identity evaluated at the solution
    // k only: sign of the fixed-equilibrium dS/dk secant vs -a v*/(1+k v*)^2
    std::optional<bool> partial_dSdk_matches_closed_form;
};

struct SaddleNodeInfo {
    bool sotomayor_ok = false; // Z.H_param != 0 and Z.D2H(W,W) != 0
    double det = 0.0;          // at the fold point (should be ~0)
    double trace = 0.0;        // should be < 0
    double bracket_lo = 0.0, bracket_hi = 0.0; // parameter bracket, width < 1e-6
    int count_below = 0, count_above = 0;      // equilibrium counts at either side
};

struct BifurcationPoint {
    std::string param_name;
    double param_value = 0.0;
    State equilibrium{};
    BifurcationKind kind = BifurcationKind::Hopf;
    std::optional<HopfInfo> hopf;
    std::optional<SaddleNodeInfo> saddle_node;
};

struct HopfSearch {
    std::vector<BifurcationPoint> points;
    std::optional<std::string> warning; // set when the branch is lost mid-interval
};

// Root-finds trace = 0 on the continued branch over the interval; verifies
// det > 0, transversality, and the closed-form residual at every root.
HopfSearch find_hopf(const ModelParams& P, const std::string& param_name, Interval search);

// The printed planar Liapunov-number expression, evaluated with the published
// Taylor coefficients. Requires a Hopf candidate (|trace| < 1e-7, det > 0)
// and q = 0. Sign convention: negative = supercritical.
double first_lyapunov(const ModelParams& P, const State& eq);

// Complex normal-form route; valid for any q. Same sign convention.
double first_lyapunov_normal_form(const ModelParams& P, const State& eq);

// Integrates near the equilibrium on the unstable side of the Hopf point and
// reports whether the orbit stays on a small attractor (supercritical) or
// leaves the neighborhood (subcritical).
Criticality empirical_criticality(const ModelParams& P, const std::string& param_name,
                                  const BifurcationPoint& hopf_point);

// Locates folds by bisecting the coexistence-equilibrium count over the
// interval (bracket refined below 1e-6) and verifies the Sotomayor
// nondegeneracy conditions at each fold.
std::vector<BifurcationPoint> find_saddle_node(const ModelParams& P,
                                               const std::string& param_name, Interval search);

// Equilibrium branch tracking: the coexistence equilibrium at param = value,
// seeded from `near` when given (otherwise the largest-u equilibrium).
std::optional<State> equilibrium_at(const ModelParams& P, const std::string& param_name,
                                    double value, const std::optional<State>& near);

struct HopfCurvePoint {
    double p1 = 0.0, p2 = 0.0;
    State equilibrium{};
    double lyapunov = 0.0; // normal-form value
};

struct HopfCurve {
    std::vector<HopfCurvePoint> points;
    std::vector<HopfCurvePoint> gh_points; // |L| < 1e-6, L changes sign across
    std::optional<std::string> truncated_reason;
};

// Predictor-corrector continuation of {g1 = 0, g2 = 0, trace = 0} in
// (p1, u, v, p2). A secant predictor steps along the curve; the corrector
// fixes the dominant tangent component, which carries the continuation past
// folds of the Hopf locus. direction = +1 or -1 selects the initial heading.
HopfCurve trace_hopf_curve(const ModelParams& P, const std::string& p1_name,
                           const std::string& p2_name, const BifurcationPoint& seed,
                           int arc_budget, int direction = +1);

const char* to_string(Criticality c);
const char* to_string(BifurcationKind k);

} // namespace fearpp

#endif
