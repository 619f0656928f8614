// Adaptive time integration of the non-smooth vector field. The prey equation
// is non-Lipschitz at u=0 (u^p with p<1), so the prey can reach zero in finite
// time; the integrator detects that crossing as an event, clamps u to exactly
// zero and continues on the prey-free sub-flow dv/dt = -d v - q v^r.

#ifndef FEARPP_DYNAMICS_HPP
#define FEARPP_DYNAMICS_HPP

#include <cstdint>
#include <vector>

#include "fearpp/model.hpp"

namespace fearpp {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h_init = 1e-3;
    double h_min = 1e-12;
    double h_max = 1.0;
    double extinction_threshold = 1e-9; // density below which prey is extinct
    double convergence_tol = 1e-9;      // on ||vector_field||
    int convergence_window = 10;        // consecutive accepted steps
    double t_end = 500.0;
    double cycle_tol = 1e-4;            // return-proximity threshold (classify_outcome)
    void validate() const;
};

enum class TerminationKind { HorizonReached, ConvergedTo, PreyExtinct };

struct Termination {
    TerminationKind kind = TerminationKind::HorizonReached;
    State state{};              // ConvergedTo: the terminal state
    double residual = 0.0;      // ConvergedTo: ||vector_field|| there
    double extinction_time = 0; // PreyExtinct: t_e
};

struct Trajectory {
    struct Sample {
        double t, u, v;
    };
    std::vector<Sample> samples; // strictly increasing t, all u,v >= 0
    Termination termination;
    std::int64_t accepted_steps = 0;
    std::int64_t rejected_steps = 0;
};

// Dormand-Prince 4(5) with embedded error estimate. Stage values with u<0 or
// v<0 reject the step. Throws StiffnessError on step underflow before any
// event has fired and EvaluationError on non-finite states.
Trajectory integrate(const ModelParams& P, const State& s0, const IntegratorConfig& cfg);

enum class OutcomeKind { Coexistence, Extinction, Cycle, Undecided };

struct Outcome {
    OutcomeKind kind = OutcomeKind::Undecided;
    State state{};              // Coexistence: the limit point
    double extinction_time = 0; // Extinction: t_e
};

// Wraps integrate and adds geometric cycle detection: Cycle is reported when
// the orbit returns within cycle_tol of a previous loop around an interior
// reference point after at least one full rotation. When no reference
// equilibrium is supplied the largest-u coexistence equilibrium is used.
Outcome classify_outcome(const ModelParams& P, const State& s0, const IntegratorConfig& cfg);
Outcome classify_outcome(const ModelParams& P, const State& s0, const IntegratorConfig& cfg,
                         const State& reference_equilibrium);

const char* to_string(OutcomeKind k);

} // namespace fearpp

#endif
