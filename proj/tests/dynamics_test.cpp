#include "doctest.h"

#include <cmath>

#include "fearpp/dynamics.hpp"
#include "fearpp/equilibria.hpp"
#include "helpers.hpp"

using namespace fearpp;
using namespace fearpp::test;

namespace {
const ModelParams kFoldFamily = params(2.5, 0.3, 2.5, 2.0, 2.5, 0.0, 0.4, 0.2);
}

TEST_CASE("prey-free decay follows the closed form") {
    ModelParams P = params(1.7, 0.5, 1.0, 0.8, 1.0, 0.3, 0.5, 0.5);
    IntegratorConfig cfg;
    cfg.t_end = 12.0;
    const double v0 = 2.3;
    Trajectory traj = integrate(P, {0.0, v0}, cfg);
    CHECK(traj.termination.kind == TerminationKind::HorizonReached);
    for (const auto& s : traj.samples) {
        CHECK(s.u == 0.0);
        const double ref = v0 * std::exp(-P.d * s.t);
        CHECK(rel_err(s.v, ref) < 1e-6);
    }
}

TEST_CASE("fear drives the published initial point from coexistence to extinction") {
    IntegratorConfig cfg;
    cfg.t_end = 2000.0;
    SUBCASE("no fear: converges") {
        Trajectory traj = integrate(kFoldFamily, {4.8, 8.3}, cfg);
        REQUIRE(traj.termination.kind == TerminationKind::ConvergedTo);
        // limit point is the stable coexistence equilibrium
        auto eqs = find_coexistence(kFoldFamily).equilibria;
        REQUIRE(eqs.size() == 2);
        CHECK(std::abs(traj.termination.state.u - eqs[1].location.u) < 1e-4);
        CHECK(std::abs(traj.termination.state.v - eqs[1].location.v) < 1e-4);
    }
    SUBCASE("k = 0.03: finite-time prey extinction") {
        ModelParams P = kFoldFamily;
        P.k = 0.03;
        Trajectory traj = integrate(P, {4.8, 8.3}, cfg);
        REQUIRE(traj.termination.kind == TerminationKind::PreyExtinct);
        CHECK(traj.termination.extinction_time > 0.0);
        CHECK(traj.termination.extinction_time < 100.0);
        // u is exactly zero from t_e on
        for (const auto& s : traj.samples)
            if (s.t >= traj.termination.extinction_time) CHECK(s.u == 0.0);
    }
}

TEST_CASE("zero-length integration returns only the initial sample") {
    IntegratorConfig cfg;
    cfg.t_end = 0.0;
    Trajectory traj = integrate(kFoldFamily, {1.0, 1.0}, cfg);
    CHECK(traj.samples.size() == 1);
    CHECK(traj.termination.kind == TerminationKind::HorizonReached);
}

TEST_CASE("initial prey below the threshold is extinct at time zero") {
    IntegratorConfig cfg;
    cfg.t_end = 1.0;
    Trajectory traj = integrate(kFoldFamily, {1e-10, 1.0}, cfg);
    CHECK(traj.termination.kind == TerminationKind::PreyExtinct);
    CHECK(traj.termination.extinction_time == 0.0);
    CHECK(traj.samples.front().u == 0.0);
}

TEST_CASE("samples are strictly increasing in time and nonnegative") {
    RandomModel rm(83);
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-8;
    cfg.abs_tol = 1e-11;
    cfg.t_end = 25.0;
    int runs = 0, stiff = 0;
    for (int i = 0; i < 200; ++i) {
        ModelParams P = rm.draw(true);
        const double u0 = rm.uniform(0.0, 2.0 * P.carrying_capacity());
        const double v0 = rm.uniform(0.0, 3.0);
        try {
            Trajectory traj = integrate(P, {u0, v0}, cfg);
            ++runs;
            for (std::size_t j = 0; j < traj.samples.size(); ++j) {
                CHECK(traj.samples[j].u >= 0.0);
                CHECK(traj.samples[j].v >= 0.0);
                if (j > 0) CHECK(traj.samples[j].t > traj.samples[j - 1].t);
            }
        } catch (const StiffnessError&) {
            ++stiff;
        }
    }
    CHECK(runs >= 190); // step-size collapse must stay exceptional
    (void)stiff;
}

TEST_CASE("dissipativity: prey decays monotonically above carrying capacity") {
    RandomModel rm(89);
    IntegratorConfig cfg;
    cfg.t_end = 40.0;
    cfg.convergence_tol = 1e-14;
    for (int i = 0; i < 20; ++i) {
        ModelParams P = rm.draw(false);
        P.k = 0.0;
        const double cap = P.carrying_capacity();
        const double u0 = cap * rm.uniform(1.2, 3.0);
        Trajectory traj;
        try {
            traj = integrate(P, {u0, rm.uniform(0.1, 2.0)}, cfg);
        } catch (const StiffnessError&) {
            continue;
        }
        bool entered = false;
        double prev_u = traj.samples.front().u;
        for (const auto& s : traj.samples) {
            if (!entered && s.u > cap) {
                CHECK(s.u <= prev_u + 1e-12); // strictly decreasing while above a/b
            }
            if (s.u <= cap) entered = true;
            if (entered) CHECK(s.u <= cap + 10.0 * cfg.abs_tol);
            prev_u = s.u;
        }
    }
}

TEST_CASE("terminal state converges as tolerances tighten") {
    ModelParams P = kFoldFamily;
    IntegratorConfig coarse;
    coarse.rel_tol = 1e-6;
    coarse.abs_tol = 1e-9;
    coarse.t_end = 30.0;
    coarse.convergence_tol = 1e-14; // run to the horizon
    IntegratorConfig fine = coarse;
    fine.rel_tol /= 2.0;
    fine.abs_tol /= 2.0;
    Trajectory a = integrate(P, {4.8, 8.3}, coarse);
    Trajectory b = integrate(P, {4.8, 8.3}, fine);
    const double du = std::abs(a.samples.back().u - b.samples.back().u);
    const double dv = std::abs(a.samples.back().v - b.samples.back().v);
    CHECK(du < 10.0 * coarse.rel_tol * std::max(1.0, a.samples.back().u));
    CHECK(dv < 10.0 * coarse.rel_tol * std::max(1.0, a.samples.back().v));
}

TEST_CASE("extinction time is stable under tolerance refinement") {
    ModelParams P = kFoldFamily;
    P.k = 0.03;
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-8;
    cfg.abs_tol = 1e-11;
    cfg.t_end = 50.0;
    Trajectory a = integrate(P, {4.8, 8.3}, cfg);
    IntegratorConfig fine = cfg;
    fine.rel_tol /= 10.0;
    fine.abs_tol /= 10.0;
    Trajectory b = integrate(P, {4.8, 8.3}, fine);
    REQUIRE(a.termination.kind == TerminationKind::PreyExtinct);
    REQUIRE(b.termination.kind == TerminationKind::PreyExtinct);
    CHECK(std::abs(a.termination.extinction_time - b.termination.extinction_time) <
          100.0 * cfg.rel_tol);
}

TEST_CASE("outcome classification on the published families") {
    IntegratorConfig cfg;
    cfg.t_end = 2000.0;
    SUBCASE("fold family, no fear: coexistence") {
        Outcome oc = classify_outcome(kFoldFamily, {4.8, 8.3}, cfg);
        CHECK(oc.kind == OutcomeKind::Coexistence);
    }
    SUBCASE("fold family, k = 0.03: extinction") {
        ModelParams P = kFoldFamily;
        P.k = 0.03;
        Outcome oc = classify_outcome(P, {4.8, 8.3}, cfg);
        CHECK(oc.kind == OutcomeKind::Extinction);
        CHECK(oc.extinction_time > 0.0);
    }
    SUBCASE("just past a subcritical Hopf: never coexistence") {
        // eigenvalue oracle: trace > 0 slightly above the critical fear value,
        // so the equilibrium repels and the orbit must leave
        ModelParams P = params(2.0, 0.2, 1.0, 0.7, 0.8, 0.0665, 0.6, 0.4);
        auto eqs = find_coexistence(P).equilibria;
        REQUIRE(eqs.size() == 1);
        REQUIRE(eqs[0].jac->trace() > 0.0);
        Outcome oc =
            classify_outcome(P, {eqs[0].location.u * 1.001, eqs[0].location.v}, cfg);
        CHECK(oc.kind != OutcomeKind::Coexistence);
    }
}

TEST_CASE("a stable limit cycle classifies as Cycle") {
    // supercritical region of the first Hopf family (lowered prey birth rate):
    // one percent inside the critical fear value an attracting cycle
    // surrounds the unstable focus and catches orbits from both sides
    ModelParams P = params(0.9, 0.3, 2.5, 2.0, 2.5, 0.99 * 0.966541, 0.9, 0.5);
    auto eqs = find_coexistence(P).equilibria;
    REQUIRE(eqs.size() == 1);
    REQUIRE(eqs[0].jac->trace() > 0.0);
    IntegratorConfig cfg;
    cfg.t_end = 30000.0;
    cfg.cycle_tol = 1e-3;
    const double dist = std::min(eqs[0].location.u, eqs[0].location.v);
    Outcome inner = classify_outcome(P, {eqs[0].location.u + 0.15 * dist, eqs[0].location.v},
                                     cfg, eqs[0].location);
    CHECK(inner.kind == OutcomeKind::Cycle);
    Outcome outer = classify_outcome(P, {eqs[0].location.u + 2.5 * dist, eqs[0].location.v},
                                     cfg, eqs[0].location);
    CHECK(outer.kind == OutcomeKind::Cycle);
}

TEST_CASE("stiffness failure carries the last good state") {
    ModelParams P = kFoldFamily;
    IntegratorConfig cfg;
    cfg.t_end = 10.0;
    cfg.h_min = 1e-3; // force an underflow immediately: h_min close to h_max
    cfg.h_init = 1e-3;
    cfg.h_max = 1e-3;
    cfg.rel_tol = 1e-14;
    cfg.abs_tol = 1e-16;
    try {
        integrate(P, {4.8, 8.3}, cfg);
        // some systems may still squeak through; nothing to assert then
    } catch (const StiffnessError& err) {
        CHECK(err.u >= 0.0);
        CHECK(err.v >= 0.0);
        CHECK(err.t >= 0.0);
    }
}
