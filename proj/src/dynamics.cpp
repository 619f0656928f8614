#include "fearpp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "fearpp/equilibria.hpp"

namespace fearpp {

void IntegratorConfig::validate() const {
    if (!(h_min > 0 && h_min <= h_init && h_init <= h_max))
        throw UsageError("integrator config: need 0 < h_min <= h_init <= h_max");
    if (!(extinction_threshold > 0)) throw UsageError("extinction_threshold must be > 0");
    if (!(rel_tol > 0 && abs_tol > 0 && convergence_tol > 0))
        throw UsageError("tolerances must be > 0");
    if (!(t_end >= 0)) throw UsageError("t_end must be >= 0");
}

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
                 E4 = 125.0 / 192 - 393.0 / 640, E5 = -2187.0 / 6784 + 92097.0 / 339200,
                 E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;

struct Vec2 {
    double u, v;
};

struct StepResult {
    Vec2 y;       // 5th-order solution
    Vec2 f_new;   // derivative at y (FSAL stage)
    double error; // scaled error norm
    bool ok;      // false: a stage left the nonnegative quadrant or overflowed
};

// One DP45 step. Stage values outside u,v >= 0 invalidate the step so the
// caller can halve; the fractional powers are undefined there.
StepResult dp45_step(const ModelParams& P, double /*t*/, const Vec2& y, const Vec2& f0,
                     double h, double rel_tol, double abs_tol) {
    StepResult out{};
    out.ok = false;
    auto eval = [&](const Vec2& s, Vec2& f) -> bool {
        if (s.u < 0.0 || s.v < 0.0) return false;
        try {
            Deriv d = vector_field(P, {s.u, s.v});
            f = {d.du, d.dv};
        } catch (const EvaluationError&) {
            return false;
        }
        return true;
    };
    Vec2 k1 = f0, k2{}, k3{}, k4{}, k5{}, k6{}, k7{};
    Vec2 s;
    s = {y.u + h * A21 * k1.u, y.v + h * A21 * k1.v};
    if (!eval(s, k2)) return out;
    s = {y.u + h * (A31 * k1.u + A32 * k2.u), y.v + h * (A31 * k1.v + A32 * k2.v)};
    if (!eval(s, k3)) return out;
    s = {y.u + h * (A41 * k1.u + A42 * k2.u + A43 * k3.u),
         y.v + h * (A41 * k1.v + A42 * k2.v + A43 * k3.v)};
    if (!eval(s, k4)) return out;
    s = {y.u + h * (A51 * k1.u + A52 * k2.u + A53 * k3.u + A54 * k4.u),
         y.v + h * (A51 * k1.v + A52 * k2.v + A53 * k3.v + A54 * k4.v)};
    if (!eval(s, k5)) return out;
    s = {y.u + h * (A61 * k1.u + A62 * k2.u + A63 * k3.u + A64 * k4.u + A65 * k5.u),
         y.v + h * (A61 * k1.v + A62 * k2.v + A63 * k3.v + A64 * k4.v + A65 * k5.v)};
    if (!eval(s, k6)) return out;
    Vec2 y5 = {y.u + h * (B1 * k1.u + B3 * k3.u + B4 * k4.u + B5 * k5.u + B6 * k6.u),
               y.v + h * (B1 * k1.v + B3 * k3.v + B4 * k4.v + B5 * k5.v + B6 * k6.v)};
    if (!eval(y5, k7)) return out;

    const double err_u = h * (E1 * k1.u + E3 * k3.u + E4 * k4.u + E5 * k5.u + E6 * k6.u + E7 * k7.u);
    const double err_v = h * (E1 * k1.v + E3 * k3.v + E4 * k4.v + E5 * k5.v + E6 * k6.v + E7 * k7.v);
    const double su = abs_tol + rel_tol * std::max(std::abs(y.u), std::abs(y5.u));
    const double sv = abs_tol + rel_tol * std::max(std::abs(y.v), std::abs(y5.v));
    out.error = std::sqrt(0.5 * ((err_u / su) * (err_u / su) + (err_v / sv) * (err_v / sv)));
    out.y = y5;
    out.f_new = k7;
    out.ok = std::isfinite(out.error) && std::isfinite(y5.u) && std::isfinite(y5.v);
    return out;
}

double field_norm(const Vec2& f) { return std::hypot(f.u, f.v); }

} // namespace

Trajectory integrate(const ModelParams& P, const State& s0, const IntegratorConfig& cfg) {
    P.validate();
    cfg.validate();
    if (s0.u < 0 || s0.v < 0) throw UsageError("initial state must be nonnegative");

    Trajectory traj;
    double t = 0.0;
    Vec2 y = {s0.u, s0.v};
    bool extinct = false;

    // 0 < u0 below the threshold counts as extinct at t = 0
    if (y.u > 0.0 && y.u < cfg.extinction_threshold) {
        y.u = 0.0;
        extinct = true;
        traj.termination.kind = TerminationKind::PreyExtinct;
        traj.termination.extinction_time = 0.0;
    }
    traj.samples.push_back({t, y.u, y.v});
    if (cfg.t_end == 0.0) return traj;

    Deriv d0 = vector_field(P, {y.u, y.v});
    Vec2 f = {d0.du, d0.dv};
    double h = std::min(cfg.h_init, cfg.t_end);
    int quiet_steps = 0; // consecutive accepted steps with small ||f||

    while (t < cfg.t_end) {
        h = std::min(h, cfg.t_end - t);
        StepResult st = dp45_step(P, t, y, f, h, cfg.rel_tol, cfg.abs_tol);
        const bool accept = st.ok && st.error <= 1.0;
        if (!accept) {
            ++traj.rejected_steps;
            double shrink = st.ok ? std::max(0.2, 0.9 * std::pow(st.error, -0.2)) : 0.5;
            h *= std::min(shrink, 0.9);
            if (h < cfg.h_min) {
                // The fractional powers make both axes sticky: a step-size
                // collapse right next to an axis is the finite-time hit, not
                // genuine stiffness.
                if (!extinct && y.u > 0.0 && y.u < 100.0 * cfg.extinction_threshold) {
                    y.u = 0.0;
                    extinct = true;
                    traj.termination.kind = TerminationKind::PreyExtinct;
                    traj.termination.extinction_time = t;
                    traj.samples.back() = {t, y.u, y.v}; // re-tag the stalled sample
                    Deriv dn = vector_field(P, {y.u, y.v});
                    f = {dn.du, dn.dv};
                    h = cfg.h_init;
                    quiet_steps = 0;
                    continue;
                }
                // Predator underflow (harvested collapse or prey-free decay)
                // is recorded as a clamp, not an event.
                if (y.v > 0.0 && y.v < 100.0 * cfg.extinction_threshold && f.v < 0.0) {
                    y.v = 0.0;
                    Deriv dn = vector_field(P, {y.u, y.v});
                    f = {dn.du, dn.dv};
                    h = cfg.h_init;
                    continue;
                }
                throw StiffnessError("step size underflow", t, y.u, y.v);
            }
            continue;
        }

        // prey extinction event inside the accepted step
        if (!extinct && y.u >= cfg.extinction_threshold && st.y.u < cfg.extinction_threshold) {
            double lo = 0.0, hi = h;
            Vec2 y_hi = st.y;
            while (hi - lo > cfg.h_min) {
                const double mid = 0.5 * (lo + hi);
                StepResult sub = dp45_step(P, t, y, f, mid, cfg.rel_tol, cfg.abs_tol);
                const bool below = !sub.ok || sub.y.u < cfg.extinction_threshold;
                if (below) {
                    hi = mid;
                    if (sub.ok) y_hi = sub.y;
                } else {
                    lo = mid;
                }
            }
            const double t_e = t + hi;
            y = {0.0, std::max(y_hi.v, 0.0)};
            t = t_e;
            extinct = true;
            traj.termination.kind = TerminationKind::PreyExtinct;
            traj.termination.extinction_time = t_e;
            ++traj.accepted_steps;
            traj.samples.push_back({t, y.u, y.v});
            Deriv dn = vector_field(P, {y.u, y.v});
            f = {dn.du, dn.dv};
            h = cfg.h_init;
            quiet_steps = 0;
            continue;
        }

        t += h;
        y = st.y;
        f = st.f_new;
        ++traj.accepted_steps;
        traj.samples.push_back({t, y.u, y.v});

        if (extinct && y.v > 0.0 && y.v < cfg.extinction_threshold) {
            y.v = 0.0;
            traj.samples.back().v = 0.0;
            Deriv dn = vector_field(P, {y.u, y.v});
            f = {dn.du, dn.dv};
        }

        if (!extinct) {
            if (field_norm(f) < cfg.convergence_tol) {
                if (++quiet_steps >= cfg.convergence_window) {
                    traj.termination.kind = TerminationKind::ConvergedTo;
                    traj.termination.state = {y.u, y.v};
                    traj.termination.residual = field_norm(f);
                    return traj;
                }
            } else {
                quiet_steps = 0;
            }
        }

        h = std::clamp(h * std::clamp(0.9 * std::pow(std::max(st.error, 1e-10), -0.2), 0.2, 5.0),
                       cfg.h_min, cfg.h_max);
    }
    return traj;
}

namespace {

// Upward crossings of the section {v = v_ref, u > u_ref}: returns the
// interpolated u at each crossing.
std::vector<double> section_crossings(const Trajectory& traj, const State& ref) {
    std::vector<double> out;
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        const auto& s0 = traj.samples[i - 1];
        const auto& s1 = traj.samples[i];
        if (s0.v < ref.v && s1.v >= ref.v) {
            const double w = (ref.v - s0.v) / (s1.v - s0.v);
            const double u = s0.u + w * (s1.u - s0.u);
            if (u > ref.u) out.push_back(u);
        }
    }
    return out;
}

} // namespace

Outcome classify_outcome(const ModelParams& P, const State& s0, const IntegratorConfig& cfg,
                         const State& ref) {
    Trajectory traj = integrate(P, s0, cfg);
    Outcome out;
    switch (traj.termination.kind) {
    case TerminationKind::ConvergedTo:
        out.kind = OutcomeKind::Coexistence;
        out.state = traj.termination.state;
        return out;
    case TerminationKind::PreyExtinct:
        out.kind = OutcomeKind::Extinction;
        out.extinction_time = traj.termination.extinction_time;
        return out;
    case TerminationKind::HorizonReached:
        break;
    }
    if (ref.u > 0 && ref.v > 0) {
        auto crossings = section_crossings(traj, ref);
        // A real cycle returns within cycle_tol of the previous section point
        // AND its return map has settled: the successive-return differences
        // oscillate around the fixed point. A slowly expanding spiral also
        // returns within tolerance but its differences grow with one sign.
        if (crossings.size() >= 12) {
            const std::size_t n = crossings.size();
            const double u_last = crossings[n - 1];
            const double step = std::abs(u_last - crossings[n - 2]);
            int sign_changes = 0;
            for (std::size_t j = n - 11; j + 1 < n; ++j) {
                const double d0 = crossings[j] - crossings[j - 1];
                const double d1 = crossings[j + 1] - crossings[j];
                if (d0 * d1 < 0.0) ++sign_changes;
            }
            if (step < cfg.cycle_tol && sign_changes >= 1 &&
                std::abs(u_last - ref.u) > 10.0 * cfg.cycle_tol) {
                out.kind = OutcomeKind::Cycle;
                return out;
            }
        }
    }
    out.kind = OutcomeKind::Undecided;
    return out;
}

Outcome classify_outcome(const ModelParams& P, const State& s0, const IntegratorConfig& cfg) {
    State ref{0, 0};
    if (P.q == 0.0) {
        auto found = find_coexistence(P);
        if (!found.equilibria.empty()) {
            const auto& top = found.equilibria.back();
            ref = top.location;
        }
    } else {
        auto found = find_coexistence_newton(P);
        if (!found.empty()) ref = found.back().location;
    }
    return classify_outcome(P, s0, cfg, ref);
}

const char* to_string(OutcomeKind k) {
    switch (k) {
    case OutcomeKind::Coexistence: return "Coexistence";
    case OutcomeKind::Extinction: return "Extinction";
    case OutcomeKind::Cycle: return "Cycle";
    case OutcomeKind::Undecided: return "Undecided";
    }
    return "?";
}

} // namespace fearpp
