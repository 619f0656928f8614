#include "fearpp/manifolds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fearpp/parallel.hpp"

namespace fearpp {

namespace {

enum class Side { Inside, Outside };

struct ProbeContext {
    ModelParams P;
    State ref{}; // reference coexistence equilibrium (largest-u one)

    // FirstPass: orbits below the stable set of the origin turn right and grow
    // before any crash; orbits above it lose prey monotonically. The rise
    // threshold is relative to the probe's starting abscissa.
    double swing_threshold(double u0) const {
        const double cap = P.carrying_capacity();
        return std::min(std::max(1.25 * u0, u0 + 0.05 * cap), 0.9 * cap);
    }
    bool swing_measurable(double u0) const { return u0 < 0.8 * P.carrying_capacity(); }
};

// Classifies one initial condition. Inside = attracted to coexistence/cycle
// (BasinBoundary) or escaping right before extinction (FirstPass).
std::optional<Side> probe(const ProbeContext& ctx, const ProbeConfig& cfg, ProbeMode mode,
                          double u0, double v0) {
    IntegratorConfig icfg = cfg.integrator;
    for (int attempt = 0; attempt <= cfg.horizon_doublings; ++attempt) {
        Trajectory traj;
        try {
            traj = integrate(ctx.P, {u0, v0}, icfg);
        } catch (const Error&) {
            return std::nullopt;
        }
        if (mode == ProbeMode::FirstPass) {
            if (!ctx.swing_measurable(u0)) return std::nullopt;
            const double threshold = ctx.swing_threshold(u0);
            if (traj.termination.kind == TerminationKind::PreyExtinct) {
                for (const auto& s : traj.samples)
                    if (s.u > threshold) return Side::Inside; // swung right first
                return Side::Outside;                         // direct crash
            }
            // converged or ran out of horizon without extinction: treat any
            // survivor as the inside class
            if (traj.termination.kind == TerminationKind::ConvergedTo) return Side::Inside;
            for (const auto& s : traj.samples)
                if (s.u > threshold) return Side::Inside;
            icfg.t_end *= 2.0;
            continue;
        }
        switch (traj.termination.kind) {
        case TerminationKind::ConvergedTo:
            return Side::Inside;
        case TerminationKind::PreyExtinct:
            return Side::Outside;
        case TerminationKind::HorizonReached: {
            Outcome oc = classify_outcome(ctx.P, {u0, v0}, icfg, ctx.ref);
            if (oc.kind == OutcomeKind::Cycle || oc.kind == OutcomeKind::Coexistence)
                return Side::Inside;
            if (oc.kind == OutcomeKind::Extinction) return Side::Outside;
            icfg.t_end *= 2.0; // Undecided: double the horizon once
            break;
        }
        }
    }
    return std::nullopt;
}

// Bisects the dichotomy along a vertical line; nullopt when both endpoints
// fall in the same class. When the top of the line is still on the inside
// class the line is extended upward before giving up (the boundary height
// varies a lot across scan lines).
std::optional<Separatrix::Point> bisect_line(const ProbeContext& ctx, const ProbeConfig& cfg,
                                             ProbeMode mode, double u, double v_lo, double v_hi,
                                             bool grow_top) {
    auto lo = probe(ctx, cfg, mode, u, v_lo);
    auto hi = probe(ctx, cfg, mode, u, v_hi);
    if (grow_top && lo && hi && *lo == Side::Inside && *hi == Side::Inside) {
        for (int grow = 0; grow < 6 && hi && *hi == Side::Inside; ++grow) {
            v_hi *= 2.0;
            hi = probe(ctx, cfg, mode, u, v_hi);
        }
    }
#ifdef FEARPP_DEBUG_PROBES
    std::fprintf(stderr, "[bisect_line] mode=%d u=%g vlo=%g(%d) vhi=%g(%d)\n", (int)mode, u, v_lo,
                 lo ? (int)*lo : -1, v_hi, hi ? (int)*hi : -1);
#endif
    if (!lo || !hi || *lo == *hi) return std::nullopt;
    while (v_hi - v_lo > cfg.state_tol) {
        const double mid = 0.5 * (v_lo + v_hi);
        auto cm = probe(ctx, cfg, mode, u, mid);
        if (!cm) return std::nullopt;
        if (*cm == *lo)
            v_lo = mid;
        else
            v_hi = mid;
    }
    return Separatrix::Point{u, 0.5 * (v_lo + v_hi), v_hi - v_lo};
}

ProbeContext make_context(const ModelParams& P) {
    ProbeContext ctx;
    ctx.P = P;
    auto scan = find_coexistence(P);
    if (!scan.equilibria.empty()) ctx.ref = scan.equilibria.back().location;
    return ctx;
}

} // namespace

Separatrix separatrix(const ModelParams& P, const ProbeConfig& cfg,
                      std::optional<Interval> u_range, ProbeMode mode) {
    P.validate();
    const ProbeContext ctx = make_context(P);
    if (mode == ProbeMode::BasinBoundary && ctx.ref.u == 0.0)
        throw NoSeparatrixError("no coexistence equilibrium: nothing to separate toward");

    const Interval ur = u_range.value_or(Interval{0.0, 1.2 * P.carrying_capacity()});
    const double v_top = ctx.ref.v > 0 ? 3.0 * ctx.ref.v : 3.0;
    const double v_bot = mode == ProbeMode::BasinBoundary ? 1e-3 * v_top : 1e-4 * v_top;

    Separatrix out;
    out.mode = mode;
    out.lines_scanned = cfg.scan_lines;
    std::vector<std::optional<Separatrix::Point>> pts(cfg.scan_lines);
    par::for_each_index(static_cast<std::size_t>(cfg.scan_lines), [&](std::size_t i) {
        const double u = ur.lo + (ur.hi - ur.lo) * (double(i) + 1.0) / (double(cfg.scan_lines) + 1.0);
        pts[i] = bisect_line(ctx, cfg, mode, u, v_bot, v_top, true);
    });
    for (const auto& pt : pts) {
        if (pt)
            out.polyline.push_back(*pt);
        else
            ++out.lines_uniform;
    }
    if (out.polyline.size() < 3)
        throw NoSeparatrixError("fewer than 3 boundary points found");
    return out;
}

Trajectory unstable_set(const ModelParams& P, const IntegratorConfig& cfg,
                        std::optional<double> delta) {
    P.validate();
    const double d = delta.value_or(1e-5 * P.carrying_capacity());
    if (!(d > 0)) throw UsageError("unstable_set: delta must be > 0");
    return integrate(P, {d, d * d}, cfg);
}

namespace {

// v at the first crossing of u = u_ref with u decreasing
std::optional<double> first_leftward_crossing(const Trajectory& traj, double u_ref) {
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        const auto& s0 = traj.samples[i - 1];
        const auto& s1 = traj.samples[i];
        if (s0.u > u_ref && s1.u <= u_ref) {
            const double w = (u_ref - s0.u) / (s1.u - s0.u);
            return s0.v + w * (s1.v - s0.v);
        }
    }
    return std::nullopt;
}

} // namespace

ManifoldOffset manifold_offset(const ModelParams& P, const ProbeConfig& cfg) {
    P.validate();
    const ProbeContext ctx = make_context(P);
    if (ctx.ref.u == 0.0)
        throw NoSeparatrixError("manifold_offset needs a coexistence equilibrium as reference");

    Trajectory wu = unstable_set(P, cfg.integrator);
    auto v_wu = first_leftward_crossing(wu, ctx.ref.u);
    if (!v_wu) {
        IntegratorConfig longer = cfg.integrator;
        longer.t_end *= 4.0;
        wu = unstable_set(P, longer);
        v_wu = first_leftward_crossing(wu, ctx.ref.u);
        if (!v_wu) throw Error("unstable set never crosses the reference line");
    }

    // the line must reach above the stable set: grow the top until an orbit
    // started there crashes into the predator axis without escaping right
    double v_top = std::max(3.0 * ctx.ref.v, 1.25 * *v_wu);
    for (int grow = 0; grow < 6; ++grow) {
        auto top = probe(ctx, cfg, ProbeMode::FirstPass, ctx.ref.u, v_top);
        if (top && *top == Side::Outside) break;
        v_top *= 2.0;
    }
    // try the basin dichotomy first; fall back to first-pass when everything
    // on the line goes extinct (unstable coexistence point)
    auto pt = bisect_line(ctx, cfg, ProbeMode::BasinBoundary, ctx.ref.u, 1.02 * ctx.ref.v, v_top, false);
    ProbeMode used = ProbeMode::BasinBoundary;
    if (!pt) {
        pt = bisect_line(ctx, cfg, ProbeMode::FirstPass, ctx.ref.u, 1e-4 * v_top, v_top, false);
        used = ProbeMode::FirstPass;
    }
    if (!pt) throw NoSeparatrixError("no stable-set crossing found on the reference line");
    return ManifoldOffset{*v_wu - pt->v, ctx.ref.u, *v_wu, pt->v, used};
}

HomoclinicBracket homoclinic_bracket(const ModelParams& P, const std::string& param_name,
                                     double lo, double hi, int depth, const ProbeConfig& cfg) {
    if (!(lo < hi)) throw UsageError("homoclinic_bracket: need lo < hi");
    auto sigma_at = [&](double val) {
        ModelParams Q = P;
        Q.set(param_name, val);
        return manifold_offset(Q, cfg).sigma;
    };
    const double s_lo = sigma_at(lo);
    const double s_hi = sigma_at(hi);
    if (s_lo * s_hi > 0.0)
        throw NoBracketError("manifold offset has the same sign at both endpoints (sigma(lo)=" +
                             std::to_string(s_lo) + ", sigma(hi)=" + std::to_string(s_hi) + ")");
    double a = lo, b = hi, sa = s_lo;
    for (int it = 0; it < depth; ++it) {
        const double mid = 0.5 * (a + b);
        const double sm = sigma_at(mid);
        if (sa * sm <= 0.0)
            b = mid;
        else {
            a = mid;
            sa = sm;
        }
    }
    HomoclinicBracket out;
    out.param_name = param_name;
    out.lo = a;
    out.hi = b;
    out.evidence = "sigma(" + std::to_string(lo) + ")=" + std::to_string(s_lo) + ", sigma(" +
                   std::to_string(hi) + ")=" + std::to_string(s_hi) +
                   "; positive offset = stable set below unstable set";
    return out;
}

} // namespace fearpp
