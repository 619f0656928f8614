#include "fearpp/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "fearpp/dynamics.hpp"

namespace fearpp {

namespace {

ModelParams with_param(const ModelParams& P, const std::string& name, double value) {
    ModelParams Q = P;
    Q.set(name, value);
    return Q;
}

double trace_at(const ModelParams& P, const State& eq) {
    return jacobian(P, eq, JacobianMode::General).trace();
}

// nearest coexistence equilibrium to `near` out of a scan
std::optional<State> pick_branch(const std::vector<Equilibrium>& eqs,
                                 const std::optional<State>& near) {
    if (eqs.empty()) return std::nullopt;
    if (!near) return eqs.back().location; // largest u
    double best = std::numeric_limits<double>::max();
    State out{};
    for (const auto& e : eqs) {
        const double d = std::hypot(e.location.u - near->u, e.location.v - near->v);
        if (d < best) {
            best = d;
            out = e.location;
        }
    }
    return out;
}

} // namespace

std::optional<State> equilibrium_at(const ModelParams& P, const std::string& param_name,
                                    double value, const std::optional<State>& near) {
    const ModelParams Q = with_param(P, param_name, value);
    if (near) {
        // fast path: refine the previous branch point at the new parameter
        auto sel = refine_coexistence(Q, *near);
        if (!sel) {
            auto eqs = find_coexistence(Q);
            sel = pick_branch(eqs.equilibria, near);
        }
        if (sel) {
            // refuse wild jumps onto a different branch
            const double scale = Q.carrying_capacity();
            if (std::hypot(sel->u - near->u, sel->v - near->v) < 0.25 * scale) return sel;
        }
        return std::nullopt;
    }
    auto scan = find_coexistence(Q);
    return pick_branch(scan.equilibria, std::nullopt);
}

HopfSearch find_hopf(const ModelParams& P, const std::string& param_name, Interval search) {
    HopfSearch result;
    const int n = 200;
    std::optional<State> branch;
    double prev_val = 0.0, prev_S = 0.0;
    bool have_prev = false;

    for (int i = 0; i <= n; ++i) {
        const double val = search.lo + (search.hi - search.lo) * double(i) / double(n);
        auto eq = equilibrium_at(P, param_name, val, branch);
        if (!eq) {
            if (branch && !result.warning)
                result.warning = "equilibrium branch lost near " + param_name + " = " +
                                 std::to_string(val);
            branch.reset();
            have_prev = false;
            continue;
        }
        branch = eq;
        const ModelParams Q = with_param(P, param_name, val);
        const Jacobian2 J = jacobian(Q, *eq, JacobianMode::General);
        const double S = J.trace();
        if (have_prev && prev_S * S < 0.0) {
            // bisect trace = 0 on the branch
            double lo = prev_val, hi = val, Slo = prev_S;
            State near_pt = *eq;
            for (int it = 0; it < 100 && (hi - lo) > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
                const double mid = 0.5 * (lo + hi);
                auto em = equilibrium_at(P, param_name, mid, near_pt);
                if (!em) break;
                near_pt = *em;
                const double Sm = trace_at(with_param(P, param_name, mid), *em);
                if (Slo * Sm <= 0.0)
                    hi = mid;
                else {
                    lo = mid;
                    Slo = Sm;
                }
            }
            const double root = 0.5 * (lo + hi);
            auto er = equilibrium_at(P, param_name, root, near_pt);
            if (er) {
                const ModelParams Pr = with_param(P, param_name, root);
                const Jacobian2 Jr = jacobian(Pr, *er, JacobianMode::General);
                if (Jr.det() > 0.0) {
                    BifurcationPoint bp;
                    bp.param_name = param_name;
                    bp.param_value = root;
                    bp.equilibrium = *er;
                    bp.kind = BifurcationKind::Hopf;
                    HopfInfo info;
                    info.omega = std::sqrt(Jr.det());

                    // transversality along the branch (secant)
                    const double h = std::max(1e-6 * std::abs(root), 1e-8);
                    auto e_m = equilibrium_at(P, param_name, root - h, *er);
                    auto e_p = equilibrium_at(P, param_name, root + h, *er);
                    if (e_m && e_p) {
                        info.dS_dparam = (trace_at(with_param(P, param_name, root + h), *e_p) -
                                          trace_at(with_param(P, param_name, root - h), *e_m)) /
                                         (2.0 * h);
                        info.transversal = std::abs(info.dS_dparam) > 1e-10;
                    }

                    // closed-form residual: the trace identity at coexistence
                    {
                        const double u = er->u, v = er->v;
                        if (Pr.q == 0.0) {
                            info.closed_form_residual =
                                std::abs(Pr.a * fear_factor(Pr.k, v) - 2.0 * Pr.b * u -
                                         Pr.p * Pr.c * std::pow(u, Pr.p - 1.0) * std::pow(v, Pr.m) -
                                         Pr.d * (1.0 - Pr.m));
                        } else {
                            const Jacobian2 Js =
                                jacobian(Pr, *er, JacobianMode::CoexistenceSimplified);
                            info.closed_form_residual = std::abs(Js.trace());
                        }
                    }

                    // fixed-equilibrium partial dS/dk against the closed form
                    if (param_name == "k") {
                        const double hk = std::max(1e-7 * std::abs(root), 1e-9);
                        const double partial =
                            (trace_at(with_param(P, param_name, root + hk), *er) -
                             trace_at(with_param(P, param_name, root - hk), *er)) /
                            (2.0 * hk);
                        const double closed =
                            -Pr.a * er->v / std::pow(1.0 + Pr.k * er->v, 2.0);
                        info.partial_dSdk_matches_closed_form = (partial * closed > 0.0);
                    }

                    try {
                        info.lyapunov = first_lyapunov_normal_form(Pr, *er);
                        if (Pr.q == 0.0) {
                            info.lyapunov_planar_expr = first_lyapunov(Pr, *er);
                            info.criticality = info.lyapunov < 0.0 ? Criticality::Supercritical
                                                                   : Criticality::Subcritical;
                        }
                    } catch (const Error&) {
                        info.lyapunov = std::numeric_limits<double>::quiet_NaN();
                    }
                    bp.hopf = info;
                    if (Pr.q != 0.0) {
                        bp.hopf->criticality = empirical_criticality(P, param_name, bp);
                    }
                    result.points.push_back(bp);
                }
            }
        }
        prev_val = val;
        prev_S = S;
        have_prev = true;
    }
    return result;
}

double first_lyapunov(const ModelParams& P, const State& eq) {
    if (P.q != 0.0) throw UsageError("first_lyapunov: printed coefficients require q = 0");
    const TaylorCoeffs T = taylor_coeffs(P, eq);
    const double M = T.a10 * T.b01 - T.a01 * T.b10;
    if (M <= 0.0) throw NotAHopfError("first_lyapunov: det <= 0 at the supplied point");
    if (std::abs(T.a10 + T.b01) > kHopfCandidateTol)
        throw NotAHopfError("first_lyapunov: trace is not numerically zero");
    if (T.a01 == 0.0) throw Error("first_lyapunov: a01 = 0 makes the expression singular");

    const double block1 =
        T.a10 * T.b10 * (T.a11 * T.a11 + T.a11 * T.b02 + T.a02 * T.b11) +
        T.a10 * T.a01 * (T.b11 * T.b11 + T.a20 * T.b11 + T.a11 * T.b02) +
        T.b10 * T.b10 * (T.a11 * T.a02 + 2.0 * T.a02 * T.b02) -
        2.0 * T.a10 * T.b10 * (T.b02 * T.b02 - T.a20 * T.a02) -
        2.0 * T.a10 * T.a01 * (T.a20 * T.a20 - T.b20 * T.b02) -
        T.a01 * T.a01 * (2.0 * T.a20 * T.b20 + T.b11 * T.b20) +
        (T.a01 * T.b10 - 2.0 * T.a10 * T.a10) * (T.b11 * T.b02 - T.a11 * T.a20);
    const double block2 =
        (T.a10 * T.a10 + T.a01 * T.b10) *
        (3.0 * (T.b10 * T.b03 - T.a01 * T.a30) + 2.0 * T.a10 * (T.a21 + T.b12) +
         (T.b10 * T.a12 - T.a01 * T.b21));
    return -3.0 * M_PI / (2.0 * T.a01 * std::pow(M, 1.5)) * (block1 - block2);
}

double first_lyapunov_normal_form(const ModelParams& P, const State& eq) {
    const TaylorCoeffs T = taylor_coeffs_harvested(P, eq);
    const double M = T.a10 * T.b01 - T.a01 * T.b10;
    if (M <= 0.0) throw NotAHopfError("first_lyapunov_normal_form: det <= 0");
    if (std::abs(T.a10 + T.b01) > kHopfCandidateTol)
        throw NotAHopfError("first_lyapunov_normal_form: trace is not numerically zero");
    const double om = std::sqrt(M);
    using C = std::complex<double>;

    // eigenvector A q = i w q; adjoint (A^T + i w I) p = 0 normalized to <p,q> = 1
    const C iw(0.0, om);
    const C q1(T.a01, 0.0), q2 = iw - T.a10;
    const C p1 = C(T.b10, 0.0), p2 = -(C(T.a10, 0.0) + iw);
    const C denom = std::conj(p1) * q1 + std::conj(p2) * q2;
    const C n1 = p1 / std::conj(denom), n2 = p2 / std::conj(denom);

    auto B = [&](const C& x1, const C& x2, const C& y1, const C& y2, bool second) -> C {
        if (!second)
            return 2.0 * T.a20 * x1 * y1 + T.a11 * (x1 * y2 + x2 * y1) + 2.0 * T.a02 * x2 * y2;
        return 2.0 * T.b20 * x1 * y1 + T.b11 * (x1 * y2 + x2 * y1) + 2.0 * T.b02 * x2 * y2;
    };
    auto Ctri = [&](const C& x1, const C& x2, const C& y1, const C& y2, const C& z1, const C& z2,
                    bool second) -> C {
        const double t30 = second ? T.b30 : T.a30;
        const double t21 = second ? T.b21 : T.a21;
        const double t12 = second ? T.b12 : T.a12;
        const double t03 = second ? T.b03 : T.a03;
        return 6.0 * t30 * x1 * y1 * z1 +
               2.0 * t21 * (x1 * y1 * z2 + x1 * y2 * z1 + x2 * y1 * z1) +
               2.0 * t12 * (x1 * y2 * z2 + x2 * y1 * z2 + x2 * y2 * z1) +
               6.0 * t03 * x2 * y2 * z2;
    };
    auto dot_p = [&](const C& w1, const C& w2) { return std::conj(n1) * w1 + std::conj(n2) * w2; };

    const C qc1 = std::conj(q1), qc2 = std::conj(q2);
    const C g20 = dot_p(B(q1, q2, q1, q2, false), B(q1, q2, q1, q2, true));
    const C g11 = dot_p(B(q1, q2, qc1, qc2, false), B(q1, q2, qc1, qc2, true));
    const C g21 = dot_p(Ctri(q1, q2, q1, q2, qc1, qc2, false), Ctri(q1, q2, q1, q2, qc1, qc2, true));
    return (1.0 / (2.0 * om * om)) * std::real(C(0.0, 1.0) * g20 * g11 + om * g21);
}

Criticality empirical_criticality(const ModelParams& P, const std::string& param_name,
                                  const BifurcationPoint& bp) {
    if (!bp.hopf || bp.hopf->dS_dparam == 0.0) return Criticality::Undetermined;
    // Probe on the side where the equilibrium is unstable (trace > 0). A
    // subcritical escape has no local attractor and crashes into the predator
    // axis; a supercritical orbit is caught by the emitted cycle and stays
    // bounded forever. The cycle may be destroyed globally a little further
    // from the Hopf point, so a near probe and a far probe are both run and
    // any bounded outcome decides supercritical.
    const double scale = std::max(std::abs(bp.param_value), 0.05);
    const double side = bp.hopf->dS_dparam > 0.0 ? +1.0 : -1.0;
    bool any_probe = false;
    for (double frac : {0.005, 0.02}) {
        const double val = bp.param_value + side * frac * scale;
        auto eq = equilibrium_at(P, param_name, val, bp.equilibrium);
        if (!eq) continue;
        const ModelParams Q = with_param(P, param_name, val);
        double rate = 0.0;
        try {
            rate = 0.5 * std::abs(jacobian(Q, *eq, JacobianMode::General).trace());
        } catch (const Error&) {
            continue;
        }
        const double dist_axes = std::min(eq->u, eq->v);
        IntegratorConfig cfg;
        cfg.rel_tol = 1e-9;
        cfg.abs_tol = 1e-12;
        cfg.convergence_tol = 1e-14; // effectively off: the point is unstable
        cfg.t_end = std::clamp(1.4 * std::log(1000.0) / std::max(rate, 1e-7), 4000.0, 50000.0);
        Trajectory traj;
        try {
            traj = integrate(Q, {eq->u + 1e-3 * dist_axes, eq->v}, cfg);
        } catch (const Error&) {
            continue;
        }
        any_probe = true;
        if (traj.termination.kind != TerminationKind::PreyExtinct)
            return Criticality::Supercritical;
    }
    return any_probe ? Criticality::Subcritical : Criticality::Undetermined;
}

namespace {

int coexistence_count(const ModelParams& P, const std::string& name, double val) {
    int n = 0;
    for (const auto& e : find_coexistence(with_param(P, name, val)).equilibria)
        n += e.fold_degenerate ? 2 : 1; // a double root is a colliding pair
    return n;
}

} // namespace

std::vector<BifurcationPoint> find_saddle_node(const ModelParams& P, const std::string& param_name,
                                               Interval search) {
    std::vector<BifurcationPoint> out;
    const int n = 128;
    std::vector<int> counts(n + 1);
    for (int i = 0; i <= n; ++i)
        counts[i] = coexistence_count(P, param_name, search.lo + (search.hi - search.lo) * i / double(n));

    for (int i = 0; i < n; ++i) {
        if (counts[i] == counts[i + 1]) continue;
        if (counts[i] < 2 && counts[i + 1] < 2) continue; // a fold needs a colliding pair
        double lo = search.lo + (search.hi - search.lo) * i / double(n);
        double hi = search.lo + (search.hi - search.lo) * (i + 1) / double(n);
        int clo = counts[i];
        while (hi - lo > 1e-7) {
            const double mid = 0.5 * (lo + hi);
            if (coexistence_count(P, param_name, mid) == clo)
                lo = mid;
            else
                hi = mid;
        }
        const bool two_at_lo = counts[i] >= 2;
        const double side_two = two_at_lo ? lo : hi;
        const ModelParams Pf = with_param(P, param_name, 0.5 * (lo + hi));
        auto pair_scan = find_coexistence(with_param(P, param_name, side_two));
        State fold{};
        bool have_fold = false;
        for (const auto& e : pair_scan.equilibria) {
            if (e.fold_degenerate) {
                fold = e.location;
                have_fold = true;
            }
        }
        if (!have_fold && pair_scan.equilibria.size() >= 2) {
            // the colliding pair are the two closest equilibria
            std::size_t ja = 0;
            double best = std::numeric_limits<double>::max();
            for (std::size_t j = 0; j + 1 < pair_scan.equilibria.size(); ++j) {
                const double d =
                    pair_scan.equilibria[j + 1].location.u - pair_scan.equilibria[j].location.u;
                if (d < best) {
                    best = d;
                    ja = j;
                }
            }
            const State ea = pair_scan.equilibria[ja].location;
            const State eb = pair_scan.equilibria[ja + 1].location;
            fold = {0.5 * (ea.u + eb.u), 0.5 * (ea.v + eb.v)};
            have_fold = true;
        }
        if (!have_fold) continue;

        BifurcationPoint bp;
        bp.param_name = param_name;
        bp.param_value = 0.5 * (lo + hi);
        bp.equilibrium = fold;
        bp.kind = BifurcationKind::SaddleNode;
        SaddleNodeInfo info;
        info.bracket_lo = lo;
        info.bracket_hi = hi;
        info.count_below = counts[i];
        info.count_above = counts[i + 1];

        const Jacobian2 J = jacobian(Pf, fold, JacobianMode::General);
        info.det = J.det();
        info.trace = J.trace();

        // Sotomayor nondegeneracy with the left/right null eigenvectors
        double z1 = -J.j21, z2 = J.j11;
        double w1 = -J.j12, w2 = J.j11;
        const double zn = std::hypot(z1, z2), wn = std::hypot(w1, w2);
        if (zn > 0 && wn > 0) {
            z1 /= zn;
            z2 /= zn;
            w1 /= wn;
            w2 /= wn;
            const Deriv Hp = param_derivative(Pf, fold, param_name);
            const double zh = z1 * Hp.du + z2 * Hp.dv;
            const double hn = std::hypot(Hp.du, Hp.dv);
            const TaylorCoeffs T = taylor_coeffs_harvested(Pf, fold);
            const double d2f = 2.0 * T.a20 * w1 * w1 + 2.0 * T.a11 * w1 * w2 + 2.0 * T.a02 * w2 * w2;
            const double d2g = 2.0 * T.b20 * w1 * w1 + 2.0 * T.b11 * w1 * w2 + 2.0 * T.b02 * w2 * w2;
            const double zdd = z1 * d2f + z2 * d2g;
            const double dn = std::hypot(d2f, d2g);
            info.sotomayor_ok = (hn > 0 && std::abs(zh) / hn > 1e-8) &&
                                (dn > 0 && std::abs(zdd) / dn > 1e-8);
        }
        bp.saddle_node = info;
        out.push_back(bp);
    }
    return out;
}

// ---------------------------------------------------------------------------
// two-parameter Hopf curve
// ---------------------------------------------------------------------------

namespace {

struct CurveVec {
    double x[4]; // (p1, u, v, p2)
};

struct CurveSystem {
    const ModelParams* base;
    const std::string* p1;
    const std::string* p2;

    ModelParams params_at(const CurveVec& X) const {
        ModelParams Q = *base;
        Q.set(*p1, X.x[0]);
        Q.set(*p2, X.x[3]);
        return Q;
    }
    // residuals (g1, g2, trace)
    bool eval(const CurveVec& X, double R[3]) const {
        if (X.x[1] <= 0.0 || X.x[2] <= 0.0) return false;
        const ModelParams Q = params_at(X);
        const double u = X.x[1], v = X.x[2];
        const double g1 =
            Q.a * fear_factor(Q.k, v) - Q.b * u - Q.c * std::pow(u, Q.p - 1.0) * std::pow(v, Q.m);
        const double g2 = -Q.d - Q.q * std::pow(v, Q.r - 1.0) +
                          Q.e * std::pow(u, Q.p) * std::pow(v, Q.m - 1.0);
        if (!std::isfinite(g1) || !std::isfinite(g2)) return false;
        double tr;
        try {
            tr = jacobian(Q, {u, v}, JacobianMode::General).trace();
        } catch (const Error&) {
            return false;
        }
        R[0] = g1;
        R[1] = g2;
        R[2] = tr;
        return true;
    }
};

bool solve3(double A[3][3], double b[3]) {
    int piv[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int best = col;
        for (int rr = col + 1; rr < 3; ++rr)
            if (std::abs(A[piv[rr]][col]) > std::abs(A[piv[best]][col])) best = rr;
        std::swap(piv[col], piv[best]);
        const double d = A[piv[col]][col];
        if (d == 0.0 || !std::isfinite(d)) return false;
        for (int rr = col + 1; rr < 3; ++rr) {
            const double f = A[piv[rr]][col] / d;
            for (int cc = col; cc < 3; ++cc) A[piv[rr]][cc] -= f * A[piv[col]][cc];
            b[piv[rr]] -= f * b[piv[col]];
        }
    }
    double out[3];
    for (int row = 2; row >= 0; --row) {
        double s = b[piv[row]];
        for (int cc = row + 1; cc < 3; ++cc) s -= A[piv[row]][cc] * out[cc];
        out[row] = s / A[piv[row]][row];
    }
    b[0] = out[0];
    b[1] = out[1];
    b[2] = out[2];
    return std::isfinite(out[0]) && std::isfinite(out[1]) && std::isfinite(out[2]);
}

// Newton on the 3 residuals with component `fixed` held at its predicted
// value; the remaining three components are unknowns.
bool correct(const CurveSystem& sys, CurveVec& X, int fixed, const double scale[4]) {
    int free_idx[3], nf = 0;
    for (int i = 0; i < 4; ++i)
        if (i != fixed) free_idx[nf++] = i;
    for (int it = 0; it < 14; ++it) {
        double R[3];
        if (!sys.eval(X, R)) return false;
        double rn = 0.0;
        for (double ri : R) rn = std::max(rn, std::abs(ri));
        if (rn < 1e-11) return true;
        double A[3][3];
        for (int j = 0; j < 3; ++j) {
            const int idx = free_idx[j];
            const double h = 1e-7 * scale[idx];
            CurveVec Xp = X, Xm = X;
            Xp.x[idx] += h;
            Xm.x[idx] -= h;
            double Rp[3], Rm[3];
            if (!sys.eval(Xp, Rp) || !sys.eval(Xm, Rm)) return false;
            for (int rr = 0; rr < 3; ++rr) A[rr][j] = (Rp[rr] - Rm[rr]) / (2.0 * h);
        }
        double rhs[3] = {-R[0], -R[1], -R[2]};
        if (!solve3(A, rhs)) return false;
        for (int j = 0; j < 3; ++j) X.x[free_idx[j]] += rhs[j];
    }
    double R[3];
    if (!sys.eval(X, R)) return false;
    return std::max({std::abs(R[0]), std::abs(R[1]), std::abs(R[2])}) < 1e-9;
}

double curve_lyapunov(const CurveSystem& sys, const CurveVec& X) {
    try {
        return first_lyapunov_normal_form(sys.params_at(X), {X.x[1], X.x[2]});
    } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

HopfCurvePoint to_point(const CurveVec& X, double L) {
    HopfCurvePoint p;
    p.p1 = X.x[0];
    p.p2 = X.x[3];
    p.equilibrium = {X.x[1], X.x[2]};
    p.lyapunov = L;
    return p;
}

} // namespace

HopfCurve trace_hopf_curve(const ModelParams& P, const std::string& p1_name,
                           const std::string& p2_name, const BifurcationPoint& seed,
                           int arc_budget, int direction) {
    HopfCurve curve;
    CurveSystem sys{&P, &p1_name, &p2_name};

    CurveVec X0;
    X0.x[0] = seed.param_value;
    X0.x[1] = seed.equilibrium.u;
    X0.x[2] = seed.equilibrium.v;
    X0.x[3] = P.get(p2_name);
    if (p1_name != seed.param_name)
        throw UsageError("trace_hopf_curve: seed must be a Hopf point in p1");

    double scale[4];
    scale[0] = std::max(std::abs(X0.x[0]), 0.1);
    scale[1] = std::max(std::abs(X0.x[1]), 0.1);
    scale[2] = std::max(std::abs(X0.x[2]), 0.1);
    scale[3] = std::max(std::abs(X0.x[3]), 0.1);

    // settle the seed exactly onto the curve
    if (!correct(sys, X0, 0, scale)) {
        curve.truncated_reason = "seed rejected by corrector";
        return curve;
    }
    curve.points.push_back(to_point(X0, curve_lyapunov(sys, X0)));

    // first step: nudge p1 to get a secant direction
    double h = 0.01;
    CurveVec X1 = X0;
    {
        bool ok = false;
        for (int tries = 0; tries < 12 && !ok; ++tries, h *= 0.5) {
            X1 = X0;
            X1.x[0] += direction * h * scale[0];
            ok = correct(sys, X1, 0, scale);
        }
        if (!ok) {
            curve.truncated_reason = "no continuation direction";
            return curve;
        }
        h *= 2.0;
    }
    curve.points.push_back(to_point(X1, curve_lyapunov(sys, X1)));

    CurveVec Xp = X0, Xc = X1;
    while (static_cast<int>(curve.points.size()) < arc_budget) {
        double tau[4], tn = 0.0;
        for (int i = 0; i < 4; ++i) {
            tau[i] = (Xc.x[i] - Xp.x[i]) / scale[i];
            tn += tau[i] * tau[i];
        }
        tn = std::sqrt(tn);
        if (tn == 0.0) break;
        for (double& t : tau) t /= tn;
        int dominant = 0;
        for (int i = 1; i < 4; ++i)
            if (std::abs(tau[i]) > std::abs(tau[dominant])) dominant = i;

        bool accepted = false;
        CurveVec Xn{};
        while (!accepted) {
            Xn = Xc;
            for (int i = 0; i < 4; ++i) Xn.x[i] += h * tau[i] * scale[i];
            if (correct(sys, Xn, dominant, scale)) {
                accepted = true;
            } else {
                h *= 0.5;
                if (h < 1e-8) {
                    curve.truncated_reason = "corrector divergence at step floor";
                    break;
                }
            }
        }
        if (!accepted) break;
        // keep parameters positive and meaningful
        try {
            sys.params_at(Xn).validate();
        } catch (const Error&) {
            curve.truncated_reason = "parameter left its validity range";
            break;
        }
        curve.points.push_back(to_point(Xn, curve_lyapunov(sys, Xn)));
        Xp = Xc;
        Xc = Xn;
        h = std::min(h * 1.3, 0.05);
    }

    // generalized Hopf points: bisect sign changes of L along the curve
    for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
        const double La = curve.points[i].lyapunov, Lb = curve.points[i + 1].lyapunov;
        if (!std::isfinite(La) || !std::isfinite(Lb) || La * Lb >= 0.0) continue;
        CurveVec A{}, B{};
        A.x[0] = curve.points[i].p1;
        A.x[1] = curve.points[i].equilibrium.u;
        A.x[2] = curve.points[i].equilibrium.v;
        A.x[3] = curve.points[i].p2;
        B.x[0] = curve.points[i + 1].p1;
        B.x[1] = curve.points[i + 1].equilibrium.u;
        B.x[2] = curve.points[i + 1].equilibrium.v;
        B.x[3] = curve.points[i + 1].p2;
        double LA = La;
        CurveVec mid{};
        double Lmid = LA;
        for (int it = 0; it < 60; ++it) {
            double tau[4];
            int dominant = 0;
            for (int j = 0; j < 4; ++j) {
                tau[j] = (B.x[j] - A.x[j]) / scale[j];
                if (std::abs(tau[j]) > std::abs(tau[dominant])) dominant = j;
            }
            mid = A;
            for (int j = 0; j < 4; ++j) mid.x[j] = 0.5 * (A.x[j] + B.x[j]);
            if (!correct(sys, mid, dominant, scale)) break;
            Lmid = curve_lyapunov(sys, mid);
            if (!std::isfinite(Lmid)) break;
            if (std::abs(Lmid) < 1e-6) break;
            if (LA * Lmid < 0.0)
                B = mid;
            else {
                A = mid;
                LA = Lmid;
            }
        }
        if (std::isfinite(Lmid) && std::abs(Lmid) < 1e-6)
            curve.gh_points.push_back(to_point(mid, Lmid));
    }
    return curve;
}

const char* to_string(Criticality c) {
    switch (c) {
    case Criticality::Supercritical: return "supercritical";
    case Criticality::Subcritical: return "subcritical";
    case Criticality::Undetermined: return "undetermined";
    }
    return "?";
}

const char* to_string(BifurcationKind k) {
    switch (k) {
    case BifurcationKind::SaddleNode: return "saddle-node";
    case BifurcationKind::Hopf: return "Hopf";
    case BifurcationKind::GeneralizedHopf: return "generalized-Hopf";
    }
    return "?";
}

} // namespace fearpp
