#include "fearpp/presets.hpp"

#include <cmath>
#include <sstream>

#include "fearpp/bifurcation.hpp"
#include "fearpp/dynamics.hpp"

namespace fearpp {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(8);
    os << v;
    return os.str();
}

CheckResult check_abs(const std::string& name, double computed, double expected, double tol) {
    CheckResult c;
    c.name = name;
    c.pass = std::isfinite(computed) && std::abs(computed - expected) <= tol;
    c.detail = "expected " + fmt(expected) + " +/- " + fmt(tol) + ", computed " + fmt(computed);
    return c;
}

CheckResult check_that(const std::string& name, bool ok, const std::string& detail) {
    return CheckResult{name, detail, ok};
}

// m=0.4 a=2.5 b=0.3 p=0.2 d=2 c=2.5 e=2.5 family (saddle-node and extinction
// demonstrations); k varies per experiment
ModelParams family_sn() {
    ModelParams P;
    P.m = 0.4;
    P.a = 2.5;
    P.b = 0.3;
    P.p = 0.2;
    P.d = 2.0;
    P.c = 2.5;
    P.e = 2.5;
    P.k = 0.0;
    return P;
}

ModelParams family_hopf_a() {
    ModelParams P;
    P.m = 0.9;
    P.a = 2.5;
    P.k = 10.0;
    P.b = 0.3;
    P.p = 0.5;
    P.d = 2.0;
    P.c = 2.5;
    P.e = 2.5;
    return P;
}

// The published caption prints d=0.9, but the printed Hopf data (critical
// value, equilibrium) satisfy the model only with d=0.7: the printed
// equilibrium lies on the predator nullcline for d=0.7 to 5 decimals and the
// trace vanishes there at the printed parameter value. d=0.7 is bundled.
ModelParams family_hopf_b() {
    ModelParams P;
    P.m = 0.6;
    P.a = 2.0;
    P.b = 0.2;
    P.p = 0.4;
    P.d = 0.7;
    P.c = 1.0;
    P.e = 0.8;
    P.k = 0.0;
    return P;
}

ModelParams family_homoclinic_k() {
    ModelParams P;
    P.m = 0.7;
    P.a = 3.0;
    P.b = 0.3;
    P.p = 0.6;
    P.d = 0.75;
    P.c = 1.0;
    P.e = 0.8;
    P.k = 0.0;
    return P;
}

// harvesting example family: m=0.6 a=3 k=0.08 b=0.2 p=0.5 d=1 c=2 e=1.1 r=1
ModelParams family_harvest() {
    ModelParams P;
    P.m = 0.6;
    P.a = 3.0;
    P.k = 0.08;
    P.b = 0.2;
    P.p = 0.5;
    P.d = 1.0;
    P.c = 2.0;
    P.e = 1.1;
    P.r = 1.0;
    P.q = 0.0;
    return P;
}

// The appendix fold values are reproduced with the fear strength fixed at
// k=0.01 (the caption leaves k unstated; 0.01 matches all three published
// fold locations to five significant digits).
ModelParams family_sn_appendix() {
    ModelParams P = family_sn();
    P.k = 0.01;
    return P;
}

void hopf_checks(ReproduceReport& rep, const ModelParams& P, const std::string& param,
                 Interval window, double expect_value, double tol_value, State expect_eq,
                 double tol_eq, int expect_sign_dS) {
    HopfSearch hs = find_hopf(P, param, window);
    if (hs.points.empty()) {
        rep.checks.push_back(
            check_that(param + "_hopf_found", false, "no Hopf point located in the window"));
        return;
    }
    const BifurcationPoint& bp = hs.points.front();
    rep.checks.push_back(check_abs(param + "_h", bp.param_value, expect_value, tol_value));
    rep.checks.push_back(check_abs("equilibrium_u", bp.equilibrium.u, expect_eq.u, tol_eq));
    rep.checks.push_back(check_abs("equilibrium_v", bp.equilibrium.v, expect_eq.v, tol_eq));
    rep.checks.push_back(check_that("lyapunov_positive", bp.hopf->lyapunov > 0.0,
                                    "first Lyapunov coefficient = " + fmt(bp.hopf->lyapunov)));
    const bool flip_ok = expect_sign_dS > 0 ? bp.hopf->dS_dparam > 0 : bp.hopf->dS_dparam < 0;
    rep.checks.push_back(check_that(
        "stability_flip",
        bp.hopf->transversal && flip_ok,
        std::string("dS/d") + param + " = " + fmt(bp.hopf->dS_dparam) + ", expected sign " +
            (expect_sign_dS > 0 ? "+ (stable below, unstable above)"
                                : "- (unstable below, stable above)")));
}

void saddle_node_checks(ReproduceReport& rep, const ModelParams& P, const std::string& param,
                        Interval window, double expect_value, double tol) {
    auto folds = find_saddle_node(P, param, window);
    if (folds.empty()) {
        rep.checks.push_back(
            check_that(param + "_s_found", false, "no fold located in the window"));
        return;
    }
    const BifurcationPoint& bp = folds.front();
    rep.checks.push_back(check_abs(param + "_s", bp.param_value, expect_value, tol));
    const int lo_count = std::max(bp.saddle_node->count_below, bp.saddle_node->count_above);
    const int hi_count = std::min(bp.saddle_node->count_below, bp.saddle_node->count_above);
    rep.checks.push_back(check_that("count_change_2_to_0", lo_count == 2 && hi_count == 0,
                                    "counts across the fold: " +
                                        std::to_string(bp.saddle_node->count_below) + " -> " +
                                        std::to_string(bp.saddle_node->count_above)));
    rep.checks.push_back(check_that("sotomayor_ok", bp.saddle_node->sotomayor_ok,
                                    "nondegeneracy products nonzero at the fold"));
}

} // namespace

std::vector<std::string> preset_ids() {
    return {"fig2", "fig3a", "fig3b", "fig5", "fig6", "fig7", "fig8", "fig9b", "fig9c", "fig9d"};
}

bool is_preset(const std::string& id) {
    for (const auto& s : preset_ids())
        if (s == id) return true;
    return false;
}

ModelParams preset_params(const std::string& id) {
    if (id == "fig2") return family_sn();
    if (id == "fig3a") return family_hopf_a();
    if (id == "fig3b") return family_hopf_b();
    if (id == "fig5") return family_homoclinic_k();
    if (id == "fig6") return family_sn();
    if (id == "fig7") return family_harvest();
    if (id == "fig8") return family_harvest();
    if (id == "fig9b" || id == "fig9c" || id == "fig9d") return family_sn_appendix();
    throw UsageError("unknown preset id: " + id);
}

ReproduceReport reproduce(const std::string& id) {
    ReproduceReport rep;
    rep.figure_id = id;

    if (id == "fig2") {
        saddle_node_checks(rep, family_sn(), "k", {0.0, 0.08}, 0.042859, 1e-3);
    } else if (id == "fig3a") {
        hopf_checks(rep, family_hopf_a(), "k", {14.0, 16.0}, 15.093353, 1e-3,
                    {0.43392, 0.14327}, 1e-3, -1);
    } else if (id == "fig3b") {
        hopf_checks(rep, family_hopf_b(), "k", {0.01, 0.12}, 0.061382, 1e-4,
                    {2.26530, 3.16304}, 1e-3, +1);
    } else if (id == "fig5") {
        ModelParams P = family_homoclinic_k();
        ManifoldOffset off = manifold_offset(P); // k = 0
        rep.checks.push_back(check_that("ordering_k0_stable_below_unstable", off.sigma > 0.0,
                                        "sigma = " + fmt(off.sigma) +
                                            " (positive = stable set below unstable set)"));
        try {
            HomoclinicBracket hb = homoclinic_bracket(P, "k", 1.548, 1.563, 6);
            rep.checks.push_back(check_that("k_homoclinic_bracket",
                                            hb.lo >= 1.548 && hb.hi <= 1.563 && hb.lo < hb.hi,
                                            "bracket [" + fmt(hb.lo) + ", " + fmt(hb.hi) + "]"));
        } catch (const Error& err) {
            rep.checks.push_back(check_that("k_homoclinic_bracket", false, err.what()));
        }
    } else if (id == "fig6") {
        const ModelParams base = family_sn();
        IntegratorConfig cfg;
        cfg.t_end = 2000.0;
        {
            Outcome oc = classify_outcome(base, {4.8, 8.3}, cfg);
            rep.checks.push_back(check_that("no_fear_coexists", oc.kind == OutcomeKind::Coexistence,
                                            std::string("outcome = ") + to_string(oc.kind)));
        }
        {
            ModelParams P = base;
            P.k = 0.03;
            Trajectory traj = integrate(P, {4.8, 8.3}, cfg);
            const bool extinct = traj.termination.kind == TerminationKind::PreyExtinct;
            const double te = traj.termination.extinction_time;
            rep.checks.push_back(check_that("fear_extinguishes_prey",
                                            extinct && te > 0 && te < cfg.t_end,
                                            "t_e = " + fmt(te)));
            // post-extinction predator decay against the closed form, compared
            // while the reference sits well above the numerical clamp at zero
            double worst = 0.0;
            bool any = false;
            double v_e = 0.0;
            for (const auto& s : traj.samples) {
                if (s.t < te) continue;
                if (!any) {
                    v_e = s.v;
                    any = true;
                    continue;
                }
                const double ref = v_e * std::exp(-P.d * (s.t - te));
                if (ref > 1e3 * cfg.extinction_threshold)
                    worst = std::max(worst, std::abs(s.v - ref) / ref);
            }
            rep.checks.push_back(check_that("prey_free_decay_matches_closed_form",
                                            extinct && any && worst < 1e-6,
                                            "max relative deviation = " + fmt(worst)));
        }
    } else if (id == "fig7") {
        ModelParams P = family_harvest();
        HopfSearch hs = find_hopf(P, "q", {0.05, 0.9});
        if (hs.points.empty()) {
            rep.checks.push_back(check_that("q_hopf_found", false, "no Hopf point in the window"));
        } else {
            const BifurcationPoint& bp = hs.points.front();
            rep.checks.push_back(check_abs("q_h", bp.param_value, 0.27068, 1e-3));
            rep.checks.push_back(check_abs("equilibrium_u", bp.equilibrium.u, 2.54542, 1e-3));
            rep.checks.push_back(check_abs("equilibrium_v", bp.equilibrium.v, 2.24175, 1e-3));
            rep.checks.push_back(
                check_abs("det", bp.hopf->omega * bp.hopf->omega, 0.29264, 1e-3));
            rep.checks.push_back(check_that("dS_dq_negative",
                                            bp.hopf->transversal && bp.hopf->dS_dparam < 0.0,
                                            "dS/dq = " + fmt(bp.hopf->dS_dparam)));
            rep.checks.push_back(check_that("lyapunov_positive", bp.hopf->lyapunov > 0.0,
                                            "normal-form L = " + fmt(bp.hopf->lyapunov)));
            rep.checks.push_back(
                check_that("subcritical", bp.hopf->criticality == Criticality::Subcritical,
                           std::string("empirical criticality = ") +
                               to_string(bp.hopf->criticality)));
        }
    } else if (id == "fig8") {
        ModelParams P = family_harvest();
        {
            ModelParams Q = P;
            Q.q = 0.0;
            ManifoldOffset off = manifold_offset(Q);
            rep.checks.push_back(check_that("ordering_q0_stable_below_unstable", off.sigma > 0.0,
                                            "sigma = " + fmt(off.sigma)));
        }
        {
            ModelParams Q = P;
            Q.q = 1.0;
            ManifoldOffset off = manifold_offset(Q);
            rep.checks.push_back(check_that("ordering_q1_stable_above_unstable", off.sigma < 0.0,
                                            "sigma = " + fmt(off.sigma)));
        }
        try {
            HomoclinicBracket hb = homoclinic_bracket(P, "q", 0.321, 0.323, 6);
            rep.checks.push_back(check_that("q_homoclinic_bracket",
                                            hb.lo >= 0.321 && hb.hi <= 0.323 && hb.lo < hb.hi,
                                            "bracket [" + fmt(hb.lo) + ", " + fmt(hb.hi) + "]"));
        } catch (const Error& err) {
            rep.checks.push_back(check_that("q_homoclinic_bracket", false, err.what()));
        }
    } else if (id == "fig9b") {
        saddle_node_checks(rep, family_sn_appendix(), "b", {0.30, 0.50}, 0.35355, 1e-3);
    } else if (id == "fig9c") {
        saddle_node_checks(rep, family_sn_appendix(), "c", {2.50, 3.20}, 2.78413, 1e-3);
    } else if (id == "fig9d") {
        saddle_node_checks(rep, family_sn_appendix(), "d", {1.50, 2.00}, 1.72647, 1e-3);
    } else {
        throw UsageError("unknown preset id: " + id);
    }
    return rep;
}

} // namespace fearpp
