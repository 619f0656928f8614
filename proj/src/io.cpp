#include "fearpp/io.hpp"

#include <cstdio>
#include <fstream>

namespace fearpp::io {

std::string format_double(double x) {
    char buf[40];
    // shortest representation that round-trips
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        double back;
        std::sscanf(buf, "%lf", &back);
        if (back == x) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,u,v\n";
    for (const auto& s : traj.samples)
        out += format_double(s.t) + "," + format_double(s.u) + "," + format_double(s.v) + "\n";
    switch (traj.termination.kind) {
    case TerminationKind::HorizonReached:
        out += "# termination=HorizonReached\n";
        break;
    case TerminationKind::ConvergedTo:
        out += "# termination=ConvergedTo u=" + format_double(traj.termination.state.u) +
               " v=" + format_double(traj.termination.state.v) +
               " residual=" + format_double(traj.termination.residual) + "\n";
        break;
    case TerminationKind::PreyExtinct:
        out += "# termination=PreyExtinct t_e=" + format_double(traj.termination.extinction_time) +
               "\n";
        break;
    }
    return out;
}

nlohmann::json equilibrium_json(const Equilibrium& eq) {
    nlohmann::json j;
    j["u"] = eq.location.u;
    j["v"] = eq.location.v;
    j["kind"] = to_string(eq.kind);
    j["classification"] = to_string(eq.classification);
    if (eq.jac) {
        j["trace"] = eq.jac->trace();
        j["det"] = eq.jac->det();
    }
    if (eq.fold_degenerate) j["fold_degenerate"] = true;
    return j;
}

nlohmann::json equilibria_json(const std::vector<Equilibrium>& eqs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : eqs) arr.push_back(equilibrium_json(e));
    return arr;
}

nlohmann::json bifurcation_point_json(const BifurcationPoint& bp) {
    nlohmann::json j;
    j["param"] = bp.param_name;
    j["value"] = bp.param_value;
    j["kind"] = to_string(bp.kind);
    j["equilibrium"] = {{"u", bp.equilibrium.u}, {"v", bp.equilibrium.v}};
    if (bp.hopf) {
        nlohmann::json h;
        h["lyapunov"] = bp.hopf->lyapunov;
        if (bp.hopf->lyapunov_planar_expr) h["lyapunov_planar_expression"] = *bp.hopf->lyapunov_planar_expr;
        h["omega"] = bp.hopf->omega;
        h["criticality"] = to_string(bp.hopf->criticality);
        h["dS_dparam"] = bp.hopf->dS_dparam;
        h["transversal"] = bp.hopf->transversal;
        h["closed_form_residual"] = bp.hopf->closed_form_residual;
        if (bp.hopf->partial_dSdk_matches_closed_form)
            h["partial_dSdk_matches_closed_form"] = *bp.hopf->partial_dSdk_matches_closed_form;
        j["hopf"] = h;
    }
    if (bp.saddle_node) {
        nlohmann::json s;
        s["sotomayor_ok"] = bp.saddle_node->sotomayor_ok;
        s["det"] = bp.saddle_node->det;
        s["trace"] = bp.saddle_node->trace;
        s["bracket"] = {bp.saddle_node->bracket_lo, bp.saddle_node->bracket_hi};
        s["count_below"] = bp.saddle_node->count_below;
        s["count_above"] = bp.saddle_node->count_above;
        j["saddle_node"] = s;
    }
    return j;
}

nlohmann::json hopf_curve_json(const HopfCurve& curve) {
    nlohmann::json j;
    auto pt = [](const HopfCurvePoint& p) {
        return nlohmann::json{{"p1", p.p1},
                              {"p2", p.p2},
                              {"u", p.equilibrium.u},
                              {"v", p.equilibrium.v},
                              {"lyapunov", p.lyapunov}};
    };
    j["points"] = nlohmann::json::array();
    for (const auto& p : curve.points) j["points"].push_back(pt(p));
    j["gh_points"] = nlohmann::json::array();
    for (const auto& p : curve.gh_points) j["gh_points"].push_back(pt(p));
    if (curve.truncated_reason) j["truncated_reason"] = *curve.truncated_reason;
    return j;
}

std::string hopf_curve_csv(const HopfCurve& curve) {
    std::string out = "p1,p2,u,v,L\n";
    for (const auto& p : curve.points)
        out += format_double(p.p1) + "," + format_double(p.p2) + "," +
               format_double(p.equilibrium.u) + "," + format_double(p.equilibrium.v) + "," +
               format_double(p.lyapunov) + "\n";
    return out;
}

std::string separatrix_csv(const Separatrix& sep) {
    std::string out = "u,v\n";
    for (const auto& p : sep.polyline)
        out += format_double(p.u) + "," + format_double(p.v) + "\n";
    return out;
}

std::string orbit_csv(const Trajectory& traj) {
    std::string out = "u,v\n";
    for (const auto& s : traj.samples)
        out += format_double(s.u) + "," + format_double(s.v) + "\n";
    return out;
}

nlohmann::json homoclinic_bracket_json(const HomoclinicBracket& hb) {
    return nlohmann::json{
        {"param", hb.param_name}, {"lo", hb.lo}, {"hi", hb.hi}, {"evidence", hb.evidence}};
}

nlohmann::json params_json(const ModelParams& P) {
    return nlohmann::json{{"a", P.a}, {"b", P.b}, {"c", P.c}, {"d", P.d}, {"e", P.e},
                          {"k", P.k}, {"m", P.m}, {"p", P.p}, {"q", P.q}, {"r", P.r}};
}

ModelParams params_from_json(const nlohmann::json& j, const ModelParams& defaults) {
    ModelParams P = defaults;
    for (const auto& name : {"a", "b", "c", "d", "e", "k", "m", "p", "q", "r"})
        if (j.contains(name)) P.set(name, j.at(name).get<double>());
    return P;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open for writing: " + path);
    f << contents;
}

} // namespace fearpp::io
