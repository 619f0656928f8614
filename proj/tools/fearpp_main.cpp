// Command-line driver: simulate, equilibria, hopf, saddle-node, lyapunov,
// separatrix, homoclinic, sweep, reproduce. Every run writes its fully
// expanded configuration to effective_config.json so results can be
// re-derived byte-for-byte; every SVG has a CSV/JSON twin with the same data.
//
// Exit codes: 0 success, 2 numerical failure, 3 usage error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fearpp/bifurcation.hpp"
#include "fearpp/dynamics.hpp"
#include "fearpp/equilibria.hpp"
#include "fearpp/io.hpp"
#include "fearpp/manifolds.hpp"
#include "fearpp/model.hpp"
#include "fearpp/parallel.hpp"
#include "fearpp/presets.hpp"
#include "fearpp/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fearpp;

namespace {

struct RunContext {
    std::string out_dir = ".";
    std::string config_path;
    int threads = 0;
    std::uint64_t seed = 0;
    std::string preset;
    ModelParams params;
    IntegratorConfig integrator;
    json config; // parsed --config document (may be empty)

    fs::path out(const std::string& name) const { return fs::path(out_dir) / name; }
};

// defaults < preset < config file < explicit CLI values
void resolve_params(RunContext& ctx, const std::map<std::string, double>& cli_values) {
    if (!ctx.preset.empty()) ctx.params = preset_params(ctx.preset);
    if (ctx.config.contains("params"))
        ctx.params = io::params_from_json(ctx.config["params"], ctx.params);
    for (const auto& [name, value] : cli_values) ctx.params.set(name, value);
    ctx.params.validate();

    if (ctx.config.contains("integrator")) {
        const json& ji = ctx.config["integrator"];
        auto load = [&](const char* name, double& slot) {
            if (ji.contains(name)) slot = ji.at(name).get<double>();
        };
        load("rel_tol", ctx.integrator.rel_tol);
        load("abs_tol", ctx.integrator.abs_tol);
        load("h_init", ctx.integrator.h_init);
        load("h_min", ctx.integrator.h_min);
        load("h_max", ctx.integrator.h_max);
        load("extinction_threshold", ctx.integrator.extinction_threshold);
        load("convergence_tol", ctx.integrator.convergence_tol);
        load("t_end", ctx.integrator.t_end);
        load("cycle_tol", ctx.integrator.cycle_tol);
        if (ji.contains("convergence_window"))
            ctx.integrator.convergence_window = ji.at("convergence_window").get<int>();
    }
}

json integrator_json(const IntegratorConfig& c) {
    return json{{"rel_tol", c.rel_tol},
                {"abs_tol", c.abs_tol},
                {"h_init", c.h_init},
                {"h_min", c.h_min},
                {"h_max", c.h_max},
                {"extinction_threshold", c.extinction_threshold},
                {"convergence_tol", c.convergence_tol},
                {"convergence_window", c.convergence_window},
                {"t_end", c.t_end},
                {"cycle_tol", c.cycle_tol}};
}

void emit_effective_config(const RunContext& ctx, const std::string& command,
                           const json& command_opts) {
    json j;
    j["command"] = command;
    j["params"] = io::params_json(ctx.params);
    j["integrator"] = integrator_json(ctx.integrator);
    j["options"] = command_opts;
    j["threads"] = ctx.threads;
    j["seed"] = ctx.seed;
    if (!ctx.preset.empty()) j["preset"] = ctx.preset;
    io::write_file(ctx.out("effective_config.json").string(), j.dump(2) + "\n");
}

// --- nullcline sampling for phase portraits --------------------------------

std::vector<std::pair<double, double>> prey_nullcline_curve(const ModelParams& P, double u_max,
                                                            double v_max) {
    std::vector<std::pair<double, double>> pts;
    const int n = 240;
    for (int i = 1; i <= n; ++i) {
        const double u = u_max * i / double(n);
        // g1(u, v) is strictly decreasing in v; bisect the sign change
        auto g1 = [&](double v) {
            return P.a * fear_factor(P.k, v) - P.b * u -
                   P.c * std::pow(u, P.p - 1.0) * pow_pos(v, P.m);
        };
        double lo = 0.0, hi = v_max;
        if (g1(lo) < 0.0) continue; // no crossing on this line
        if (g1(hi) > 0.0) continue;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (g1(mid) > 0.0 ? lo : hi) = mid;
        }
        pts.emplace_back(u, 0.5 * (lo + hi));
    }
    return pts;
}

std::vector<std::pair<double, double>> predator_nullcline_curve(const ModelParams& P, double u_max,
                                                                double v_max) {
    std::vector<std::pair<double, double>> pts;
    const int n = 240;
    for (int i = 1; i <= n; ++i) {
        const double u = u_max * i / double(n);
        if (P.q == 0.0) {
            const double v = predator_nullcline_v(P, u);
            if (v <= v_max) pts.emplace_back(u, v);
            continue;
        }
        // scan for the g2 sign change (not monotone in v when r < 1)
        auto g2 = [&](double v) {
            return -P.d - P.q * std::pow(v, P.r - 1.0) +
                   P.e * std::pow(u, P.p) * std::pow(v, P.m - 1.0);
        };
        const int nv = 200;
        double prev_v = v_max * 1e-4, prev_g = g2(prev_v);
        for (int jv = 1; jv <= nv; ++jv) {
            const double v = v_max * 1e-4 + (v_max - v_max * 1e-4) * jv / double(nv);
            const double g = g2(v);
            if (std::isfinite(prev_g) && std::isfinite(g) && prev_g * g < 0.0) {
                double lo = prev_v, hi = v, glo = prev_g;
                for (int it = 0; it < 50; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double gm = g2(mid);
                    if (glo * gm <= 0.0)
                        hi = mid;
                    else {
                        lo = mid;
                        glo = gm;
                    }
                }
                pts.emplace_back(u, 0.5 * (lo + hi));
                break;
            }
            prev_v = v;
            prev_g = g;
        }
    }
    return pts;
}

void draw_equilibria(SvgPlot& plot, const std::vector<Equilibrium>& eqs) {
    for (const auto& eq : eqs) {
        const bool stable = eq.classification == Classification::StableNode ||
                            eq.classification == Classification::StableFocus;
        plot.circle(eq.location.u, eq.location.v, 4.0, stable ? "#202020" : "#c03030", stable);
    }
}

// --- subcommands ------------------------------------------------------------

int cmd_simulate(RunContext& ctx, double u0, double v0) {
    emit_effective_config(ctx, "simulate", json{{"u0", u0}, {"v0", v0}});
    Trajectory traj;
    try {
        traj = integrate(ctx.params, {u0, v0}, ctx.integrator);
    } catch (const StiffnessError& err) {
        json diag{{"error", "stiffness"}, {"message", err.what()},
                  {"t", err.t},           {"u", err.u},
                  {"v", err.v}};
        io::write_file(ctx.out("diagnostics.json").string(), diag.dump(2) + "\n");
        std::cerr << "integration failed: " << err.what() << "\n";
        return 2;
    } catch (const EvaluationError& err) {
        json diag{{"error", "evaluation"}, {"message", err.what()}};
        io::write_file(ctx.out("diagnostics.json").string(), diag.dump(2) + "\n");
        std::cerr << "integration failed: " << err.what() << "\n";
        return 2;
    }
    io::write_file(ctx.out("trajectory.csv").string(), io::trajectory_csv(traj));

    double u_max = 1e-9, v_max = 1e-9;
    for (const auto& s : traj.samples) {
        u_max = std::max(u_max, s.u);
        v_max = std::max(v_max, s.v);
    }
    u_max = std::max(u_max * 1.1, 1.2 * ctx.params.carrying_capacity());
    v_max *= 1.25;
    SvgPlot plot(0, u_max, 0, v_max, "u (prey)", "v (predator)");
    plot.polyline(prey_nullcline_curve(ctx.params, u_max, v_max), "#4878cf", true, 1.0);
    plot.polyline(predator_nullcline_curve(ctx.params, u_max, v_max), "#6acc65", true, 1.0);
    std::vector<std::pair<double, double>> orbit;
    orbit.reserve(traj.samples.size());
    for (const auto& s : traj.samples) orbit.emplace_back(s.u, s.v);
    plot.polyline(orbit, "#303030");
    plot.circle(u0, v0, 4.0, "#2a7a2a", true);
    draw_equilibria(plot, find_all(ctx.params));
    io::write_file(ctx.out("phase.svg").string(), plot.render());
    return 0;
}

int cmd_equilibria(RunContext& ctx) {
    emit_effective_config(ctx, "equilibria", json::object());
    auto scan = find_coexistence(ctx.params);
    auto all = find_all(ctx.params);
    json j;
    j["equilibria"] = io::equilibria_json(all);
    if (scan.warning) j["warning"] = *scan.warning;
    io::write_file(ctx.out("equilibria.json").string(), j.dump(2) + "\n");

    // nullcline geometry behind the equilibria
    double v_max = 1.0;
    for (const auto& eq : all) v_max = std::max(v_max, 2.5 * eq.location.v);
    const double u_max = 1.2 * ctx.params.carrying_capacity();
    SvgPlot plot(0, u_max, 0, v_max, "u (prey)", "v (predator)");
    plot.polyline(prey_nullcline_curve(ctx.params, u_max, v_max), "#4878cf", true, 1.0);
    plot.polyline(predator_nullcline_curve(ctx.params, u_max, v_max), "#6acc65", true, 1.0);
    draw_equilibria(plot, all);
    io::write_file(ctx.out("equilibria.svg").string(), plot.render());
    std::cout << j.dump(2) << "\n";
    return 0;
}

void branch_diagram(const RunContext& ctx, const std::string& param, Interval window,
                    const std::vector<BifurcationPoint>& marks, const std::string& svg_name,
                    const std::string& csv_name) {
    const int n = 320;
    std::string csv = param + ",u,v,classification\n";
    std::vector<std::vector<std::pair<double, double>>> stable_runs, unstable_runs;
    std::vector<std::pair<double, double>> cur_stable, cur_unstable;
    double u_max = 1e-9;
    for (int i = 0; i <= n; ++i) {
        const double val = window.lo + (window.hi - window.lo) * i / double(n);
        ModelParams Q = ctx.params;
        Q.set(param, val);
        auto eqs = find_coexistence(Q).equilibria;
        bool any_stable = false, any_unstable = false;
        for (const auto& eq : eqs) {
            csv += io::format_double(val) + "," + io::format_double(eq.location.u) + "," +
                   io::format_double(eq.location.v) + "," + to_string(eq.classification) + "\n";
            u_max = std::max(u_max, eq.location.u);
            const bool stable = eq.classification == Classification::StableNode ||
                                eq.classification == Classification::StableFocus;
            if (stable) {
                cur_stable.emplace_back(val, eq.location.u);
                any_stable = true;
            } else {
                cur_unstable.emplace_back(val, eq.location.u);
                any_unstable = true;
            }
        }
        if (!any_stable && !cur_stable.empty()) {
            stable_runs.push_back(std::move(cur_stable));
            cur_stable.clear();
        }
        if (!any_unstable && !cur_unstable.empty()) {
            unstable_runs.push_back(std::move(cur_unstable));
            cur_unstable.clear();
        }
    }
    if (!cur_stable.empty()) stable_runs.push_back(std::move(cur_stable));
    if (!cur_unstable.empty()) unstable_runs.push_back(std::move(cur_unstable));

    SvgPlot plot(window.lo, window.hi, 0, u_max * 1.15, param, "u*");
    for (const auto& run : stable_runs) plot.polyline(run, "#303030", false);
    for (const auto& run : unstable_runs) plot.polyline(run, "#c03030", true);
    for (const auto& bp : marks) {
        plot.circle(bp.param_value, bp.equilibrium.u, 5.0, "#4878cf", true);
        plot.text(bp.param_value, bp.equilibrium.u * 1.05,
                  bp.kind == BifurcationKind::Hopf ? "H" : "SN");
    }
    io::write_file(ctx.out(svg_name).string(), plot.render());
    io::write_file(ctx.out(csv_name).string(), csv);
}

int cmd_hopf(RunContext& ctx, const std::string& param, double lo, double hi) {
    emit_effective_config(ctx, "hopf", json{{"param", param}, {"lo", lo}, {"hi", hi}});
    HopfSearch hs = find_hopf(ctx.params, param, {lo, hi});
    json arr = json::array();
    for (const auto& bp : hs.points) arr.push_back(io::bifurcation_point_json(bp));
    json j;
    j["hopf_points"] = arr;
    if (hs.warning) j["warning"] = *hs.warning;
    io::write_file(ctx.out("hopf.json").string(), j.dump(2) + "\n");
    branch_diagram(ctx, param, {lo, hi}, hs.points, "bifurcation.svg", "branch.csv");
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_saddle_node(RunContext& ctx, const std::string& param, double lo, double hi) {
    emit_effective_config(ctx, "saddle-node", json{{"param", param}, {"lo", lo}, {"hi", hi}});
    auto folds = find_saddle_node(ctx.params, param, {lo, hi});
    json arr = json::array();
    for (const auto& bp : folds) arr.push_back(io::bifurcation_point_json(bp));
    json j;
    j["saddle_node_points"] = arr;
    io::write_file(ctx.out("saddle_node.json").string(), j.dump(2) + "\n");
    branch_diagram(ctx, param, {lo, hi}, folds, "bifurcation.svg", "branch.csv");
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_lyapunov(RunContext& ctx) {
    emit_effective_config(ctx, "lyapunov", json::object());
    auto eqs = find_coexistence(ctx.params).equilibria;
    for (const auto& eq : eqs) {
        try {
            json j;
            j["equilibrium"] = {{"u", eq.location.u}, {"v", eq.location.v}};
            const double l_nf = first_lyapunov_normal_form(ctx.params, eq.location);
            j["lyapunov"] = l_nf;
            if (ctx.params.q == 0.0)
                j["lyapunov_planar_expression"] = first_lyapunov(ctx.params, eq.location);
            j["criticality"] = l_nf < 0 ? "supercritical" : "subcritical";
            io::write_file(ctx.out("lyapunov.json").string(), j.dump(2) + "\n");
            std::cout << j.dump(2) << "\n";
            return 0;
        } catch (const NotAHopfError&) {
            continue; // not a Hopf candidate; try the next equilibrium
        }
    }
    std::cerr << "no Hopf-candidate coexistence equilibrium (|trace| must be < 1e-7)\n";
    return 2;
}

int cmd_separatrix(RunContext& ctx) {
    emit_effective_config(ctx, "separatrix", json::object());
    ProbeConfig cfg;
    cfg.integrator = ctx.integrator;
    Separatrix sep = separatrix(ctx.params, cfg);
    io::write_file(ctx.out("separatrix.csv").string(), io::separatrix_csv(sep));

    Trajectory wu = unstable_set(ctx.params, ctx.integrator);
    io::write_file(ctx.out("unstable_set.csv").string(), io::orbit_csv(wu));

    double u_max = 1.2 * ctx.params.carrying_capacity(), v_max = 1e-9;
    for (const auto& p : sep.polyline) v_max = std::max(v_max, p.v);
    for (const auto& s : wu.samples) v_max = std::max(v_max, s.v);
    SvgPlot plot(0, u_max, 0, v_max * 1.2, "u (prey)", "v (predator)");
    std::vector<std::pair<double, double>> sep_pts, wu_pts;
    for (const auto& p : sep.polyline) sep_pts.emplace_back(p.u, p.v);
    for (const auto& s : wu.samples) wu_pts.emplace_back(s.u, s.v);
    plot.polyline(sep_pts, "#4878cf");
    plot.polyline(wu_pts, "#d65f5f");
    draw_equilibria(plot, find_all(ctx.params));
    io::write_file(ctx.out("separatrix.svg").string(), plot.render());
    return 0;
}

int cmd_homoclinic(RunContext& ctx, const std::string& param, double lo, double hi, int depth) {
    emit_effective_config(ctx, "homoclinic",
                          json{{"param", param}, {"lo", lo}, {"hi", hi}, {"depth", depth}});
    ProbeConfig cfg;
    cfg.integrator = ctx.integrator;
    HomoclinicBracket hb = homoclinic_bracket(ctx.params, param, lo, hi, depth, cfg);
    json j = io::homoclinic_bracket_json(hb);
    io::write_file(ctx.out("homoclinic.json").string(), j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_hopf_curve(RunContext& ctx, const std::string& p1, double lo, double hi,
                   const std::string& p2, int budget) {
    emit_effective_config(ctx, "hopf-curve",
                          json{{"param", p1}, {"lo", lo}, {"hi", hi}, {"p2", p2},
                               {"budget", budget}});
    HopfSearch hs = find_hopf(ctx.params, p1, {lo, hi});
    if (hs.points.empty()) {
        io::write_file(ctx.out("curve.json").string(),
                       json{{"points", json::array()}, {"gh_points", json::array()}}.dump(2) +
                           "\n");
        io::write_file(ctx.out("curve.csv").string(), "p1,p2,u,v,L\n");
        std::cout << "no seed Hopf point in the window\n";
        return 0;
    }
    // continue both ways from the seed and join the halves
    HopfCurve back = trace_hopf_curve(ctx.params, p1, p2, hs.points[0], budget, -1);
    HopfCurve fwd = trace_hopf_curve(ctx.params, p1, p2, hs.points[0], budget, +1);
    HopfCurve curve;
    curve.points.assign(back.points.rbegin(), back.points.rend());
    curve.points.insert(curve.points.end(), fwd.points.begin() + 1, fwd.points.end());
    curve.gh_points = back.gh_points;
    curve.gh_points.insert(curve.gh_points.end(), fwd.gh_points.begin(), fwd.gh_points.end());
    if (fwd.truncated_reason) curve.truncated_reason = fwd.truncated_reason;

    io::write_file(ctx.out("curve.json").string(), io::hopf_curve_json(curve).dump(2) + "\n");
    io::write_file(ctx.out("curve.csv").string(), io::hopf_curve_csv(curve));

    double x0 = 1e18, x1 = -1e18, y0 = 1e18, y1 = -1e18;
    for (const auto& pt : curve.points) {
        x0 = std::min(x0, pt.p1);
        x1 = std::max(x1, pt.p1);
        y0 = std::min(y0, pt.p2);
        y1 = std::max(y1, pt.p2);
    }
    SvgPlot plot(x0, x1, y0, y1, p1, p2);
    std::vector<std::pair<double, double>> sub, super;
    auto flush_run = [&](std::vector<std::pair<double, double>>& run, bool subcritical) {
        plot.polyline(run, subcritical ? "#d65f5f" : "#4878cf", subcritical);
        run.clear();
    };
    bool prev_sub = true;
    std::vector<std::pair<double, double>> run;
    for (const auto& pt : curve.points) {
        const bool sub_here = pt.lyapunov > 0;
        if (!run.empty() && sub_here != prev_sub) flush_run(run, prev_sub);
        run.emplace_back(pt.p1, pt.p2);
        prev_sub = sub_here;
    }
    if (!run.empty()) flush_run(run, prev_sub);
    for (const auto& gh : curve.gh_points) {
        plot.circle(gh.p1, gh.p2, 5.0, "#303030", true);
        plot.text(gh.p1, gh.p2, "GH");
    }
    io::write_file(ctx.out("curve.svg").string(), plot.render());
    std::cout << "curve points: " << curve.points.size() << ", GH points: " << curve.gh_points.size()
              << "\n";
    return 0;
}

int cmd_sweep(RunContext& ctx, const std::string& p1, double lo1, double hi1, int n1,
              const std::string& p2, double lo2, double hi2, int n2, double u0, double v0,
              const std::string& mode) {
    if (mode != "outcome" && mode != "equilibria")
        throw UsageError("sweep --mode must be 'outcome' or 'equilibria'");
    emit_effective_config(ctx, "sweep",
                          json{{"p1", p1},
                               {"p1_range", {lo1, hi1}},
                               {"p1_steps", n1},
                               {"p2", p2},
                               {"p2_range", {lo2, hi2}},
                               {"p2_steps", n2},
                               {"u0", u0},
                               {"v0", v0},
                               {"mode", mode}});
    const int total = n1 * n2;
    std::vector<std::string> classes(total);
    par::for_each_index(static_cast<std::size_t>(total), [&](std::size_t idx) {
        const int i = static_cast<int>(idx) % n1;
        const int jj = static_cast<int>(idx) / n1;
        ModelParams Q = ctx.params;
        Q.set(p1, lo1 + (hi1 - lo1) * (i + 0.5) / n1);
        Q.set(p2, lo2 + (hi2 - lo2) * (jj + 0.5) / n2);
        try {
            if (mode == "outcome") {
                Outcome oc = classify_outcome(Q, {u0, v0}, ctx.integrator);
                classes[idx] = to_string(oc.kind);
            } else {
                auto eqs = find_coexistence(Q).equilibria;
                if (eqs.empty())
                    classes[idx] = "eq0";
                else
                    classes[idx] = "eq" + std::to_string(eqs.size()) + ":" +
                                   to_string(eqs.back().classification);
            }
        } catch (const Error&) {
            classes[idx] = "Failed";
        }
    });

    std::string csv = "p1,p2,class\n";
    std::map<std::string, int> class_ids;
    SvgPlot plot(lo1, hi1, lo2, hi2, p1, p2);
    for (int jj = 0; jj < n2; ++jj) {
        for (int i = 0; i < n1; ++i) {
            const double x = lo1 + (hi1 - lo1) * (i + 0.5) / n1;
            const double y = lo2 + (hi2 - lo2) * (jj + 0.5) / n2;
            const std::string& cls = classes[jj * n1 + i];
            csv += io::format_double(x) + "," + io::format_double(y) + "," + cls + "\n";
            auto [it, _] = class_ids.try_emplace(cls, static_cast<int>(class_ids.size()));
            plot.cell(x, y, (hi1 - lo1) / n1, (hi2 - lo2) / n2, class_color(it->second));
        }
    }
    io::write_file(ctx.out("sweep.csv").string(), csv);
    io::write_file(ctx.out("sweep.svg").string(), plot.render());
    return 0;
}

int cmd_reproduce(RunContext& ctx, const std::string& id) {
    if (!is_preset(id)) {
        std::cerr << "unknown preset id: " << id << "\n";
        return 3;
    }
    ctx.preset = id;
    ctx.params = preset_params(id);
    emit_effective_config(ctx, "reproduce", json{{"figure", id}});
    ReproduceReport rep = reproduce(id);
    json arr = json::array();
    for (const auto& c : rep.checks)
        arr.push_back(json{{"check", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    json j{{"figure", rep.figure_id}, {"checks", arr}, {"all_pass", rep.all_pass()}};
    io::write_file(ctx.out("report.json").string(), j.dump(2) + "\n");
    for (const auto& c : rep.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << id << ":" << c.name << "  (" << c.detail
                  << ")\n";
    return rep.all_pass() ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical toolkit for a fear/herd/interference predator-prey model"};
    app.require_subcommand(1);

    RunContext ctx;
    app.add_option("--config", ctx.config_path, "JSON config document");
    app.add_option("--out", ctx.out_dir, "output directory");
    app.add_option("--threads", ctx.threads, "worker threads (0 = auto, 1 = serial)");
    app.add_option("--seed", ctx.seed, "seed for randomized probing order");

    std::map<std::string, double> cli_params;
    auto add_param_opts = [&](CLI::App* sub) {
        sub->add_option("--preset", ctx.preset, "load a bundled figure preset");
        for (const char* name : {"a", "b", "c", "d", "e", "k", "m", "p", "q", "r"})
            sub->add_option_function<double>(
                std::string("--") + name,
                [&cli_params, name = std::string(name)](double v) { cli_params[name] = v; },
                "model parameter " + std::string(name));
        sub->add_option_function<double>(
            "--t-end", [&](double v) { ctx.integrator.t_end = v; }, "integration horizon");
    };

    // simulate
    double u0 = 1.0, v0 = 1.0;
    auto* sim = app.add_subcommand("simulate", "integrate one trajectory");
    add_param_opts(sim);
    sim->add_option("--u0", u0, "initial prey density");
    sim->add_option("--v0", v0, "initial predator density");

    auto* eq = app.add_subcommand("equilibria", "locate and classify equilibria");
    add_param_opts(eq);

    std::string bif_param = "k";
    double bif_lo = 0.0, bif_hi = 1.0;
    auto* hopf = app.add_subcommand("hopf", "locate Hopf bifurcations in one parameter");
    add_param_opts(hopf);
    hopf->add_option("--param", bif_param, "bifurcation parameter name");
    hopf->add_option("--lo", bif_lo, "interval lower end");
    hopf->add_option("--hi", bif_hi, "interval upper end");

    auto* sn = app.add_subcommand("saddle-node", "locate folds of the equilibrium count");
    add_param_opts(sn);
    sn->add_option("--param", bif_param, "bifurcation parameter name");
    sn->add_option("--lo", bif_lo, "interval lower end");
    sn->add_option("--hi", bif_hi, "interval upper end");

    auto* lyap = app.add_subcommand("lyapunov", "first Lyapunov coefficient at a Hopf candidate");
    add_param_opts(lyap);

    auto* sep = app.add_subcommand("separatrix", "extinction/coexistence basin boundary");
    add_param_opts(sep);

    int depth = 10;
    auto* homo = app.add_subcommand("homoclinic", "bracket a homoclinic parameter value");
    add_param_opts(homo);
    homo->add_option("--param", bif_param, "bifurcation parameter name");
    homo->add_option("--lo", bif_lo, "interval lower end");
    homo->add_option("--hi", bif_hi, "interval upper end");
    homo->add_option("--depth", depth, "bisection depth");

    std::string p2_name = "q";
    double lo2 = 0.0, hi2 = 1.0;
    int steps1 = 32, steps2 = 32;
    int curve_budget = 120;
    auto* hcurve = app.add_subcommand("hopf-curve",
                                      "two-parameter continuation of the Hopf locus");
    add_param_opts(hcurve);
    hcurve->add_option("--param", bif_param, "seed parameter (Hopf located in this one)");
    hcurve->add_option("--lo", bif_lo, "seed search interval lower end");
    hcurve->add_option("--hi", bif_hi, "seed search interval upper end");
    hcurve->add_option("--p2", p2_name, "second continuation parameter");
    hcurve->add_option("--budget", curve_budget, "points per continuation direction");

    auto* sweep = app.add_subcommand("sweep", "classify outcomes over a 2-D parameter grid");
    add_param_opts(sweep);
    sweep->add_option("--p1", bif_param, "first grid parameter");
    sweep->add_option("--p1-lo", bif_lo, "p1 lower end");
    sweep->add_option("--p1-hi", bif_hi, "p1 upper end");
    sweep->add_option("--p1-steps", steps1, "p1 grid cells");
    sweep->add_option("--p2", p2_name, "second grid parameter");
    sweep->add_option("--p2-lo", lo2, "p2 lower end");
    sweep->add_option("--p2-hi", hi2, "p2 upper end");
    sweep->add_option("--p2-steps", steps2, "p2 grid cells");
    sweep->add_option("--u0", u0, "probe initial prey density");
    sweep->add_option("--v0", v0, "probe initial predator density");
    std::string sweep_mode = "outcome";
    sweep->add_option("--mode", sweep_mode, "cell classifier: outcome | equilibria");

    std::string figure_id;
    auto* rep = app.add_subcommand("reproduce", "run a bundled preset and verify its expectations");
    rep->add_option("figure", figure_id, "preset id (fig2, fig3a, ...)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 3;
    }

    try {
        fs::create_directories(ctx.out_dir);
        if (!ctx.config_path.empty()) {
            std::ifstream f(ctx.config_path);
            if (!f) throw UsageError("cannot read config: " + ctx.config_path);
            f >> ctx.config;
        }
        if (ctx.threads == 1)
            par::default_mode() = par::Mode::Serial;
        else
            par::default_threads() = ctx.threads;

        if (app.got_subcommand("reproduce")) return cmd_reproduce(ctx, figure_id);

        resolve_params(ctx, cli_params);
        if (app.got_subcommand("simulate")) return cmd_simulate(ctx, u0, v0);
        if (app.got_subcommand("equilibria")) return cmd_equilibria(ctx);
        if (app.got_subcommand("hopf")) return cmd_hopf(ctx, bif_param, bif_lo, bif_hi);
        if (app.got_subcommand("saddle-node")) return cmd_saddle_node(ctx, bif_param, bif_lo, bif_hi);
        if (app.got_subcommand("lyapunov")) return cmd_lyapunov(ctx);
        if (app.got_subcommand("separatrix")) return cmd_separatrix(ctx);
        if (app.got_subcommand("homoclinic"))
            return cmd_homoclinic(ctx, bif_param, bif_lo, bif_hi, depth);
        if (app.got_subcommand("hopf-curve"))
            return cmd_hopf_curve(ctx, bif_param, bif_lo, bif_hi, p2_name, curve_budget);
        if (app.got_subcommand("sweep"))
            return cmd_sweep(ctx, bif_param, bif_lo, bif_hi, steps1, p2_name, lo2, hi2, steps2, u0,
                             v0, sweep_mode);
        std::cerr << "no subcommand\n";
        return 3;
    } catch (const UsageError& err) {
        std::cerr << "usage error: " << err.what() << "\n";
        return 3;
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
}
