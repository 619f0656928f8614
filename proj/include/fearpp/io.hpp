// CSV / JSON serialization of results. All floating-point output goes through
// one shortest-roundtrip formatter so identical runs produce byte-identical
// files regardless of worker count.

#ifndef FEARPP_IO_HPP
#define FEARPP_IO_HPP

#include <string>
#include <vector>

#include "json.hpp"

#include "fearpp/bifurcation.hpp"
#include "fearpp/dynamics.hpp"
#include "fearpp/equilibria.hpp"
#include "fearpp/manifolds.hpp"

namespace fearpp::io {

std::string format_double(double x);

// header `t,u,v`, one row per sample, trailing `# termination=...` comment
std::string trajectory_csv(const Trajectory& traj);

// {u, v, kind, classification, trace, det}; trace/det only for coexistence
nlohmann::json equilibrium_json(const Equilibrium& eq);
nlohmann::json equilibria_json(const std::vector<Equilibrium>& eqs);

nlohmann::json bifurcation_point_json(const BifurcationPoint& bp);

nlohmann::json hopf_curve_json(const HopfCurve& curve);
std::string hopf_curve_csv(const HopfCurve& curve); // p1,p2,u,v,L

std::string separatrix_csv(const Separatrix& sep);  // u,v
std::string orbit_csv(const Trajectory& traj);      // u,v

nlohmann::json homoclinic_bracket_json(const HomoclinicBracket& hb);

nlohmann::json params_json(const ModelParams& P);
ModelParams params_from_json(const nlohmann::json& j, const ModelParams& defaults = {});

void write_file(const std::string& path, const std::string& contents);

} // namespace fearpp::io

#endif
