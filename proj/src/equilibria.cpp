#include "fearpp/equilibria.hpp"

#include <algorithm>
#include <cmath>

#include "fearpp/parallel.hpp"

namespace fearpp {

double predator_nullcline_v(const ModelParams& P, double u) {
    if (P.m >= 1.0)
        throw UsageError("predator_nullcline_v: m = 1 gives a vertical nullcline (unsupported)");
    if (P.q != 0.0)
        throw UsageError("predator_nullcline_v: closed form exists only for q = 0");
    if (u < 0.0) throw UsageError("predator_nullcline_v: u must be >= 0");
    if (u == 0.0) return 0.0;
    return std::pow((P.e / P.d) * std::pow(u, P.p), 1.0 / (1.0 - P.m));
}

double coexistence_residual(const ModelParams& P, double u) {
    if (u <= 0.0) throw SingularityError("coexistence_residual: u^{p-1} is unbounded at u = 0");
    const double v = predator_nullcline_v(P, u);
    return P.a * fear_factor(P.k, v) - P.b * u - P.c * std::pow(u, P.p - 1.0) * pow_pos(v, P.m);
}

namespace {

Equilibrium make_coexistence(const ModelParams& P, double u, double v, bool degenerate = false) {
    Equilibrium eq;
    eq.location = {u, v};
    eq.kind = EquilibriumKind::Coexistence;
    eq.jac = jacobian(P, eq.location, JacobianMode::CoexistenceSimplified);
    eq.classification = classify(P, eq.location);
    eq.fold_degenerate = degenerate;
    return eq;
}

double polish_newton(const ModelParams& P, double u, double lo, double hi) {
    for (int it = 0; it < 12; ++it) {
        const double f = coexistence_residual(P, u);
        if (std::abs(f) < 1e-13) break;
        const double h = std::max(1e-9 * u, 1e-14);
        const double fp = (coexistence_residual(P, u + h) - coexistence_residual(P, u - h)) / (2 * h);
        if (fp == 0.0) break;
        double un = u - f / fp;
        if (!(un > lo && un < hi)) break;
        u = un;
    }
    return u;
}

// Full 2-D nullcline system and its Jacobian, valid for any q >= 0.
struct G2 {
    double g1, g2;
};
G2 nullcline_system(const ModelParams& P, double u, double v) {
    G2 g;
    g.g1 = P.a * fear_factor(P.k, v) - P.b * u - P.c * std::pow(u, P.p - 1.0) * std::pow(v, P.m);
    g.g2 = -P.d - P.q * std::pow(v, P.r - 1.0) + P.e * std::pow(u, P.p) * std::pow(v, P.m - 1.0);
    return g;
}

void nullcline_jacobian(const ModelParams& P, double u, double v, double J[2][2]) {
    const double phi = fear_factor(P.k, v);
    J[0][0] = -P.b - P.c * (P.p - 1.0) * std::pow(u, P.p - 2.0) * std::pow(v, P.m);
    J[0][1] = -P.a * P.k * phi * phi - P.c * P.m * std::pow(u, P.p - 1.0) * std::pow(v, P.m - 1.0);
    J[1][0] = P.e * P.p * std::pow(u, P.p - 1.0) * std::pow(v, P.m - 1.0);
    J[1][1] = -P.q * (P.r - 1.0) * std::pow(v, P.r - 2.0) +
              P.e * (P.m - 1.0) * std::pow(u, P.p) * std::pow(v, P.m - 2.0);
}

bool newton_refine(const ModelParams& P, double& u, double& v) {
    for (int it = 0; it < 60; ++it) {
        G2 g = nullcline_system(P, u, v);
        const double res = std::hypot(g.g1, g.g2);
        if (!std::isfinite(res)) return false;
        if (res < 1e-13) return true;
        double J[2][2];
        nullcline_jacobian(P, u, v, J);
        const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
        if (det == 0.0 || !std::isfinite(det)) return false;
        double du = (-g.g1 * J[1][1] + g.g2 * J[0][1]) / det;
        double dv = (-g.g2 * J[0][0] + g.g1 * J[1][0]) / det;
        double lambda = 1.0;
        while (lambda > 1e-6) {
            const double un = u + lambda * du, vn = v + lambda * dv;
            if (un > 0 && vn > 0) {
                G2 gn = nullcline_system(P, un, vn);
                if (std::isfinite(gn.g1) && std::isfinite(gn.g2) &&
                    std::hypot(gn.g1, gn.g2) < (1.0 - 0.25 * lambda) * res) {
                    u = un;
                    v = vn;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (lambda <= 1e-6) return false;
    }
    G2 g = nullcline_system(P, u, v);
    return std::hypot(g.g1, g.g2) < 1e-10;
}

} // namespace

CoexistenceScan find_coexistence(const ModelParams& P, int grid_points) {
    P.validate();
    CoexistenceScan out;
    if (P.q != 0.0) {
        out.equilibria = find_coexistence_newton(P);
        return out;
    }

    const double u_hi = P.carrying_capacity();
    const double u_lo = 1e-6 * u_hi;
    const int n = std::max(grid_points, 16);
    std::vector<double> us(n), res(n);
    const double ratio = std::log(u_hi / u_lo);
    par::for_each_index(static_cast<std::size_t>(n), [&](std::size_t i) {
        us[i] = u_lo * std::exp(ratio * (double(i) / double(n - 1)));
        if (i + 1 == static_cast<std::size_t>(n)) us[i] = u_hi * (1.0 - 1e-12);
        double r = coexistence_residual(P, us[i]);
        res[i] = std::isfinite(r) ? r : std::nan("");
    });

    std::vector<double> roots;
    for (int i = 0; i + 1 < n; ++i) {
        if (std::isnan(res[i]) || std::isnan(res[i + 1])) continue;
        if (res[i] == 0.0) {
            roots.push_back(us[i]);
            continue;
        }
        if (res[i] * res[i + 1] < 0.0) {
            double lo = us[i], hi = us[i + 1];
            double flo = res[i];
            for (int it = 0; it < 80 && hi - lo > 1e-16 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = coexistence_residual(P, mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (flo * fm < 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            roots.push_back(polish_newton(P, 0.5 * (lo + hi), us[i], us[i + 1]));
        }
    }

    // tangency handling: a local |residual| minimum with no sign change at the
    // grid scale is either a root pair hiding inside one cell (near a fold),
    // an exact double root, or a genuinely unresolved feature
    for (int i = 1; i + 1 < n; ++i) {
        if (std::isnan(res[i - 1]) || std::isnan(res[i]) || std::isnan(res[i + 1])) continue;
        if (!(std::abs(res[i]) <= std::abs(res[i - 1]) && std::abs(res[i]) <= std::abs(res[i + 1])))
            continue;
        if (res[i - 1] * res[i] < 0.0 || res[i] * res[i + 1] < 0.0) continue; // already bracketed
        if (std::abs(res[i]) > 1e-3) continue;
        // minimize the signed residual oriented so the dip points down
        const double sgn = res[i] >= 0.0 ? 1.0 : -1.0;
        auto f = [&](double u) { return sgn * coexistence_residual(P, u); };
        double lo = us[i - 1], hi = us[i + 1];
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
            if (f(m1) < f(m2))
                hi = m2;
            else
                lo = m1;
        }
        const double um = 0.5 * (lo + hi);
        const double rm = coexistence_residual(P, um);
        if (sgn * rm < -1e-14) {
            // the dip crosses zero: two roots inside the cell
            for (auto [bl, bh] : {std::pair{us[i - 1], um}, std::pair{um, us[i + 1]}}) {
                double flo = coexistence_residual(P, bl);
                double blo = bl, bhi = bh;
                for (int it = 0; it < 80 && bhi - blo > 1e-16 * bhi; ++it) {
                    const double mid = 0.5 * (blo + bhi);
                    const double fm = coexistence_residual(P, mid);
                    if (flo * fm < 0.0)
                        bhi = mid;
                    else {
                        blo = mid;
                        flo = fm;
                    }
                }
                roots.push_back(polish_newton(P, 0.5 * (blo + bhi), bl, bh));
            }
        } else if (std::abs(rm) < 1e-10) {
            // fold double root
            out.equilibria.push_back(make_coexistence(P, um, predator_nullcline_v(P, um), true));
        } else if (std::abs(rm) < 1e-6) {
            out.warning = "possible unresolved root pair near u = " + std::to_string(um) +
                          " (min |residual| = " + std::to_string(rm) + ")";
        }
    }

    for (double u : roots)
        out.equilibria.push_back(make_coexistence(P, u, predator_nullcline_v(P, u)));
    std::sort(out.equilibria.begin(), out.equilibria.end(),
              [](const Equilibrium& x, const Equilibrium& y) { return x.location.u < y.location.u; });
    return out;
}

std::optional<State> refine_coexistence(const ModelParams& P, const State& guess) {
    double u = guess.u, v = guess.v;
    if (!(u > 0) || !(v > 0)) return std::nullopt;
    if (!newton_refine(P, u, v)) return std::nullopt;
    return State{u, v};
}

std::vector<Equilibrium> find_coexistence_newton(const ModelParams& P) {
    P.validate();
    // seeds from the q = 0 closed-form scan
    ModelParams P0 = P;
    P0.q = 0.0;
    CoexistenceScan base = find_coexistence(P0);
    std::vector<State> points;
    for (const auto& eq : base.equilibria) points.push_back(eq.location);

    if (P.q != 0.0) {
        const int steps = std::max(16, static_cast<int>(std::ceil(P.q / 0.05)));
        for (int s = 1; s <= steps; ++s) {
            ModelParams Ps = P;
            Ps.q = P.q * double(s) / double(steps);
            std::vector<State> next;
            for (auto& pt : points) {
                double u = pt.u, v = pt.v;
                if (newton_refine(Ps, u, v)) next.push_back({u, v});
            }
            points = std::move(next);
            if (points.empty()) break;
        }
    } else {
        for (auto& pt : points) {
            double u = pt.u, v = pt.v;
            if (newton_refine(P, u, v)) pt = {u, v};
        }
    }

    // dedupe branches that merged
    std::sort(points.begin(), points.end(), [](const State& x, const State& y) { return x.u < y.u; });
    std::vector<Equilibrium> out;
    const double scale = P.carrying_capacity();
    for (const auto& pt : points) {
        if (!out.empty() && std::abs(out.back().location.u - pt.u) < 1e-8 * scale &&
            std::abs(out.back().location.v - pt.v) < 1e-8 * scale)
            continue;
        out.push_back(make_coexistence(P, pt.u, pt.v));
    }
    return out;
}

Classification classify(const ModelParams& P, const State& eq) {
    if (!(eq.u > 0.0) || !(eq.v > 0.0)) return Classification::NonSmooth;
    const Jacobian2 J = jacobian(P, eq, JacobianMode::CoexistenceSimplified);
    const double tr = J.trace(), det = J.det();
    if (det < 0.0) return Classification::Saddle;
    if (std::abs(tr) < kHopfCandidateTol && det > 0.0) return Classification::CenterCandidate;
    if (tr < 0.0)
        return J.discriminant() >= 0.0 ? Classification::StableNode : Classification::StableFocus;
    return J.discriminant() >= 0.0 ? Classification::UnstableNode : Classification::UnstableFocus;
}

Equilibrium trivial_equilibrium() {
    Equilibrium eq;
    eq.location = {0.0, 0.0};
    eq.kind = EquilibriumKind::Trivial;
    eq.classification = Classification::NonSmooth;
    return eq;
}

Equilibrium axial_equilibrium(const ModelParams& P) {
    Equilibrium eq;
    eq.location = {P.carrying_capacity(), 0.0};
    eq.kind = EquilibriumKind::Axial;
    eq.classification = Classification::NonSmooth;
    return eq;
}

std::vector<Equilibrium> find_all(const ModelParams& P) {
    std::vector<Equilibrium> out{trivial_equilibrium(), axial_equilibrium(P)};
    for (auto& eq : find_coexistence(P).equilibria) out.push_back(eq);
    return out;
}

const char* to_string(Classification c) {
    switch (c) {
    case Classification::StableNode: return "StableNode";
    case Classification::StableFocus: return "StableFocus";
    case Classification::UnstableNode: return "UnstableNode";
    case Classification::UnstableFocus: return "UnstableFocus";
    case Classification::Saddle: return "Saddle";
    case Classification::NonSmooth: return "NonSmooth";
    case Classification::CenterCandidate: return "CenterCandidate";
    }
    return "?";
}

const char* to_string(EquilibriumKind k) {
    switch (k) {
    case EquilibriumKind::Trivial: return "trivial";
    case EquilibriumKind::Axial: return "axial";
    case EquilibriumKind::Coexistence: return "coexistence";
    }
    return "?";
}

} // namespace fearpp
