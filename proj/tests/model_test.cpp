#include "doctest.h"

#include <cmath>

#include "fearpp/model.hpp"
#include "fearpp/equilibria.hpp"
#include "helpers.hpp"

using namespace fearpp;
using namespace fearpp::test;

TEST_CASE("fear factor closed form") {
    CHECK(fear_factor(0.0, 7.3) == 1.0);
    CHECK(fear_factor(4.2, 0.0) == 1.0);
    CHECK(fear_factor(1.0, 1.0) == 0.5);
}

TEST_CASE("fear factor is strictly decreasing in each argument") {
    RandomModel rm(101);
    for (int i = 0; i < 200; ++i) {
        const double k1 = rm.log_uniform(1e-3, 10.0);
        const double k2 = k1 * rm.log_uniform(1.001, 3.0);
        const double v = rm.log_uniform(1e-3, 10.0);
        CHECK(fear_factor(k2, v) < fear_factor(k1, v));
        const double v2 = v * rm.log_uniform(1.001, 3.0);
        CHECK(fear_factor(k1, v2) < fear_factor(k1, v));
    }
}

TEST_CASE("pow_pos pins zero to fractional powers") {
    CHECK(pow_pos(0.0, 0.2) == 0.0);
    CHECK(pow_pos(0.0, 1.0) == 0.0);
    CHECK(pow_pos(2.0, 0.5) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("vector field at the origin and on the axes") {
    RandomModel rm(7);
    for (int i = 0; i < 50; ++i) {
        ModelParams P = rm.draw(true);
        Deriv d0 = vector_field(P, {0.0, 0.0});
        CHECK(d0.du == 0.0);
        CHECK(d0.dv == 0.0);
        Deriv du0 = vector_field(P, {0.0, rm.log_uniform(0.01, 5.0)});
        CHECK(du0.du == 0.0); // prey component exactly zero at u = 0
        Deriv dv0 = vector_field(P, {rm.log_uniform(0.01, 5.0), 0.0});
        CHECK(dv0.dv == 0.0); // predator component exactly zero at v = 0
    }
}

TEST_CASE("vector field by direct substitution") {
    // unit parameters at (1,1): (a - b - c, -d + e) = (-1, 0)
    ModelParams P = params(1, 1, 1, 1, 1, 0, 0.5, 0.5);
    Deriv d = vector_field(P, {1.0, 1.0});
    CHECK(d.du == doctest::Approx(-1.0));
    CHECK(d.dv == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("vector field vanishes at the published Hopf equilibrium") {
    ModelParams P = params(2.5, 0.3, 2.5, 2.0, 2.5, 15.093353, 0.9, 0.5);
    Deriv d = vector_field(P, {0.43392, 0.14327});
    CHECK(std::abs(d.du) < 1e-3);
    CHECK(std::abs(d.dv) < 1e-3);
}

TEST_CASE("vector field reports overflow instead of propagating it") {
    ModelParams P = params(1, 1, 1, 1, 1, 0, 0.5, 0.5);
    CHECK_THROWS_AS(vector_field(P, {1e200, 1.0}), EvaluationError);
}

TEST_CASE("harvesting term contributes exactly zero at q = 0") {
    RandomModel rm(19);
    for (int i = 0; i < 100; ++i) {
        ModelParams P = rm.draw(false);
        const double u = rm.log_uniform(1e-3, 5.0), v = rm.log_uniform(1e-3, 5.0);
        Deriv d = vector_field(P, {u, v});
        ModelParams Pr = P;
        Pr.r = rm.uniform(0.2, 1.0); // r is inert when q = 0
        Deriv dr = vector_field(Pr, {u, v});
        CHECK(d.du == dr.du);
        CHECK(d.dv == dr.dv);
        const double dv_direct = -P.d * v - 0.0 + P.e * (pow_pos(u, P.p) * pow_pos(v, P.m));
        CHECK(d.dv == dv_direct);
    }
}

TEST_CASE("jacobian is singular on the axes") {
    ModelParams P = params(1, 1, 1, 1, 1, 0.5, 0.5, 0.5);
    CHECK_THROWS_AS(jacobian(P, {0.0, 1.0}), SingularityError);
    CHECK_THROWS_AS(jacobian(P, {1.0, 0.0}), SingularityError);
    CHECK_THROWS_AS(taylor_coeffs(P, {0.0, 1.0}), SingularityError);
}

TEST_CASE("jacobian agrees with central finite differences of the field") {
    ModelParams unitP = params(1, 1, 1, 1, 1, 1, 0.5, 0.5);
    auto check_at = [](const ModelParams& P, double u, double v, double tol) {
        auto F = [&](double x, double y) { return vector_field(P, {x, y}).du; };
        auto G = [&](double x, double y) { return vector_field(P, {x, y}).dv; };
        const double h = 1e-6 * std::max(1.0, std::max(u, v));
        Jacobian2 J = jacobian(P, {u, v});
        CHECK(rel_err(J.j11, fd_x(F, u, v, h)) < tol);
        CHECK(rel_err(J.j12, fd_x([&](double y, double x) { return F(x, y); }, v, u, h)) < tol);
        CHECK(rel_err(J.j21, fd_x(G, u, v, h)) < tol);
        CHECK(rel_err(J.j22, fd_x([&](double y, double x) { return G(x, y); }, v, u, h)) < tol);
    };
    check_at(unitP, 1.0, 1.0, 1e-6);

    RandomModel rm(23);
    for (int i = 0; i < 100; ++i) {
        ModelParams P = rm.draw(true);
        const double u = rm.log_uniform(0.05, 3.0), v = rm.log_uniform(0.05, 3.0);
        check_at(P, u, v, 1e-5);
    }
}

TEST_CASE("coexistence-simplified jacobian matches the general form on the nullclines") {
    // on points solving both nullcline equations with q=0: j11 general equals
    // -u(b - c(1-p)u^{p-2}v^m) and j22 equals -d(1-m)
    for (const char* fam : {"a", "b"}) {
        ModelParams P = fam[0] == 'a' ? params(2.5, 0.3, 2.5, 2.0, 2.5, 10.0, 0.9, 0.5)
                                      : params(2.0, 0.2, 1.0, 0.7, 0.8, 0.05, 0.6, 0.4);
        auto eqs = find_coexistence(P).equilibria;
        REQUIRE(!eqs.empty());
        for (const auto& eq : eqs) {
            Jacobian2 Jg = jacobian(P, eq.location, JacobianMode::General);
            Jacobian2 Js = jacobian(P, eq.location, JacobianMode::CoexistenceSimplified);
            CHECK(std::abs(Jg.j11 - Js.j11) < 1e-8);
            CHECK(std::abs(Jg.j22 - (-P.d * (1.0 - P.m))) < 1e-8);
            CHECK(rel_err(Js.j22, -P.d * (1.0 - P.m)) < 1e-12);
        }
    }
}

TEST_CASE("published value: j22 = -d(1-m) = -0.2 at the first Hopf family") {
    ModelParams P = params(2.5, 0.3, 2.5, 2.0, 2.5, 15.093353, 0.9, 0.5);
    auto eqs = find_coexistence(P).equilibria;
    REQUIRE(eqs.size() == 1);
    CHECK(jacobian(P, eqs[0].location, JacobianMode::CoexistenceSimplified).j22 ==
          doctest::Approx(-0.2).epsilon(1e-10));
}

TEST_CASE("taylor first-order entries equal the jacobian bit for bit") {
    RandomModel rm(31);
    for (int i = 0; i < 50; ++i) {
        ModelParams P = rm.draw(false);
        const double u = rm.log_uniform(0.05, 3.0), v = rm.log_uniform(0.05, 3.0);
        Jacobian2 J = jacobian(P, {u, v}, JacobianMode::General);
        TaylorCoeffs T = taylor_coeffs(P, {u, v});
        CHECK(T.a10 == J.j11);
        CHECK(T.a01 == J.j12);
        CHECK(T.b10 == J.j21);
        CHECK(T.b01 == J.j22);
    }
}

TEST_CASE("taylor coefficients against finite-difference derivatives") {
    ModelParams P = params(2.5, 0.3, 2.5, 2.0, 2.5, 15.093353, 0.9, 0.5);
    const double u = 0.43392, v = 0.14327;
    auto F = [&](double x, double y) { return vector_field(P, {x, y}).du; };
    auto G = [&](double x, double y) { return vector_field(P, {x, y}).dv; };
    auto Ft = [&](double y, double x) { return F(x, y); };
    auto Gt = [&](double y, double x) { return G(x, y); };
    TaylorCoeffs T = taylor_coeffs(P, {u, v});
    const double h2 = 1e-4, h3 = 2e-3;

    CHECK(rel_err(T.a20, 0.5 * fd_xx(F, u, v, h2)) < 1e-4);
    CHECK(rel_err(T.a11, fd_xy(F, u, v, h2)) < 1e-4);
    CHECK(rel_err(T.a02, 0.5 * fd_xx(Ft, v, u, h2)) < 1e-4);
    CHECK(rel_err(T.b20, 0.5 * fd_xx(G, u, v, h2)) < 1e-4);
    CHECK(rel_err(T.b11, fd_xy(G, u, v, h2)) < 1e-4);
    CHECK(rel_err(T.b02, 0.5 * fd_xx(Gt, v, u, h2)) < 1e-4);

    CHECK(rel_err(T.a30, fd_xxx(F, u, v, h3) / 6.0) < 1e-3);
    CHECK(rel_err(T.a21, fd_xxy(F, u, v, h3) / 2.0) < 1e-3);
    CHECK(rel_err(T.a12, fd_xxy(Ft, v, u, h3) / 2.0) < 1e-3);
    CHECK(rel_err(T.a03, fd_xxx(Ft, v, u, h3) / 6.0) < 1e-3);
    CHECK(rel_err(T.b30, fd_xxx(G, u, v, h3) / 6.0) < 1e-3);
    CHECK(rel_err(T.b21, fd_xxy(G, u, v, h3) / 2.0) < 1e-3);
    CHECK(rel_err(T.b12, fd_xxy(Gt, v, u, h3) / 2.0) < 1e-3);
    CHECK(rel_err(T.b03, fd_xxx(Gt, v, u, h3) / 6.0) < 1e-3);
}

TEST_CASE("taylor trace vanishes at a Hopf point") {
    ModelParams P = params(2.5, 0.3, 2.5, 2.0, 2.5, 15.0933496046, 0.9, 0.5);
    auto eqs = find_coexistence(P).equilibria;
    REQUIRE(eqs.size() == 1);
    TaylorCoeffs T = taylor_coeffs(P, eqs[0].location);
    CHECK(std::abs(T.a10 + T.b01) < 1e-7);
}

TEST_CASE("taylor coefficients demand q = 0; the harvested extension covers q > 0") {
    ModelParams P = params(3, 0.2, 2, 1, 1.1, 0.08, 0.6, 0.5, 0.5, 0.8);
    CHECK_THROWS_AS(taylor_coeffs(P, {1.0, 1.0}), UsageError);
    TaylorCoeffs T = taylor_coeffs_harvested(P, {1.3, 0.9});
    auto G = [&](double x, double y) { return vector_field(P, {x, y}).dv; };
    auto Gt = [&](double y, double x) { return G(x, y); };
    CHECK(rel_err(T.b01, fd_x(Gt, 0.9, 1.3, 1e-6)) < 1e-5);
    CHECK(rel_err(T.b02, 0.5 * fd_xx(Gt, 0.9, 1.3, 1e-4)) < 1e-4);
    CHECK(rel_err(T.b03, fd_xxx(Gt, 0.9, 1.3, 2e-3) / 6.0) < 1e-3);
}

TEST_CASE("param_derivative against finite differences") {
    RandomModel rm(41);
    for (int i = 0; i < 40; ++i) {
        ModelParams P = rm.draw(true);
        if (P.q == 0.0) P.q = 0.3;
        const double u = rm.log_uniform(0.05, 3.0), v = rm.log_uniform(0.05, 3.0);
        for (const char* name : {"a", "b", "c", "d", "e", "k", "q"}) {
            Deriv got = param_derivative(P, {u, v}, name);
            const double h = 1e-7 * std::max(1.0, P.get(name));
            ModelParams Pp = P, Pm = P;
            Pp.set(name, P.get(name) + h);
            Pm.set(name, P.get(name) - h);
            Deriv dp = vector_field(Pp, {u, v});
            Deriv dm = vector_field(Pm, {u, v});
            CHECK(std::abs(got.du - (dp.du - dm.du) / (2 * h)) < 1e-5 * std::max(1.0, std::abs(got.du)));
            CHECK(std::abs(got.dv - (dp.dv - dm.dv) / (2 * h)) < 1e-5 * std::max(1.0, std::abs(got.dv)));
        }
    }
}

TEST_CASE("parameter validation") {
    ModelParams P;
    P.m = 0.0;
    CHECK_THROWS_AS(P.validate(), UsageError);
    P = ModelParams{};
    P.a = -1.0;
    CHECK_THROWS_AS(P.validate(), UsageError);
    P = ModelParams{};
    P.k = -0.1;
    CHECK_THROWS_AS(P.validate(), UsageError);
    CHECK_THROWS_AS(P.set("z", 1.0), UsageError);
    CHECK_THROWS_AS(ModelParams{}.get("zz"), UsageError);
}
