#include "fearpp/model.hpp"

#include <cmath>

namespace fearpp {

void ModelParams::validate() const {
    auto bad = [](const char* what) { throw UsageError(std::string("invalid parameter: ") + what); };
    if (!(a > 0)) bad("a must be > 0");
    if (!(b > 0)) bad("b must be > 0");
    if (!(c > 0)) bad("c must be > 0");
    if (!(d > 0)) bad("d must be > 0");
    if (!(e > 0)) bad("e must be > 0");
    if (!(k >= 0)) bad("k must be >= 0");
    if (!(q >= 0)) bad("q must be >= 0");
    if (!(m > 0 && m <= 1)) bad("m must be in (0,1]");
    if (!(p > 0 && p <= 1)) bad("p must be in (0,1]");
    if (!(r > 0 && r <= 1)) bad("r must be in (0,1]");
}

double ModelParams::get(const std::string& name) const {
    if (name == "a") return a;
    if (name == "b") return b;
    if (name == "c") return c;
    if (name == "d") return d;
    if (name == "e") return e;
    if (name == "k") return k;
    if (name == "m") return m;
    if (name == "p") return p;
    if (name == "q") return q;
    if (name == "r") return r;
    throw UsageError("unknown parameter name: " + name);
}

void ModelParams::set(const std::string& name, double value) {
    if (name == "a") a = value;
    else if (name == "b") b = value;
    else if (name == "c") c = value;
    else if (name == "d") d = value;
    else if (name == "e") e = value;
    else if (name == "k") k = value;
    else if (name == "m") m = value;
    else if (name == "p") p = value;
    else if (name == "q") q = value;
    else if (name == "r") r = value;
    else throw UsageError("unknown parameter name: " + name);
}

double pow_pos(double x, double y) {
    if (x == 0.0) return 0.0; // 0^y := 0 for y > 0
    return std::pow(x, y);
}

double fear_factor(double k, double v) {
    return 1.0 / (1.0 + k * v);
}

Deriv vector_field(const ModelParams& P, const State& s) {
    const double u = s.u, v = s.v;
    const double interaction = pow_pos(u, P.p) * pow_pos(v, P.m);
    double du = 0.0;
    if (u > 0.0)
        du = P.a * u * fear_factor(P.k, v) - P.b * u * u - P.c * interaction;
    double dv = 0.0;
    if (v > 0.0)
        dv = -P.d * v - P.q * pow_pos(v, P.r) + P.e * interaction;
    if (!std::isfinite(du) || !std::isfinite(dv))
        throw EvaluationError("vector field evaluated to a non-finite value");
    return {du, dv};
}

Jacobian2 jacobian(const ModelParams& P, const State& s, JacobianMode mode) {
    const double u = s.u, v = s.v;
    if (!(u > 0.0) || !(v > 0.0))
        throw SingularityError("jacobian requires u>0 and v>0");
    // expression shapes shared with the first-order Taylor entries, which must
    // match these bit for bit
    const double sden = 1.0 + P.k * v;
    Jacobian2 J;
    J.j12 = -P.k * P.a * u / (sden * sden) - P.c * P.m * pow_pos(u, P.p) * pow_pos(v, P.m - 1.0);
    J.j21 = P.e * P.p * pow_pos(u, P.p - 1.0) * pow_pos(v, P.m);
    if (mode == JacobianMode::General) {
        J.j11 = P.a / sden - 2.0 * P.b * u - P.c * P.p * pow_pos(u, P.p - 1.0) * pow_pos(v, P.m);
        J.j22 = -P.d - P.q * P.r * pow_pos(v, P.r - 1.0)
                + P.e * P.m * pow_pos(u, P.p) * pow_pos(v, P.m - 1.0);
    } else {
        J.j11 = -u * (P.b - P.c * (1.0 - P.p) * pow_pos(u, P.p - 2.0) * pow_pos(v, P.m));
        J.j22 = -P.d * (1.0 - P.m) - P.q * (P.r - P.m) * pow_pos(v, P.r - 1.0);
    }
    return J;
}

TaylorCoeffs taylor_coeffs(const ModelParams& P, const State& eq) {
    if (P.q != 0.0)
        throw UsageError("taylor_coeffs: closed forms exist only for q = 0; "
                         "see taylor_coeffs_harvested");
    return taylor_coeffs_harvested(P, eq);
}

TaylorCoeffs taylor_coeffs_harvested(const ModelParams& P, const State& eq) {
    const double u = eq.u, v = eq.v;
    if (!(u > 0.0) || !(v > 0.0))
        throw SingularityError("taylor_coeffs requires a coexistence point (u>0, v>0)");
    const double a = P.a, b = P.b, c = P.c, d = P.d, e = P.e, k = P.k, m = P.m, p = P.p;
    const double s = 1.0 + k * v;
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;

    TaylorCoeffs T{};
    T.a10 = a / s - 2.0 * b * u - c * p * pow_pos(u, p - 1.0) * pow_pos(v, m);
    T.a01 = -k * a * u / s2 - c * m * pow_pos(u, p) * pow_pos(v, m - 1.0);
    T.a20 = -b - 0.5 * c * (p - 1.0) * p * pow_pos(u, p - 2.0) * pow_pos(v, m);
    T.a11 = -a * k / s2 - c * m * p * pow_pos(u, p - 1.0) * pow_pos(v, m - 1.0);
    T.a02 = a * k * k * u / s3 - 0.5 * c * (m - 1.0) * m * pow_pos(u, p) * pow_pos(v, m - 2.0);
    T.a30 = -(c / 6.0) * (p - 2.0) * (p - 1.0) * p * pow_pos(u, p - 3.0) * pow_pos(v, m);
    T.a21 = -0.5 * c * m * (p - 1.0) * p * pow_pos(u, p - 2.0) * pow_pos(v, m - 1.0);
    T.a12 = a * k * k / s3 - 0.5 * c * (m - 1.0) * m * p * pow_pos(u, p - 1.0) * pow_pos(v, m - 2.0);
    T.a03 = -a * k * k * k * u / s4 - (c / 6.0) * (m - 2.0) * (m - 1.0) * m * pow_pos(u, p) * pow_pos(v, m - 3.0);

    T.b10 = e * p * pow_pos(u, p - 1.0) * pow_pos(v, m);
    T.b01 = -d + e * m * pow_pos(u, p) * pow_pos(v, m - 1.0);
    T.b20 = 0.5 * e * (p - 1.0) * p * pow_pos(u, p - 2.0) * pow_pos(v, m);
    T.b11 = e * m * p * pow_pos(u, p - 1.0) * pow_pos(v, m - 1.0);
    T.b02 = 0.5 * e * (m - 1.0) * m * pow_pos(u, p) * pow_pos(v, m - 2.0);
    T.b30 = (e / 6.0) * (p - 2.0) * (p - 1.0) * p * pow_pos(u, p - 3.0) * pow_pos(v, m);
    T.b21 = 0.5 * e * m * (p - 1.0) * p * pow_pos(u, p - 2.0) * pow_pos(v, m - 1.0);
    T.b12 = 0.5 * e * (m - 1.0) * m * p * pow_pos(u, p - 1.0) * pow_pos(v, m - 2.0);
    T.b03 = (e / 6.0) * (m - 2.0) * (m - 1.0) * m * pow_pos(u, p) * pow_pos(v, m - 3.0);

    if (P.q != 0.0) {
        // exact derivatives of the extra -q v^r predator term
        const double q = P.q, r = P.r;
        T.b01 += -q * r * pow_pos(v, r - 1.0);
        T.b02 += -0.5 * q * r * (r - 1.0) * pow_pos(v, r - 2.0);
        T.b03 += -(q / 6.0) * r * (r - 1.0) * (r - 2.0) * pow_pos(v, r - 3.0);
    }
    return T;
}

Deriv param_derivative(const ModelParams& P, const State& s, const std::string& name) {
    const double u = s.u, v = s.v;
    const double phi = fear_factor(P.k, v);
    const double interaction = pow_pos(u, P.p) * pow_pos(v, P.m);
    if (name == "a") return {u * phi, 0.0};
    if (name == "b") return {-u * u, 0.0};
    if (name == "c") return {-interaction, 0.0};
    if (name == "d") return {0.0, -v};
    if (name == "e") return {0.0, interaction};
    if (name == "k") return {-P.a * u * v * phi * phi, 0.0};
    if (name == "q") return {0.0, -pow_pos(v, P.r)};
    throw UsageError("param_derivative: unsupported parameter " + name);
}

} // namespace fearpp
