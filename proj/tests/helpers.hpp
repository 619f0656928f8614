#ifndef FEARPP_TEST_HELPERS_HPP
#define FEARPP_TEST_HELPERS_HPP

#include <cmath>
#include <functional>
#include <random>

#include "fearpp/model.hpp"

namespace fearpp::test {

inline ModelParams params(double a, double b, double c, double d, double e, double k, double m,
                          double p, double q = 0.0, double r = 1.0) {
    ModelParams P;
    P.a = a;
    P.b = b;
    P.c = c;
    P.d = d;
    P.e = e;
    P.k = k;
    P.m = m;
    P.p = p;
    P.q = q;
    P.r = r;
    return P;
}

// central finite differences of a scalar field, for the derivative oracles
using Scalar2D = std::function<double(double, double)>;

inline double fd_x(const Scalar2D& f, double x, double y, double h) {
    return (f(x + h, y) - f(x - h, y)) / (2 * h);
}
inline double fd_xx(const Scalar2D& f, double x, double y, double h) {
    return (f(x + h, y) - 2 * f(x, y) + f(x - h, y)) / (h * h);
}
inline double fd_xy(const Scalar2D& f, double x, double y, double h) {
    return (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4 * h * h);
}
inline double fd_xxx(const Scalar2D& f, double x, double y, double h) {
    return (f(x + 2 * h, y) - 2 * f(x + h, y) + 2 * f(x - h, y) - f(x - 2 * h, y)) / (2 * h * h * h);
}
inline double fd_xxy(const Scalar2D& f, double x, double y, double h) {
    return ((f(x + h, y + h) - 2 * f(x, y + h) + f(x - h, y + h)) -
            (f(x + h, y - h) - 2 * f(x, y - h) + f(x - h, y - h))) /
           (2 * h * h * h);
}

inline double rel_err(double got, double want) {
    const double scale = std::max({std::abs(got), std::abs(want), 1e-300});
    return std::abs(got - want) / scale;
}

// random interior parameter sets for property tests
struct RandomModel {
    std::mt19937_64 rng;
    explicit RandomModel(std::uint64_t seed) : rng(seed) {}

    double log_uniform(double lo, double hi) {
        std::uniform_real_distribution<double> d(std::log(lo), std::log(hi));
        return std::exp(d(rng));
    }
    double uniform(double lo, double hi) {
        std::uniform_real_distribution<double> d(lo, hi);
        return d(rng);
    }
    ModelParams draw(bool with_harvest = false) {
        ModelParams P;
        P.a = log_uniform(0.3, 3.0);
        P.b = log_uniform(0.1, 1.0);
        P.c = log_uniform(0.3, 3.0);
        P.d = log_uniform(0.3, 3.0);
        P.e = log_uniform(0.3, 3.0);
        P.k = uniform(0.0, 1.0) < 0.3 ? 0.0 : log_uniform(0.01, 5.0);
        P.m = uniform(0.15, 0.95);
        P.p = uniform(0.15, 0.95);
        if (with_harvest && uniform(0.0, 1.0) < 0.5) {
            P.q = log_uniform(0.05, 1.0);
            P.r = uniform(0.2, 1.0);
        }
        return P;
    }
};

} // namespace fearpp::test

#endif
