#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "splitrx/quadrature.hpp"
#include "splitrx/special.hpp"

using namespace splitrx;

TEST_CASE("Gauss-Hermite moments against closed forms", "[quadrature]") {
    // integral of t^k exp(-t^2): sqrt(pi), 0, sqrt(pi)/2, 0, 3 sqrt(pi)/4
    for (int order : {16, 32, 48, 64, 96}) {
        const GaussHermite gh(order);
        double m0 = 0, m1 = 0, m2 = 0, m4 = 0;
        for (int i = 0; i < order; ++i) {
            const double t = gh.node[i], w = gh.weight[i];
            m0 += w;
            m1 += w * t;
            m2 += w * t * t;
            m4 += w * t * t * t * t;
        }
        const double sqrt_pi = std::sqrt(std::numbers::pi);
        CHECK(m0 == Catch::Approx(sqrt_pi).epsilon(1e-13));
        CHECK(std::abs(m1) < 1e-13);
        CHECK(m2 == Catch::Approx(sqrt_pi / 2).epsilon(1e-12));
        CHECK(m4 == Catch::Approx(3 * sqrt_pi / 4).epsilon(1e-12));
    }
}

TEST_CASE("Gauss-Hermite order 5 matches tabulated values", "[quadrature]") {
    const GaussHermite gh(5);
    CHECK(gh.node[0] == Catch::Approx(-2.0201828704560856).margin(1e-12));
    CHECK(gh.node[1] == Catch::Approx(-0.9585724646138185).margin(1e-12));
    CHECK(gh.node[2] == Catch::Approx(0.0).margin(1e-14));
    CHECK(gh.weight[0] == Catch::Approx(0.019953242059045913).epsilon(1e-10));
    CHECK(gh.weight[1] == Catch::Approx(0.39361932315224116).epsilon(1e-10));
    CHECK(gh.weight[2] == Catch::Approx(0.9453087204829419).epsilon(1e-10));
}

TEST_CASE("Gauss-Legendre integrates polynomials and a transcendental", "[quadrature]") {
    const GaussLegendre gl(24);
    double s0 = 0, s2 = 0, se = 0;
    for (int i = 0; i < 24; ++i) {
        const double x = gl.node[i], w = gl.weight[i];
        s0 += w;
        s2 += w * x * x;
        se += w * std::exp(x);
    }
    CHECK(s0 == Catch::Approx(2.0).epsilon(1e-13));
    CHECK(s2 == Catch::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(se == Catch::Approx(std::exp(1.0) - std::exp(-1.0)).epsilon(1e-13));
}

TEST_CASE("quadrature spec validates order", "[quadrature]") {
    CHECK_THROWS_AS(QuadratureSpec(8), std::invalid_argument);
    CHECK_NOTHROW(QuadratureSpec(16));
}

TEST_CASE("log I0 against series and asymptotic cross-checks", "[quadrature]") {
    // reference values: I0(0.5)=1.0634833707413234, I0(5)=27.239871823604442,
    // I0(19.5)=26760525.339838758 (power-series side), and large-x behavior
    CHECK(log_bessel_i0(0.0) == 0.0);
    CHECK(log_bessel_i0(0.5) == Catch::Approx(std::log(1.0634833707413234)).epsilon(1e-12));
    CHECK(log_bessel_i0(5.0) == Catch::Approx(std::log(27.239871823604442)).epsilon(1e-12));
    CHECK(log_bessel_i0(19.5) == Catch::Approx(std::log(26760525.339838758)).epsilon(1e-10));
    // continuity across the series/asymptotic switch at x=20
    const double below = log_bessel_i0(19.999999);
    const double above = log_bessel_i0(20.000001);
    CHECK(std::abs(above - below) < 1e-5);
    // symmetry
    CHECK(log_bessel_i0(-3.0) == log_bessel_i0(3.0));
}
