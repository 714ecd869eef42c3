#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "splitrx/channel.hpp"
#include "splitrx/constellation.hpp"
#include "splitrx/detect.hpp"
#include "splitrx/rng.hpp"

using namespace splitrx;

namespace {
ChannelParams moderate_params() {
    ChannelParams p;
    p.power = 20.0;
    p.gain = 1.0;
    p.rho = 0.5;
    p.var_antenna = 1.0;
    p.var_conversion = 1.0;
    p.var_rectifier = 0.5;
    return p;
}

SplitObservation noisy_obs(const ConstellationPoint& x, const ChannelParams& p, Rng& rng) {
    return transmit(x, p, draw_noise(p, rng));
}
}  // namespace

TEST_CASE("radial and cartesian evaluations agree where both converge", "[likelihood]") {
    // low SNR with a wide rectifier density: the cartesian product rule is
    // fully converged there (its order-doubling residual is ~1e-10), so the
    // two independent evaluations must coincide
    const auto cons = make_qam(4);
    ChannelParams p = moderate_params();
    p.power = 2.0;
    p.var_rectifier = 2.0;
    const QuadratureSpec radial(48, LikelihoodMethod::RadialBessel);
    const QuadratureSpec cartesian(64, LikelihoodMethod::CartesianGH);
    Rng rng(31);
    for (int i = 0; i < 25; ++i) {
        const auto& x = cons.points[i % 4];
        const auto obs = noisy_obs(x, p, rng);
        for (const auto& cand : cons.points) {
            const double lr = log_likelihood_3d(obs, cand, p, radial);
            const double lc = log_likelihood_3d(obs, cand, p, cartesian);
            CHECK(lr == Catch::Approx(lc).margin(1e-6));
        }
    }
}

TEST_CASE("quadrature value against a brute-force Monte Carlo density oracle", "[likelihood]") {
    // top-hat kernel density at a 4-QAM query point: the probability of a
    // small box around the observation, from ten million channel draws,
    // against the box integral of the quadrature density
    const auto cons = make_qam(4);
    ChannelParams p = moderate_params();
    const auto& x = cons.points[0];

    Rng rng(404);
    const auto center = noisy_obs(x, p, rng);
    const double h1 = 0.35, h2 = 0.5;  // box half-widths

    const int n = 10'000'000;
    Rng mc(808);
    std::int64_t hits = 0;
    for (int i = 0; i < n; ++i) {
        const auto obs = noisy_obs(x, p, mc);
        if (std::abs(obs.coherent.real() - center.coherent.real()) <= h1 &&
            std::abs(obs.coherent.imag() - center.coherent.imag()) <= h1 &&
            std::abs(obs.power - center.power) <= h2)
            ++hits;
    }
    const double p_hat = static_cast<double>(hits) / n;
    const double se = std::sqrt(p_hat * (1.0 - p_hat) / n);

    const QuadratureSpec quad(48);
    const GaussLegendre gl(24);
    double p_quad = 0.0;
    for (int a = 0; a < gl.order(); ++a)
        for (int b = 0; b < gl.order(); ++b)
            for (int c = 0; c < gl.order(); ++c) {
                SplitObservation q;
                q.coherent = {center.coherent.real() + h1 * gl.node[a],
                              center.coherent.imag() + h1 * gl.node[b]};
                q.power = center.power + h2 * gl.node[c];
                p_quad += gl.weight[a] * gl.weight[b] * gl.weight[c] *
                          likelihood_3d(q, x, p, quad);
            }
    p_quad *= h1 * h1 * h2;

    INFO("p_hat=" << p_hat << " p_quad=" << p_quad << " se=" << se);
    CHECK(std::abs(p_hat - p_quad) <= 3.0 * se + 0.01 * p_quad);
}

TEST_CASE("order doubling leaves the value unchanged", "[likelihood]") {
    const auto cons = make_qam(4);
    Rng rng(77);

    SECTION("radial path at moderate SNR") {
        ChannelParams p = moderate_params();
        const auto obs = noisy_obs(cons.points[1], p, rng);
        const QuadratureSpec q32(32), q64(64);
        for (const auto& cand : cons.points) {
            const double a = log_likelihood_3d(obs, cand, p, q32);
            const double b = log_likelihood_3d(obs, cand, p, q64);
            CHECK(std::abs(std::expm1(a - b)) < 1e-8);
        }
    }

    SECTION("cartesian path in its low-SNR validity regime") {
        ChannelParams p = moderate_params();
        p.power = 2.0;
        p.var_rectifier = 2.0;
        const auto obs = noisy_obs(cons.points[2], p, rng);
        const QuadratureSpec q32(32, LikelihoodMethod::CartesianGH);
        const QuadratureSpec q64(64, LikelihoodMethod::CartesianGH);
        for (const auto& cand : cons.points) {
            const double a = log_likelihood_3d(obs, cand, p, q32);
            const double b = log_likelihood_3d(obs, cand, p, q64);
            CHECK(std::abs(std::expm1(a - b)) < 1e-8);
        }
    }
}

TEST_CASE("vanishing antenna noise factorizes the likelihood", "[likelihood]") {
    const auto cons = make_qam(4);
    const auto& x = cons.points[0];
    const SplitObservation obs{{1.8, 1.2}, 2.4};

    auto closed_form = [&](const ChannelParams& p) {
        const std::complex<double> c = std::sqrt(p.power) * p.gain * x.value;
        const double d2 = std::norm(obs.coherent - std::sqrt(p.rho) * c);
        const double pr = obs.power - (1.0 - p.rho) * std::norm(c);
        return -std::log(std::numbers::pi * p.var_conversion) - d2 / p.var_conversion -
               0.5 * std::log(2.0 * std::numbers::pi * p.var_rectifier) -
               pr * pr / (2.0 * p.var_rectifier);
    };

    ChannelParams p = moderate_params();
    p.power = 4.0;

    SECTION("exact zero variance short-circuits both paths") {
        p.var_antenna = 0.0;
        const QuadratureSpec radial(48), cartesian(48, LikelihoodMethod::CartesianGH);
        CHECK(log_likelihood_3d(obs, x, p, radial) == Catch::Approx(closed_form(p)).margin(1e-12));
        CHECK(log_likelihood_3d(obs, x, p, cartesian) == Catch::Approx(closed_form(p)).margin(1e-12));
    }

    SECTION("small variance converges to the factorized form") {
        p.var_antenna = 1e-10;
        const QuadratureSpec cartesian(48, LikelihoodMethod::CartesianGH);
        CHECK(log_likelihood_3d(obs, x, p, cartesian) == Catch::Approx(closed_form(p)).margin(1e-4));
    }
}

TEST_CASE("degenerate densities are rejected", "[likelihood]") {
    const auto cons = make_qam(4);
    const QuadratureSpec quad(48);
    const SplitObservation obs{{1.0, 0.0}, 1.0};
    ChannelParams p = moderate_params();
    p.var_conversion = 0.0;
    CHECK_THROWS_AS(log_likelihood_3d(obs, cons.points[0], p, quad), DegenerateDensity);
    CHECK_THROWS_AS(detect_ml_3d(obs, cons, p, quad), DegenerateDensity);
    p = moderate_params();
    p.var_rectifier = 0.0;
    CHECK_THROWS_AS(log_likelihood_3d(obs, cons.points[0], p, quad), DegenerateDensity);
}

TEST_CASE("density integrates to one over a wide box", "[likelihood]") {
    const auto cons = make_qam(4);
    ChannelParams p;
    p.power = 4.0;
    p.rho = 0.5;
    p.var_antenna = 1.0;
    p.var_conversion = 1.0;
    p.var_rectifier = 0.5;
    const auto& x = cons.points[3];
    const std::complex<double> c = std::sqrt(p.power) * x.value;
    const std::complex<double> mean1 = std::sqrt(p.rho) * c;

    const QuadratureSpec quad(48);
    const GaussLegendre gl(40);
    const double lim1 = 6.0;                               // +-6 sigma on each coherent axis
    const double lo2 = -6.0, hi2 = 0.5 * (std::norm(c) + 30.0);  // generous power range
    double mass = 0.0;
    for (int a = 0; a < gl.order(); ++a)
        for (int b = 0; b < gl.order(); ++b)
            for (int d = 0; d < gl.order(); ++d) {
                SplitObservation q;
                q.coherent = {mean1.real() + lim1 * gl.node[a], mean1.imag() + lim1 * gl.node[b]};
                q.power = 0.5 * (hi2 + lo2) + 0.5 * (hi2 - lo2) * gl.node[d];
                mass += gl.weight[a] * gl.weight[b] * gl.weight[d] * likelihood_3d(q, x, p, quad);
            }
    mass *= lim1 * lim1 * 0.5 * (hi2 - lo2);
    CHECK(mass == Catch::Approx(1.0).epsilon(0.01));
}

TEST_CASE("ML detector returns the transmitted symbol in the small-noise limit", "[likelihood]") {
    const auto cons = make_qam(16);
    ChannelParams p;
    p.power = 100.0;
    p.rho = 0.5;
    p.var_antenna = 1e-4;
    p.var_conversion = 1e-4;
    p.var_rectifier = 1e-4;
    const QuadratureSpec quad(48);
    Rng rng(11);
    for (const auto& x : cons.points) {
        const auto obs = noisy_obs(x, p, rng);
        CHECK(detect_ml_3d(obs, cons, p, quad).symbol_index == x.index);
    }
}

TEST_CASE("at rho=1 the ML verdict coincides with CD on every observation", "[likelihood]") {
    const auto cons = make_qam(16);
    ChannelParams p = moderate_params();
    p.rho = 1.0;
    const QuadratureSpec quad(48);
    Rng rng(555);
    for (int i = 0; i < 1000; ++i) {
        const auto& x = cons.points[i % 16];
        const auto obs = noisy_obs(x, p, rng);
        const auto ml = detect_ml_3d(obs, cons, p, quad);
        const auto cd = detect_cd(obs, cons, p);
        REQUIRE(ml.symbol_index == cd.symbol_index);
    }
}

TEST_CASE("pruned classification equals the full argmax", "[likelihood]") {
    const QuadratureSpec quad(48);

    SECTION("moderate SNR, 16-QAM") {
        const auto cons = make_qam(16);
        ChannelParams p = moderate_params();
        const detail::MlContext ctx(cons, p);
        const detail::LcTable lc(cons, p);
        Rng rng(8080);
        for (int i = 0; i < 2000; ++i) {
            const auto& x = cons.points[i % 16];
            const auto obs = noisy_obs(x, p, rng);
            const auto full = detect_ml_3d(obs, cons, p, quad);
            const int pruned = ctx.classify(obs, quad, lc.classify(obs));
            REQUIRE(pruned == full.symbol_index);
        }
    }

    SECTION("high SNR with a sharp rectifier density, 64-QAM") {
        const auto cons = make_qam(64);
        ChannelParams p;
        p.power = 200.0;
        p.rho = 0.5;
        p.var_antenna = 1.0;
        p.var_conversion = 1.0;
        p.var_rectifier = 0.1;
        const detail::MlContext ctx(cons, p);
        const detail::LcTable lc(cons, p);
        Rng rng(9090);
        for (int i = 0; i < 500; ++i) {
            const auto& x = cons.points[i % 64];
            const auto obs = noisy_obs(x, p, rng);
            const auto full = detect_ml_3d(obs, cons, p, quad);
            const int pruned = ctx.classify(obs, quad, lc.classify(obs));
            REQUIRE(pruned == full.symbol_index);
        }
    }
}

TEST_CASE("PD on a constant-modulus alphabet always answers index 0", "[likelihood]") {
    const auto cons = make_psk(4);
    ChannelParams p = moderate_params();
    p.rho = 0.0;
    const QuadratureSpec quad(48);
    Rng rng(66);
    int errors = 0;
    const int n = 2000;
    for (int i = 0; i < n; ++i) {
        const int sym = static_cast<int>(rng.uniform_index(4));
        const auto obs = noisy_obs(cons.points[sym], p, rng);
        const auto v = detect_pd(obs, cons, p, quad);
        REQUIRE(v.symbol_index == 0);
        errors += v.symbol_index != sym ? 1 : 0;
    }
    // SER must be (M-1)/M up to binomial noise
    CHECK(std::abs(static_cast<double>(errors) / n - 0.75) < 4.0 * std::sqrt(0.75 * 0.25 / n));
}

TEST_CASE("PD separates well-spaced magnitudes at high SNR", "[likelihood]") {
    Constellation cons;
    cons.scheme = Scheme::APSK;
    cons.order = 2;
    cons.points.emplace_back(0, std::complex<double>(0.5, 0.0));
    cons.points.emplace_back(1, std::complex<double>(0.0, 1.5));
    ChannelParams p;
    p.power = 400.0;
    p.rho = 0.0;
    p.var_antenna = 0.01;
    p.var_conversion = 1.0;
    p.var_rectifier = 0.01;
    const QuadratureSpec quad(48);
    Rng rng(31337);
    for (int i = 0; i < 500; ++i) {
        const int sym = static_cast<int>(rng.uniform_index(2));
        const auto obs = noisy_obs(cons.points[sym], p, rng);
        REQUIRE(detect_pd(obs, cons, p, quad).symbol_index == sym);
    }
}

TEST_CASE("PD with zero rectifier noise uses the exact power density", "[likelihood]") {
    Constellation cons;
    cons.scheme = Scheme::APSK;
    cons.order = 2;
    cons.points.emplace_back(0, std::complex<double>(0.5, 0.0));
    cons.points.emplace_back(1, std::complex<double>(1.5, 0.0));
    ChannelParams p;
    p.power = 100.0;
    p.rho = 0.3;
    p.var_antenna = 1.0;
    p.var_conversion = 1.0;
    p.var_rectifier = 0.0;
    const QuadratureSpec quad(48);
    Rng rng(17);
    int correct = 0;
    const int n = 500;
    for (int i = 0; i < n; ++i) {
        const int sym = static_cast<int>(rng.uniform_index(2));
        const auto obs = noisy_obs(cons.points[sym], p, rng);
        correct += detect_pd(obs, cons, p, quad).symbol_index == sym ? 1 : 0;
    }
    CHECK(correct > n * 9 / 10);

    // continuity against a tiny-but-positive rectifier variance
    ChannelParams p_eps = p;
    p_eps.var_rectifier = 1e-8;
    Rng rng2(18);
    const auto obs = noisy_obs(cons.points[1], p_eps, rng2);
    const auto v0 = detect_pd(obs, cons, p, quad);
    const auto veps = detect_pd(obs, cons, p_eps, quad);
    CHECK(v0.metrics[1] == Catch::Approx(veps.metrics[1]).margin(2e-3));
}
