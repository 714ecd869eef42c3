#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "splitrx/montecarlo.hpp"

using namespace splitrx;

namespace {
// Gaussian tail oracle for the analytic QPSK checks (test-side only).
double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double qpsk_cd_ser(double gamma) {
    const double q = q_func(std::sqrt(gamma));
    return 2.0 * q - q * q;
}

SweepConfig small_config() {
    SweepConfig c;
    c.constellation = make_qam(16);
    c.params_base.gain = 1.0;
    c.params_base.var_antenna = 1.0;
    c.params_base.var_conversion = 1.0;
    c.params_base.var_rectifier = 0.1;
    c.rho_grid = {0.3, 0.6};
    c.power_grid = {50.0};
    c.detectors = {DetectorId::LowComplexity};
    c.trials = 2000;
    c.master_seed = 77;
    return c;
}
}  // namespace

TEST_CASE("noiseless channel gives zero SER for every detector", "[montecarlo]") {
    const auto cons = make_qam(16);
    ChannelParams p;
    p.power = 10.0;
    p.rho = 0.5;
    p.var_antenna = 1e-9;
    p.var_conversion = 1e-9;
    p.var_rectifier = 1e-9;
    for (DetectorId d : {DetectorId::LowComplexity, DetectorId::Cd}) {
        const auto est = estimate_ser(cons, p, d, 2000, 42);
        CHECK(est.errors == 0);
        CHECK(est.ser == 0.0);
    }
}

TEST_CASE("QPSK at rho=1 matches the closed-form CD symbol error rate", "[montecarlo]") {
    // gamma chosen so that the analytic SER is about 1e-2
    const double gamma = 6.5614;
    ChannelParams p;
    p.rho = 1.0;
    p.var_antenna = 1.0;
    p.var_conversion = 1.0;
    p.var_rectifier = 0.1;
    p.power = gamma * (p.var_antenna + p.var_conversion);
    const double target = qpsk_cd_ser(gamma);
    CHECK(target == Catch::Approx(0.0104).margin(2e-4));

    const auto cons = make_psk(4);
    const std::uint64_t trials = 200000;
    const auto est = estimate_ser(cons, p, DetectorId::Cd, trials, 2025, 0.95, QuadratureSpec(), 2);
    const double se = std::sqrt(target * (1.0 - target) / static_cast<double>(trials));
    CHECK(std::abs(est.ser - target) < 3.0 * se);
}

TEST_CASE("same seed reproduces the exact error count", "[montecarlo]") {
    const auto cons = make_qam(16);
    ChannelParams p;
    p.power = 30.0;
    p.rho = 0.4;
    p.var_antenna = 1.0;
    p.var_conversion = 1.0;
    p.var_rectifier = 0.1;
    const auto a = estimate_ser(cons, p, DetectorId::LowComplexity, 30000, 99);
    const auto b = estimate_ser(cons, p, DetectorId::LowComplexity, 30000, 99);
    CHECK(a.errors == b.errors);
    // and across worker counts
    const auto c = estimate_ser(cons, p, DetectorId::LowComplexity, 30000, 99, 0.95, QuadratureSpec(), 4);
    CHECK(a.errors == c.errors);
}

TEST_CASE("detector/rho mismatch raises SplitterDegenerate", "[montecarlo]") {
    const auto cons = make_qam(4);
    ChannelParams p;
    p.power = 10.0;
    p.rho = 1.0;
    CHECK_THROWS_AS(estimate_ser(cons, p, DetectorId::LowComplexity, 1000, 1), SplitterDegenerate);
}

TEST_CASE("sweep validation rejects malformed configs", "[montecarlo]") {
    SweepConfig c = small_config();
    c.trials = 100;
    CHECK_THROWS_AS(sweep_rho(c), std::invalid_argument);
    c = small_config();
    c.rho_grid = {0.6, 0.3};
    CHECK_THROWS_AS(sweep_rho(c), std::invalid_argument);
    c = small_config();
    c.rho_grid.clear();
    CHECK_THROWS_AS(sweep_rho(c), std::invalid_argument);
    c = small_config();
    c.rho_grid = {0.3, 1.2};
    CHECK_THROWS_AS(sweep_rho(c), std::invalid_argument);
}

TEST_CASE("single-point sweep emits one row per detector", "[montecarlo]") {
    SweepConfig c = small_config();
    c.rho_grid = {0.5};
    c.detectors = {DetectorId::LowComplexity, DetectorId::Cd, DetectorId::Pd};
    const auto rows = sweep_rho(c);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.rho == 0.5);
        CHECK(r.estimate.trials == c.trials);
        CHECK(r.estimate.ser >= 0.0);
        CHECK(r.estimate.ser <= 1.0);
        CHECK(r.estimate.ci_half_width >= 0.0);
    }
}

TEST_CASE("sweep output is byte-identical across worker counts", "[montecarlo]") {
    SweepConfig c = small_config();
    c.detectors = {DetectorId::LowComplexity, DetectorId::Ml3d};
    c.trials = 4000;
    c.workers = 1;
    const auto rows1 = sweep_rho(c);
    c.workers = 4;
    const auto rows4 = sweep_rho(c);
    REQUIRE(rows1.size() == rows4.size());
    for (std::size_t i = 0; i < rows1.size(); ++i) {
        CHECK(rows1[i].estimate.errors == rows4[i].estimate.errors);
        CHECK(rows1[i].estimate.ser == rows4[i].estimate.ser);
    }
}

TEST_CASE("ml3d stride thins the oracle rows", "[montecarlo]") {
    SweepConfig c = small_config();
    c.rho_grid = {0.2, 0.4, 0.6, 0.8};
    c.detectors = {DetectorId::LowComplexity, DetectorId::Ml3d};
    c.ml3d_stride = 2;
    c.trials = 1000;
    const auto rows = sweep_rho(c);
    int n_ml = 0, n_lc = 0;
    for (const auto& r : rows) {
        if (r.detector == DetectorId::Ml3d) ++n_ml;
        if (r.detector == DetectorId::LowComplexity) ++n_lc;
    }
    CHECK(n_lc == 4);
    CHECK(n_ml == 2);
}

TEST_CASE("SER is monotone non-increasing in power up to CI noise", "[montecarlo]") {
    SweepConfig c = small_config();
    c.rho_grid = {0.5};
    c.power_grid = {20.0, 60.0, 180.0};
    c.trials = 20000;
    const auto rows = sweep_rho(c);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].estimate.ser <=
              rows[i - 1].estimate.ser + rows[i].estimate.ci_half_width +
                  rows[i - 1].estimate.ci_half_width);
    }
}

TEST_CASE("detector sandwich: exact ML beats both degenerate receivers", "[montecarlo]") {
    // paired trials at one operating point: SER(ml) <= SER(cd), SER(pd), and
    // SER(low_complexity), all up to twice the Monte Carlo standard error
    SweepConfig c;
    c.constellation = make_qam(4);
    c.params_base.var_antenna = 1.0;
    c.params_base.var_conversion = 1.0;
    c.params_base.var_rectifier = 0.5;
    c.rho_grid = {0.5};
    c.power_grid = {20.0};
    c.detectors = {DetectorId::Ml3d, DetectorId::LowComplexity, DetectorId::Cd, DetectorId::Pd};
    c.trials = 100000;
    c.master_seed = 13;
    const auto rows = sweep_rho(c);
    REQUIRE(rows.size() == 4);
    double ser_ml = 0, ser_lc = 0, ser_cd = 0, ser_pd = 0;
    for (const auto& r : rows) {
        if (r.detector == DetectorId::Ml3d) ser_ml = r.estimate.ser;
        if (r.detector == DetectorId::LowComplexity) ser_lc = r.estimate.ser;
        if (r.detector == DetectorId::Cd) ser_cd = r.estimate.ser;
        if (r.detector == DetectorId::Pd) ser_pd = r.estimate.ser;
    }
    const double n = static_cast<double>(c.trials);
    auto two_se = [&](double s) { return 2.0 * std::sqrt(std::max(s, 1e-6) * (1 - s) / n); };
    CHECK(ser_ml <= ser_lc + two_se(ser_lc));
    CHECK(ser_ml <= ser_cd + two_se(ser_cd));
    CHECK(ser_ml <= ser_pd + two_se(ser_pd));
}

TEST_CASE("joint gain: requirements and the degenerate noiseless-postprocessing limit", "[montecarlo]") {
    SweepConfig c;
    c.constellation = make_qam(16);
    c.params_base.var_antenna = 1.0;
    c.params_base.var_conversion = 0.0;
    c.params_base.var_rectifier = 0.0;
    c.rho_grid = {0.3, 0.5, 0.7};
    c.power_grid = {30.0};
    c.detectors = {DetectorId::Cd, DetectorId::Pd, DetectorId::LowComplexity};
    c.trials = 20000;
    c.master_seed = 5;

    SECTION("missing pd is rejected") {
        c.detectors = {DetectorId::Cd, DetectorId::LowComplexity};
        CHECK_THROWS_AS(joint_gain(c), std::invalid_argument);
    }

    SECTION("empty interior grid is rejected") {
        c.rho_grid = {1.0};
        CHECK_THROWS_AS(joint_gain(c), std::invalid_argument);
    }

    SECTION("zero post-processing noise makes splitting equal CD, gain 1") {
        // with no conversion and rectifier noise the collapsed observation
        // reconstructs sqrt(P)|h|x + W exactly at any rho, so CD and the
        // splitting detector see identical effective noise; with common random
        // numbers the verdicts coincide trial by trial
        const auto reps = joint_gain(c);
        REQUIRE(reps.size() == 1);
        REQUIRE(reps[0].gain.has_value());
        CHECK(*reps[0].gain == Catch::Approx(1.0).margin(1e-12));
        CHECK(reps[0].ser_cd == Catch::Approx(reps[0].ser_split_best).margin(1e-12));
        CHECK(reps[0].best_rho > 0.0);
        CHECK(reps[0].best_rho < 1.0);
    }
}

TEST_CASE("joint gain favors splitting at high power", "[montecarlo]") {
    SweepConfig c;
    c.constellation = make_qam(16);
    c.params_base.var_antenna = 1.0;
    c.params_base.var_conversion = 1.0;
    c.params_base.var_rectifier = 0.1;
    c.rho_grid = {0.3, 0.5, 0.7, 0.9};
    c.power_grid = {100.0};
    c.detectors = {DetectorId::Cd, DetectorId::Pd, DetectorId::LowComplexity};
    c.trials = 50000;
    c.master_seed = 31;
    const auto reps = joint_gain(c);
    REQUIRE(reps.size() == 1);
    REQUIRE(reps[0].gain.has_value());
    CHECK(*reps[0].gain >= 1.0);
    CHECK(reps[0].ser_pd > reps[0].ser_split_best);  // PD strictly worse than splitting
}

TEST_CASE("power-only detection trails the splitting detector on 32-APSK", "[montecarlo]") {
    SweepConfig c;
    c.constellation = make_apsk({6, 8, 8, 10});
    c.params_base.var_antenna = 1.0;
    c.params_base.var_conversion = 1.0;
    c.params_base.var_rectifier = 1.0;
    c.rho_grid = {0.5};
    c.power_grid = {300.0};
    c.detectors = {DetectorId::Pd, DetectorId::LowComplexity};
    c.trials = 20000;
    c.master_seed = 404;
    const auto rows = sweep_rho(c);
    REQUIRE(rows.size() == 2);
    double ser_pd = 0, ser_lc = 0;
    for (const auto& r : rows) {
        if (r.detector == DetectorId::Pd) ser_pd = r.estimate.ser;
        if (r.detector == DetectorId::LowComplexity) ser_lc = r.estimate.ser;
    }
    CHECK(ser_pd > ser_lc);  // paired draws: phase-blind detection must lose
}

TEST_CASE("Wilson interval coverage on the analytic QPSK case", "[montecarlo]") {
    // 100 independent replications; the nominal 95% interval must cover the
    // true SER at least 90 times
    const double gamma = 6.5614;
    ChannelParams p;
    p.rho = 1.0;
    p.var_antenna = 1.0;
    p.var_conversion = 1.0;
    p.var_rectifier = 0.1;
    p.power = gamma * (p.var_antenna + p.var_conversion);
    const double truth = qpsk_cd_ser(gamma);
    const auto cons = make_psk(4);

    int covered = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const auto est = estimate_ser(cons, p, DetectorId::Cd, 4000, 9000 + rep);
        if (std::abs(est.ser - truth) <= est.ci_half_width) ++covered;
    }
    CHECK(covered >= 90);
}
