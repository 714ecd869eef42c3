#pragma once

// Monte Carlo SER estimation: rho/power sweeps and the joint processing gain.
//
// Determinism contract: trials are partitioned into fixed-size blocks, each
// block owns an RNG stream seeded from (master seed, grid index, block index),
// block results land in a preallocated slot array, and the reduction walks the
// slots in index order. Output is therefore byte-identical for any worker
// count. All detectors at a grid point consume the same symbol and noise
// draws (common random numbers), which sharpens detector comparisons.

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "splitrx/channel.hpp"
#include "splitrx/constellation.hpp"
#include "splitrx/detect.hpp"
#include "splitrx/quadrature.hpp"
#include "splitrx/rng.hpp"
#include "splitrx/stats.hpp"

namespace splitrx {

struct SerEstimate {
    std::uint64_t errors = 0;
    std::uint64_t trials = 0;
    double ser = 0.0;
    double ci_half_width = 0.0;
    std::uint64_t seed = 0;
};

struct SweepConfig {
    Constellation constellation;
    ChannelParams params_base;          // rho/power fields overridden per grid point
    std::vector<double> rho_grid;
    std::vector<double> power_grid;
    std::vector<DetectorId> detectors;
    std::uint64_t trials = 100000;
    std::uint64_t master_seed = 1;
    double ci_level = 0.95;
    int ml3d_stride = 1;                // run the ML oracle every k-th rho point
    int quad_order = 48;
    LikelihoodMethod method = LikelihoodMethod::RadialBessel;
    int workers = 0;                    // 0 = hardware concurrency (capped by SPLITRX_THREADS)

    void validate() const {
        auto fail = [](const std::string& m) { throw std::invalid_argument("SweepConfig: " + m); };
        if (constellation.points.empty()) fail("constellation is empty");
        if (trials < 1000) fail("trials must be >= 1000");
        if (rho_grid.empty()) fail("rho grid is empty");
        if (power_grid.empty()) fail("power grid is empty");
        if (detectors.empty()) fail("detector list is empty");
        if (!(ci_level > 0.0 && ci_level < 1.0)) fail("ci_level must be in (0,1)");
        if (ml3d_stride < 1) fail("ml3d_stride must be >= 1");
        for (std::size_t i = 0; i < rho_grid.size(); ++i) {
            if (!(rho_grid[i] >= 0.0 && rho_grid[i] <= 1.0)) fail("rho values must be in [0,1]");
            if (i > 0 && !(rho_grid[i] > rho_grid[i - 1])) fail("rho grid must be strictly increasing");
        }
        for (std::size_t i = 0; i < power_grid.size(); ++i) {
            if (!(power_grid[i] > 0.0)) fail("power values must be > 0");
            if (i > 0 && !(power_grid[i] > power_grid[i - 1])) fail("power grid must be strictly increasing");
        }
        ChannelParams p = params_base;
        p.rho = rho_grid.front();
        p.power = power_grid.front();
        p.validate();
    }
};

struct SweepRow {
    double power = 0.0;
    double rho = 0.0;
    DetectorId detector = DetectorId::LowComplexity;
    SerEstimate estimate;
};

struct GainReport {
    double power = 0.0;
    double ser_cd = 0.0;
    double ser_pd = 0.0;
    double ser_split_best = 0.0;
    double best_rho = 0.0;
    std::optional<double> gain;  // min(ser_cd, ser_pd) / ser_split_best; empty when undefined
};

inline int resolve_workers(int requested) {
    int w = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (w < 1) w = 1;
    if (const char* cap_str = std::getenv("SPLITRX_THREADS")) {
        const int cap = std::atoi(cap_str);
        if (cap >= 1 && cap < w) w = cap;
    }
    return w;
}

namespace detail {

constexpr std::uint64_t kBlockTrials = 8192;

// One grid point's detector set, with shared immutable per-detector state.
struct PointDetectors {
    const Constellation* cons;
    ChannelParams params;
    std::vector<DetectorId> active;
    std::optional<LcTable> lc;        // built when LC runs or as the ML hint
    std::optional<MlContext> ml;
    std::optional<PdContext> pd;
    const QuadratureSpec* quad = nullptr;

    PointDetectors(const Constellation& c, const ChannelParams& p,
                   const std::vector<DetectorId>& detectors, const QuadratureSpec& q)
        : cons(&c), params(p), active(detectors), quad(&q) {
        bool want_ml = false, want_lc = false, want_pd = false;
        for (DetectorId d : active) {
            if (d == DetectorId::LowComplexity) want_lc = true;
            if (d == DetectorId::Ml3d) want_ml = true;
            if (d == DetectorId::Pd) want_pd = true;
        }
        if (want_lc && !(p.rho > 0.0 && p.rho < 1.0))
            throw SplitterDegenerate("low_complexity detector requested at grid point rho = " +
                                     std::to_string(p.rho) + ", power = " + std::to_string(p.power) +
                                     "; use cd at rho=1 or pd at rho=0");
        if (want_ml) require_nondegenerate_3d(p);
        const bool hint_ok = p.rho > 0.0 && p.rho < 1.0;
        if (want_lc || (want_ml && hint_ok)) lc.emplace(c, p);
        if (want_ml) ml.emplace(c, p);
        if (want_pd) pd.emplace(c, p);
    }

    int classify(DetectorId d, const SplitObservation& obs, int lc_verdict) const {
        switch (d) {
            case DetectorId::LowComplexity:
                return lc_verdict;
            case DetectorId::Ml3d:
                return ml->classify(obs, *quad, lc_verdict);
            case DetectorId::Cd: {
                const double scale = std::sqrt(params.rho * params.power) * params.gain;
                int best = 0;
                double bd = std::numeric_limits<double>::infinity();
                for (const auto& pt : cons->points) {
                    const double m = std::norm(obs.coherent - scale * pt.value);
                    if (m < bd) {
                        bd = m;
                        best = pt.index;
                    }
                }
                return best;
            }
            default:
                return pd->classify(obs, *quad);
        }
    }
};

// Run all of a grid point's detectors over `trials` paired draws; returns
// per-detector error counts in the order of `pd.active`.
inline std::vector<std::uint64_t> run_point(const PointDetectors& det, std::uint64_t trials,
                                            std::uint64_t point_seed, int workers) {
    const std::uint64_t n_blocks = (trials + kBlockTrials - 1) / kBlockTrials;
    const std::size_t n_det = det.active.size();
    std::vector<std::uint64_t> block_errors(n_blocks * n_det, 0);

    std::atomic<std::uint64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= n_blocks) return;
            const std::uint64_t start = b * kBlockTrials;
            const std::uint64_t count = std::min<std::uint64_t>(kBlockTrials, trials - start);
            Rng rng(derive_seed(point_seed, b));
            std::vector<std::uint64_t> errs(n_det, 0);
            const std::uint64_t order = det.cons->points.size();
            for (std::uint64_t t = 0; t < count; ++t) {
                const int sym = static_cast<int>(rng.uniform_index(order));
                const NoiseDraw noise = draw_noise(det.params, rng);
                const SplitObservation obs = transmit(det.cons->points[sym], det.params, noise);
                const int lc_verdict = det.lc ? det.lc->classify(obs) : 0;
                for (std::size_t di = 0; di < n_det; ++di)
                    errs[di] += det.classify(det.active[di], obs, lc_verdict) != sym ? 1 : 0;
            }
            for (std::size_t di = 0; di < n_det; ++di) block_errors[b * n_det + di] = errs[di];
        }
    };

    const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(n_blocks)));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<std::uint64_t> totals(n_det, 0);
    for (std::uint64_t b = 0; b < n_blocks; ++b)
        for (std::size_t di = 0; di < n_det; ++di) totals[di] += block_errors[b * n_det + di];
    return totals;
}

inline SerEstimate make_estimate(std::uint64_t errors, std::uint64_t trials, double ci_level,
                                 std::uint64_t seed) {
    SerEstimate e;
    e.errors = errors;
    e.trials = trials;
    e.ser = static_cast<double>(errors) / static_cast<double>(trials);
    e.ci_half_width = wilson_half_width(errors, trials, ci_level);
    e.seed = seed;
    return e;
}

}  // namespace detail

// SER of one detector at one operating point. Deterministic in `seed`.
inline SerEstimate estimate_ser(const Constellation& cons, const ChannelParams& params,
                                DetectorId detector, std::uint64_t trials, std::uint64_t seed,
                                double ci_level = 0.95, const QuadratureSpec& quad = QuadratureSpec(),
                                int workers = 1) {
    params.validate();
    if (trials == 0) throw std::invalid_argument("estimate_ser: trials must be > 0");
    const detail::PointDetectors det(cons, params, {detector}, quad);
    const auto errors = detail::run_point(det, trials, seed, resolve_workers(workers));
    return detail::make_estimate(errors[0], trials, ci_level, seed);
}

// SER over the (power x rho) grid for every configured detector, with common
// random numbers across detectors at each grid point. The ML oracle runs only
// on every ml3d_stride-th rho index.
inline std::vector<SweepRow> sweep_rho(const SweepConfig& config) {
    config.validate();
    const QuadratureSpec quad(config.quad_order, config.method);
    const int workers = resolve_workers(config.workers);
    std::vector<SweepRow> rows;

    std::uint64_t point_index = 0;
    for (double power : config.power_grid) {
        for (std::size_t ri = 0; ri < config.rho_grid.size(); ++ri, ++point_index) {
            ChannelParams p = config.params_base;
            p.power = power;
            p.rho = config.rho_grid[ri];
            std::vector<DetectorId> active;
            for (DetectorId d : config.detectors) {
                if (d == DetectorId::Ml3d && ri % static_cast<std::size_t>(config.ml3d_stride) != 0)
                    continue;
                active.push_back(d);
            }
            if (active.empty()) continue;
            const std::uint64_t point_seed = derive_seed(config.master_seed, point_index);
            const detail::PointDetectors det(config.constellation, p, active, quad);
            const auto errors = detail::run_point(det, config.trials, point_seed, workers);
            for (std::size_t di = 0; di < active.size(); ++di) {
                SweepRow row;
                row.power = power;
                row.rho = p.rho;
                row.detector = active[di];
                row.estimate =
                    detail::make_estimate(errors[di], config.trials, config.ci_level, point_seed);
                rows.push_back(row);
            }
        }
    }
    return rows;
}

// Joint processing gain per power level: the best traditional receiver's SER
// (CD at rho=1, PD at rho=0) over the best interior-rho splitting SER. All
// receivers see the same noise draws at a given power level.
inline std::vector<GainReport> joint_gain(const SweepConfig& config) {
    config.validate();
    std::vector<double> interior;
    for (double r : config.rho_grid)
        if (r > 0.0 && r < 1.0) interior.push_back(r);
    if (interior.empty())
        throw std::invalid_argument("joint_gain: rho grid needs interior points in (0,1)");

    bool has_cd = false, has_pd = false;
    DetectorId split = DetectorId::LowComplexity;
    bool has_split = false;
    for (DetectorId d : config.detectors) {
        if (d == DetectorId::Cd) has_cd = true;
        else if (d == DetectorId::Pd) has_pd = true;
        else if (!has_split) {
            split = d;
            has_split = true;
        }
    }
    if (!has_cd || !has_pd || !has_split)
        throw std::invalid_argument("joint_gain: detectors must include cd, pd and a splitting detector");

    const QuadratureSpec quad(config.quad_order, config.method);
    const int workers = resolve_workers(config.workers);
    const std::uint64_t n_blocks = (config.trials + detail::kBlockTrials - 1) / detail::kBlockTrials;
    const std::size_t n_counters = 2 + interior.size();  // cd, pd, split per rho

    std::vector<GainReport> reports;
    std::uint64_t point_index = 0;
    for (double power : config.power_grid) {
        ChannelParams base = config.params_base;
        base.power = power;

        ChannelParams p_cd = base;
        p_cd.rho = 1.0;
        ChannelParams p_pd = base;
        p_pd.rho = 0.0;
        const detail::PdContext pd_ctx(config.constellation, p_pd);

        std::vector<ChannelParams> p_split;
        std::vector<detail::PointDetectors> split_dets;
        p_split.reserve(interior.size());
        split_dets.reserve(interior.size());
        for (double r : interior) {
            ChannelParams p = base;
            p.rho = r;
            p_split.push_back(p);
            split_dets.emplace_back(config.constellation, p, std::vector<DetectorId>{split}, quad);
        }

        const std::uint64_t point_seed = derive_seed(config.master_seed, point_index++);
        std::vector<std::uint64_t> block_errors(n_blocks * n_counters, 0);
        std::atomic<std::uint64_t> next{0};
        const double cd_scale = std::sqrt(p_cd.rho * p_cd.power) * p_cd.gain;

        auto worker = [&]() {
            for (;;) {
                const std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
                if (b >= n_blocks) return;
                const std::uint64_t start = b * detail::kBlockTrials;
                const std::uint64_t count =
                    std::min<std::uint64_t>(detail::kBlockTrials, config.trials - start);
                Rng rng(derive_seed(point_seed, b));
                std::vector<std::uint64_t> errs(n_counters, 0);
                const std::uint64_t order = config.constellation.points.size();
                for (std::uint64_t t = 0; t < count; ++t) {
                    const int sym = static_cast<int>(rng.uniform_index(order));
                    const auto& x = config.constellation.points[sym];
                    const NoiseDraw noise = draw_noise(base, rng);

                    const SplitObservation obs_cd = transmit(x, p_cd, noise);
                    int best = 0;
                    double bd = std::numeric_limits<double>::infinity();
                    for (const auto& pt : config.constellation.points) {
                        const double m = std::norm(obs_cd.coherent - cd_scale * pt.value);
                        if (m < bd) {
                            bd = m;
                            best = pt.index;
                        }
                    }
                    errs[0] += best != sym ? 1 : 0;

                    const SplitObservation obs_pd = transmit(x, p_pd, noise);
                    errs[1] += pd_ctx.classify(obs_pd, quad) != sym ? 1 : 0;

                    for (std::size_t si = 0; si < interior.size(); ++si) {
                        const SplitObservation obs = transmit(x, p_split[si], noise);
                        const auto& det = split_dets[si];
                        const int lc_verdict = det.lc ? det.lc->classify(obs) : 0;
                        errs[2 + si] += det.classify(split, obs, lc_verdict) != sym ? 1 : 0;
                    }
                }
                for (std::size_t i = 0; i < n_counters; ++i)
                    block_errors[b * n_counters + i] = errs[i];
            }
        };

        const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(n_blocks)));
        if (n_workers == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }

        std::vector<std::uint64_t> totals(n_counters, 0);
        for (std::uint64_t b = 0; b < n_blocks; ++b)
            for (std::size_t i = 0; i < n_counters; ++i) totals[i] += block_errors[b * n_counters + i];

        GainReport rep;
        rep.power = power;
        const double n = static_cast<double>(config.trials);
        rep.ser_cd = static_cast<double>(totals[0]) / n;
        rep.ser_pd = static_cast<double>(totals[1]) / n;
        std::size_t best_si = 0;
        for (std::size_t si = 1; si < interior.size(); ++si)
            if (totals[2 + si] < totals[2 + best_si]) best_si = si;
        rep.ser_split_best = static_cast<double>(totals[2 + best_si]) / n;
        rep.best_rho = interior[best_si];
        if (rep.ser_split_best > 0.0)
            rep.gain = std::min(rep.ser_cd, rep.ser_pd) / rep.ser_split_best;
        reports.push_back(rep);
    }
    return reports;
}

}  // namespace splitrx
