#pragma once

// Symbol detectors for the splitting receiver.
//
//  * detect_low_complexity -- the weighted minimum-distance rule on the
//    collapsed 2D signal (the Upsilon statistic). O(M) multiplications.
//  * detect_ml_3d          -- exact maximum likelihood on the full (Y1, Y2)
//    pair, marginalizing the antenna noise numerically.
//  * detect_cd / detect_pd -- the degenerate single-branch receivers.
//
// The ML likelihood integral is evaluated, by default, after an exact polar
// reduction: the angular part of the antenna-noise integral has a closed form
// in I0, leaving a 1D radial integral that a peak-centered Gauss-Hermite rule
// resolves at any SNR. The plain cartesian Gauss-Hermite product rule over
// the antenna noise is kept as a cross-check; at high SNR the rectifier
// density is a ridge far narrower than its node spacing and the product rule
// degrades, so it should only be trusted at low/moderate SNR.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "splitrx/channel.hpp"
#include "splitrx/constellation.hpp"
#include "splitrx/errors.hpp"
#include "splitrx/quadrature.hpp"
#include "splitrx/special.hpp"

namespace splitrx {

enum class DetectorId { LowComplexity, Ml3d, Cd, Pd };

inline const char* detector_name(DetectorId d) {
    switch (d) {
        case DetectorId::LowComplexity: return "low_complexity";
        case DetectorId::Ml3d: return "ml_3d";
        case DetectorId::Cd: return "cd";
        default: return "pd";
    }
}

// Second-moment model of the collapsed 2D signal around sqrt(P)|h| X for a
// symbol with phase theta: per-axis variances, their correlation, and the
// variances after rotating into the symbol-aligned frame.
struct ApproxNoiseModel {
    double var_r = 0.0;      // variance of the in-phase component
    double var_i = 0.0;      // variance of the quadrature component
    double corr = 0.0;       // correlation coefficient between them
    double var_r_rot = 0.0;  // radial variance after rotation
    double var_i_rot = 0.0;  // tangential variance after rotation
};

inline ApproxNoiseModel approx_noise_model(const ChannelParams& params, double theta) {
    if (!(params.rho > 0.0))
        throw SplitterDegenerate("approximate 2D model needs rho > 0");
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    ApproxNoiseModel m;
    m.var_r = params.var_antenna / 2.0 + s * s * params.var_conversion / (2.0 * params.rho);
    m.var_i = params.var_antenna / 2.0 + c * c * params.var_conversion / (2.0 * params.rho);
    m.corr = -s * c * params.var_conversion / (2.0 * params.rho * std::sqrt(m.var_r * m.var_i));
    m.var_r_rot = params.var_antenna / 2.0;
    m.var_i_rot = params.var_antenna / 2.0 + params.var_conversion / (2.0 * params.rho);
    return m;
}

struct RotatedObservation {
    double r_prime = 0.0;
    double i_prime = 0.0;
};

struct DetectorVerdict {
    int symbol_index = 0;
    std::vector<double> metrics;  // Upsilon (min wins) or log-likelihood (max wins)
    std::optional<std::uint64_t> mult_count;
};

// Collapse the raw sample pair to one complex number: magnitude from the
// power branch, phase from the coherent branch. Negative power samples clamp
// to zero magnitude; a zero coherent sample gets phase 0.
inline std::complex<double> collapse_2d(const SplitObservation& obs) {
    const double mag = std::sqrt(std::max(obs.power, 0.0));
    if (obs.coherent == std::complex<double>(0.0, 0.0)) return {mag, 0.0};
    const double ph = std::arg(obs.coherent);
    return std::polar(mag, ph);
}

// Map a raw observation into the detection frame where the noiseless signal
// sits at sqrt(P)|h| X: unit-scale both branches, collapse, and rescale.
// Dividing the coherent branch leaves its phase untouched, so this reduces to
// sqrt(max(Y2,0)/(1-rho)) e^{j angle(Y1)}.
inline std::complex<double> detection_frame_point(const SplitObservation& obs,
                                                  const ChannelParams& params) {
    const SplitObservation unit{obs.coherent, obs.power / (1.0 - params.rho)};
    return collapse_2d(unit);
}

// Rotate a detection-frame point into the frame aligned with a candidate
// symbol and recenter on its magnitude. In the rotated frame the two noise
// components are uncorrelated.
inline RotatedObservation rotate(const std::complex<double>& y, const ConstellationPoint& candidate,
                                 const ChannelParams& params) {
    const double ct = candidate.value.real() / candidate.magnitude;
    const double st = candidate.value.imag() / candidate.magnitude;
    const double scaled_mag = std::sqrt(params.power) * params.gain * candidate.magnitude;
    RotatedObservation r;
    r.r_prime = y.real() * ct + y.imag() * st - scaled_mag;
    r.i_prime = y.imag() * ct - y.real() * st;
    return r;
}

namespace detail {

// Straight-line Upsilon evaluation, generic over the scalar type so an
// instrumented scalar can tally its multiplications. `scaled_gain` is
// sqrt(P)|h| and `denom_tang` is var_antenna + var_conversion/rho; both are
// candidate-independent and computed once per detection.
template <typename Real>
Real upsilon_impl(Real y_r, Real y_i, Real cand_re, Real cand_im, Real cand_mag, Real scaled_gain,
                  Real var_a, Real denom_tang) {
    const Real cos_t = cand_re / cand_mag;
    const Real sin_t = cand_im / cand_mag;
    const Real radial = y_r * cos_t + y_i * sin_t - scaled_gain * cand_mag;
    const Real t_radial = radial * radial / var_a;
    const Real cross = y_i * cand_re - y_r * cand_im;
    const Real t_tang = cross * cross / (cand_mag * cand_mag) / denom_tang;
    return t_radial + t_tang;
}

}  // namespace detail

struct OpCount {
    std::uint64_t mul = 0;
    std::uint64_t div = 0;
    std::uint64_t total() const { return mul + div; }
};

namespace detail {

// Scalar that tallies every multiplication and division routed through it.
class CountedDouble {
  public:
    CountedDouble(double v, OpCount* c) : v_(v), c_(c) {}
    double value() const { return v_; }

    friend CountedDouble operator*(const CountedDouble& a, const CountedDouble& b) {
        ++a.c_->mul;
        return {a.v_ * b.v_, a.c_};
    }
    friend CountedDouble operator/(const CountedDouble& a, const CountedDouble& b) {
        ++a.c_->div;
        return {a.v_ / b.v_, a.c_};
    }
    friend CountedDouble operator+(const CountedDouble& a, const CountedDouble& b) {
        return {a.v_ + b.v_, a.c_};
    }
    friend CountedDouble operator-(const CountedDouble& a, const CountedDouble& b) {
        return {a.v_ - b.v_, a.c_};
    }

  private:
    double v_;
    OpCount* c_;
};

}  // namespace detail

// Upsilon decision metric for one candidate: the weighted squared distance in
// the candidate-aligned frame, radial residual against var_antenna and
// tangential residual against var_antenna + var_conversion/rho. The argmin
// over the alphabet is the low-complexity detection rule.
inline double upsilon(const std::complex<double>& y, const ConstellationPoint& candidate,
                      const ChannelParams& params) {
    if (!(params.rho > 0.0))
        throw SplitterDegenerate("upsilon needs rho > 0; use the PD path at rho = 0");
    if (!(candidate.magnitude > 0.0))
        throw std::invalid_argument("upsilon needs a candidate away from the origin");
    if (!(params.var_antenna > 0.0))
        throw std::invalid_argument("upsilon needs var_antenna > 0");
    const double scaled_gain = std::sqrt(params.power) * params.gain;
    const double denom_tang = params.var_antenna + params.var_conversion / params.rho;
    return detail::upsilon_impl<double>(y.real(), y.imag(), candidate.value.real(),
                                        candidate.value.imag(), candidate.magnitude, scaled_gain,
                                        params.var_antenna, denom_tang);
}

namespace detail {

// Per-candidate table for the low-complexity detector hot loop.
struct LcTable {
    double scaled_gain = 0.0;
    double inv_var_a = 0.0;
    double inv_denom_tang = 0.0;
    double inv_one_minus_rho = 0.0;
    struct Entry {
        double cos_t, sin_t, scaled_mag, re, im, inv_mag2;
    };
    std::vector<Entry> entries;

    LcTable(const Constellation& cons, const ChannelParams& params) {
        scaled_gain = std::sqrt(params.power) * params.gain;
        inv_var_a = 1.0 / params.var_antenna;
        inv_denom_tang = 1.0 / (params.var_antenna + params.var_conversion / params.rho);
        inv_one_minus_rho = 1.0 / (1.0 - params.rho);
        entries.reserve(cons.points.size());
        for (const auto& p : cons.points) {
            Entry e;
            e.cos_t = p.value.real() / p.magnitude;
            e.sin_t = p.value.imag() / p.magnitude;
            e.scaled_mag = scaled_gain * p.magnitude;
            e.re = p.value.real();
            e.im = p.value.imag();
            e.inv_mag2 = 1.0 / (p.magnitude * p.magnitude);
            entries.push_back(e);
        }
    }

    double metric(double y_r, double y_i, const Entry& e) const {
        const double radial = y_r * e.cos_t + y_i * e.sin_t - e.scaled_mag;
        const double cross = y_i * e.re - y_r * e.im;
        return radial * radial * inv_var_a + cross * cross * e.inv_mag2 * inv_denom_tang;
    }

    int classify(const SplitObservation& obs) const {
        const double mag = std::sqrt(std::max(obs.power, 0.0) * inv_one_minus_rho);
        double y_r, y_i;
        if (obs.coherent == std::complex<double>(0.0, 0.0)) {
            y_r = mag;
            y_i = 0.0;
        } else {
            const double ph = std::arg(obs.coherent);
            y_r = mag * std::cos(ph);
            y_i = mag * std::sin(ph);
        }
        int best = 0;
        double best_metric = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < entries.size(); ++k) {
            const double m = metric(y_r, y_i, entries[k]);
            if (m < best_metric) {
                best_metric = m;
                best = static_cast<int>(k);
            }
        }
        return best;
    }
};

}  // namespace detail

// The proposed low-complexity detector: collapse to the detection frame and
// minimize Upsilon over the alphabet. Ties go to the lowest symbol index.
inline DetectorVerdict detect_low_complexity(const SplitObservation& obs, const Constellation& cons,
                                             const ChannelParams& params) {
    params.validate();
    if (!(params.rho > 0.0 && params.rho < 1.0))
        throw SplitterDegenerate("low-complexity detector needs rho in (0,1); use detect_cd at rho=1 or detect_pd at rho=0");
    if (!(params.var_antenna > 0.0))
        throw std::invalid_argument("low-complexity detector needs var_antenna > 0");
    const std::complex<double> y = detection_frame_point(obs, params);
    const double scaled_gain = std::sqrt(params.power) * params.gain;
    const double denom_tang = params.var_antenna + params.var_conversion / params.rho;

    DetectorVerdict v;
    v.metrics.reserve(cons.points.size());
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : cons.points) {
        const double m = detail::upsilon_impl<double>(y.real(), y.imag(), p.value.real(),
                                                      p.value.imag(), p.magnitude, scaled_gain,
                                                      params.var_antenna, denom_tang);
        v.metrics.push_back(m);
        if (m < best) {
            best = m;
            v.symbol_index = p.index;
        }
    }
    {
        OpCount c;
        using CD = detail::CountedDouble;
        const auto& p0 = cons.points.front();
        detail::upsilon_impl<CD>(CD(y.real(), &c), CD(y.imag(), &c), CD(p0.value.real(), &c),
                                 CD(p0.value.imag(), &c), CD(p0.magnitude, &c), CD(scaled_gain, &c),
                                 CD(params.var_antenna, &c), CD(denom_tang, &c));
        v.mult_count = c.total();
    }
    return v;
}

// Coherent-only receiver: nearest neighbor of Y1 against the scaled alphabet
// sqrt(rho P)|h| X, the ML rule for the isotropic coherent-branch noise.
inline DetectorVerdict detect_cd(const SplitObservation& obs, const Constellation& cons,
                                 const ChannelParams& params) {
    params.validate();
    const double scale = std::sqrt(params.rho * params.power) * params.gain;
    DetectorVerdict v;
    v.metrics.reserve(cons.points.size());
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : cons.points) {
        const double m = std::norm(obs.coherent - scale * p.value);
        v.metrics.push_back(m);
        if (m < best) {
            best = m;
            v.symbol_index = p.index;
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Exact 3D likelihood
// ---------------------------------------------------------------------------

namespace detail {

// Radial reduction of the antenna-noise integral. Writing u = sqrt(P)|h|X + w
// in polar form u = sqrt(v) e^{j psi}, the psi integral of the combined
// coherent/antenna Gaussian factors is 2 pi I0(2 sqrt(v) |gamma|) with
// gamma = c/var_A + sqrt(rho) Y1 / var_cov, and the rectifier factor becomes
// a Gaussian in v. What remains is
//   integral over v >= 0 of N(v; m_v, s_v^2) exp(-alpha v) I0(2 sqrt(v) g)
// with m_v = Y2/(1-rho), s_v = sigma_rec/(1-rho), alpha = 1/var_A + rho/var_cov.
struct RadialIntegrand {
    double m_v, s_v, alpha, g;

    // substituted s = sqrt(v): no branch point, and the high-SNR ridge is a
    // plain Gaussian bump in s. log of the s-integrand 2 s h(s^2).
    double log_hs(double s) const {
        const double v = s * s;
        const double d = v - m_v;
        return std::log(2.0 * s) - d * d / (2.0 * s_v * s_v) - alpha * v +
               log_bessel_i0(2.0 * s * g);
    }
};

// log of integral over s > 0 of 2 s h(s^2) ds. The s-integrand is unimodal
// (any stationary point of its log-derivative has strictly negative slope),
// so a golden-section search finds the single peak. When the peak sits far
// enough from s=0 that no node can cross the boundary, a Gauss-Hermite rule
// centered on the peak integrates it; the span test uses a fixed constant
// covering every supported order so that order doubling never switches
// methods. Otherwise a dense Gauss-Legendre rule over the bounded support
// takes over.
inline double log_radial_integral(const RadialIntegrand& f, const QuadratureSpec& quad) {
    const double v_hi = std::max(f.m_v, 0.0) + 14.0 * f.s_v +
                        4.0 * (f.g / f.alpha) * (f.g / f.alpha) + 20.0 / f.alpha;
    const double s_span = std::sqrt(v_hi);

    double lo = 0.0;
    double hi = s_span;
    const double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f.log_hs(x1);
    double f2 = f.log_hs(x2);
    for (int it = 0; it < 90 && (hi - lo) > 1e-12 * s_span; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f.log_hs(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f.log_hs(x1);
        }
    }
    const double s_star = 0.5 * (lo + hi);

    // local curvature of the log-integrand at the peak
    const double step = std::max(1e-6 * (1.0 + s_star), 1e-10);
    double sigma = 0.0;
    bool centered_ok = s_star > 2.0 * step && s_star < s_span * (1.0 - 1e-9);
    if (centered_ok) {
        const double fm = f.log_hs(s_star - step);
        const double f0 = f.log_hs(s_star);
        const double fp = f.log_hs(s_star + step);
        const double dd = (fp - 2.0 * f0 + fm) / (step * step);
        if (dd < 0.0)
            sigma = 1.0 / std::sqrt(-dd);
        else
            centered_ok = false;
    }
    // sqrt(2) * largest GH node is < 22 for every supported order (<= 128),
    // so this test keeps all nodes strictly positive
    constexpr double kGhSpanLimit = 22.0;
    centered_ok = centered_ok && s_star > kGhSpanLimit * sigma;

    const double neg_inf = -std::numeric_limits<double>::infinity();
    thread_local std::vector<double> expo;
    double max_e = neg_inf;
    double log_scale = 0.0;

    if (centered_ok) {
        // integral = sqrt(2) sigma * sum w_k e^{t_k^2} hs(s_star + sqrt(2) sigma t_k)
        const auto& gh = quad.hermite;
        expo.assign(gh.node.size(), neg_inf);
        for (std::size_t k = 0; k < gh.node.size(); ++k) {
            const double t = gh.node[k];
            const double s = s_star + std::numbers::sqrt2 * sigma * t;
            if (s <= 0.0) continue;
            expo[k] = std::log(gh.weight[k]) + t * t + f.log_hs(s);
            max_e = std::max(max_e, expo[k]);
        }
        log_scale = std::log(std::numbers::sqrt2 * sigma);
    } else {
        const auto& gl = quad.fallback_legendre;
        const double half = 0.5 * s_span;
        expo.assign(gl.node.size(), neg_inf);
        for (std::size_t k = 0; k < gl.node.size(); ++k) {
            const double s = half * (gl.node[k] + 1.0);
            if (s <= 0.0) continue;
            expo[k] = std::log(gl.weight[k] * half) + f.log_hs(s);
            max_e = std::max(max_e, expo[k]);
        }
    }
    if (max_e == neg_inf) return neg_inf;
    double acc = 0.0;
    for (double e : expo)
        if (e != neg_inf) acc += std::exp(e - max_e);
    return log_scale + max_e + std::log(acc);
}

// Per-candidate quantities shared by the ML hot loop.
struct MlCandidate {
    std::complex<double> center;       // sqrt(P)|h| X
    double center_norm = 0.0;          // |center|^2
};

struct MlContext {
    double rho, var_a, var_cov, var_rec;
    double sqrt_rho;
    double inv_one_minus_rho = 0.0;
    double s_v = 0.0;     // sigma_rec / (1 - rho); observation-independent
    double alpha;
    double log_pref;      // method-independent prefactor
    std::vector<MlCandidate> candidates;

    MlContext(const Constellation& cons, const ChannelParams& params)
        : rho(params.rho),
          var_a(params.var_antenna),
          var_cov(params.var_conversion),
          var_rec(params.var_rectifier),
          sqrt_rho(std::sqrt(params.rho)),
          alpha(1.0 / params.var_antenna + params.rho / params.var_conversion),
          log_pref(0.0) {
        const double scaled_gain = std::sqrt(params.power) * params.gain;
        candidates.reserve(cons.points.size());
        for (const auto& p : cons.points) {
            MlCandidate c;
            c.center = scaled_gain * p.value;
            c.center_norm = std::norm(c.center);
            candidates.push_back(c);
        }
        if (rho < 1.0) {
            inv_one_minus_rho = 1.0 / (1.0 - rho);
            s_v = std::sqrt(var_rec) * inv_one_minus_rho;
            log_pref = -std::log(std::numbers::pi * var_a * var_cov) - std::log(1.0 - rho) -
                       0.5 * std::log(2.0 * std::numbers::pi * s_v * s_v);
        }
    }

    // log f(Y1, Y2 | X) for candidate k via the radial reduction
    double log_lik_radial(const SplitObservation& obs, std::size_t k, const QuadratureSpec& quad) const {
        const auto& c = candidates[k];
        const std::complex<double> gamma = c.center / var_a + sqrt_rho * obs.coherent / var_cov;
        const double g = std::abs(gamma);
        const double log_const = -c.center_norm / var_a - std::norm(obs.coherent) / var_cov;
        RadialIntegrand f{obs.power * inv_one_minus_rho, s_v, alpha, g};
        return log_pref + log_const + log_radial_integral(f, quad);
    }

    // rigorous upper bound on log_lik_radial: the v-integrand's non-Gaussian
    // factor satisfies -alpha v + log I0(2 sqrt(v) g) <= g^2/alpha for all v
    double log_lik_upper_bound(const SplitObservation& obs, std::size_t k) const {
        const auto& c = candidates[k];
        const std::complex<double> gamma = c.center / var_a + sqrt_rho * obs.coherent / var_cov;
        const double g2 = std::norm(gamma);
        const double log_const = -c.center_norm / var_a - std::norm(obs.coherent) / var_cov;
        return log_pref + log_const + g2 / alpha;
    }

    // log f for candidate k via the plain cartesian product rule over the
    // antenna noise (validation path)
    double log_lik_cartesian(const SplitObservation& obs, std::size_t k, const QuadratureSpec& quad) const {
        const auto& gh = quad.hermite;
        const auto& c = candidates[k];
        const double sa = std::sqrt(var_a);
        const double inv_cov = 1.0 / var_cov;
        const double inv_2rec = 1.0 / (2.0 * var_rec);
        const double one_m_rho = 1.0 - rho;
        const double neg_inf = -std::numeric_limits<double>::infinity();
        double max_e = neg_inf;
        thread_local std::vector<double> expo;
        expo.assign(gh.node.size() * gh.node.size(), 0.0);
        std::size_t idx = 0;
        for (std::size_t a = 0; a < gh.node.size(); ++a) {
            const double wr = sa * gh.node[a];
            const double lwa = std::log(gh.weight[a]);
            for (std::size_t b = 0; b < gh.node.size(); ++b) {
                const double wi = sa * gh.node[b];
                const std::complex<double> u = c.center + std::complex<double>(wr, wi);
                const double d2 = std::norm(obs.coherent - sqrt_rho * u);
                const double pr = obs.power - one_m_rho * std::norm(u);
                const double e = lwa + std::log(gh.weight[b]) - d2 * inv_cov - pr * pr * inv_2rec;
                expo[idx++] = e;
                max_e = std::max(max_e, e);
            }
        }
        if (max_e == neg_inf) return neg_inf;
        double acc = 0.0;
        for (double e : expo) acc += std::exp(e - max_e);
        const double log_norm = -std::log(std::numbers::pi * var_cov) -
                                0.5 * std::log(2.0 * std::numbers::pi * var_rec) -
                                std::log(std::numbers::pi);
        return log_norm + max_e + std::log(acc);
    }

    // closed form at rho = 1: Y2 is pure rectifier noise and Y1 is Gaussian
    double log_lik_rho_one(const SplitObservation& obs, std::size_t k) const {
        const double var1 = rho * var_a + var_cov;
        const double d2 = std::norm(obs.coherent - sqrt_rho * candidates[k].center);
        return -std::log(std::numbers::pi * var1) - d2 / var1 -
               0.5 * std::log(2.0 * std::numbers::pi * var_rec) -
               obs.power * obs.power / (2.0 * var_rec);
    }

    // closed form at var_antenna = 0: the antenna integral collapses and the
    // likelihood factorizes into two independent Gaussians
    double log_lik_no_antenna(const SplitObservation& obs, std::size_t k) const {
        const auto& c = candidates[k];
        const double d2 = std::norm(obs.coherent - sqrt_rho * c.center);
        const double pr = obs.power - (1.0 - rho) * c.center_norm;
        return -std::log(std::numbers::pi * var_cov) - d2 / var_cov -
               0.5 * std::log(2.0 * std::numbers::pi * var_rec) - pr * pr / (2.0 * var_rec);
    }

    double log_lik(const SplitObservation& obs, std::size_t k, const QuadratureSpec& quad) const {
        if (rho >= 1.0) return log_lik_rho_one(obs, k);
        if (var_a == 0.0) return log_lik_no_antenna(obs, k);
        if (quad.method == LikelihoodMethod::CartesianGH) return log_lik_cartesian(obs, k, quad);
        return log_lik_radial(obs, k, quad);
    }

    // exact argmax with rigorous-bound pruning; `hint` is evaluated first so
    // that most candidates are rejected on their bound alone
    int classify(const SplitObservation& obs, const QuadratureSpec& quad, int hint) const {
        if (rho >= 1.0) {
            // nearest neighbor in disguise; just evaluate all
            int best = 0;
            double best_ll = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < candidates.size(); ++k) {
                const double ll = log_lik_rho_one(obs, k);
                if (ll > best_ll) {
                    best_ll = ll;
                    best = static_cast<int>(k);
                }
            }
            return best;
        }
        constexpr double kPruneMargin = 2.0;  // log units; covers quadrature wobble
        const bool can_prune = quad.method == LikelihoodMethod::RadialBessel && var_a > 0.0;
        const std::size_t m = candidates.size();
        const std::size_t h = hint >= 0 && static_cast<std::size_t>(hint) < m ? hint : 0;
        int best = static_cast<int>(h);
        double best_ll = log_lik(obs, h, quad);
        for (std::size_t k = 0; k < m; ++k) {
            if (k == h) continue;
            if (can_prune && log_lik_upper_bound(obs, k) < best_ll - kPruneMargin) continue;
            const double ll = log_lik(obs, k, quad);
            if (ll > best_ll || (ll == best_ll && static_cast<int>(k) < best)) {
                best_ll = ll;
                best = static_cast<int>(k);
            }
        }
        return best;
    }
};

inline void require_nondegenerate_3d(const ChannelParams& params) {
    if (!(params.var_conversion > 0.0) || !(params.var_rectifier > 0.0))
        throw DegenerateDensity("3D likelihood needs var_conversion > 0 and var_rectifier > 0");
}

}  // namespace detail

// Likelihood of one observation given one candidate symbol, marginalized over
// the antenna noise. Log scale; exp() of this underflows for far candidates,
// which is exactly why detectors compare in the log domain.
inline double log_likelihood_3d(const SplitObservation& obs, const ConstellationPoint& candidate,
                                const ChannelParams& params, const QuadratureSpec& quad) {
    params.validate();
    detail::require_nondegenerate_3d(params);
    Constellation single;
    single.order = 1;
    single.points = {candidate};
    const detail::MlContext ctx(single, params);
    return ctx.log_lik(obs, 0, quad);
}

inline double likelihood_3d(const SplitObservation& obs, const ConstellationPoint& candidate,
                            const ChannelParams& params, const QuadratureSpec& quad) {
    return std::exp(log_likelihood_3d(obs, candidate, params, quad));
}

// Exact ML over the alphabet on the full 3D observation; metrics are
// log-likelihoods, ties go to the lowest index.
inline DetectorVerdict detect_ml_3d(const SplitObservation& obs, const Constellation& cons,
                                    const ChannelParams& params, const QuadratureSpec& quad) {
    params.validate();
    detail::require_nondegenerate_3d(params);
    const detail::MlContext ctx(cons, params);
    DetectorVerdict v;
    v.metrics.reserve(cons.points.size());
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cons.points.size(); ++k) {
        const double ll = ctx.log_lik(obs, k, quad);
        v.metrics.push_back(ll);
        if (ll > best) {
            best = ll;
            v.symbol_index = static_cast<int>(k);
        }
    }
    return v;
}

namespace detail {

// Power-only detection state. Symbols sharing a magnitude are
// indistinguishable from Y2, so likelihoods are evaluated once per magnitude
// class; the verdict inherits the lowest index of the best class.
struct PdContext {
    struct MagClass {
        double center_abs;   // sqrt(P)|h| |X|
        double center_norm;  // its square
    };
    double rho, var_a, var_rec;
    double alpha, log_pref;
    bool exact_power = false;  // var_rec == 0: noncentral chi-square closed form
    std::vector<MagClass> classes;
    std::vector<int> class_of;  // candidate index -> class index

    PdContext(const Constellation& cons, const ChannelParams& params)
        : rho(params.rho), var_a(params.var_antenna), var_rec(params.var_rectifier) {
        alpha = 1.0 / var_a;
        exact_power = var_rec == 0.0;
        const double scaled_gain = std::sqrt(params.power) * params.gain;
        class_of.resize(cons.points.size());
        for (std::size_t k = 0; k < cons.points.size(); ++k) {
            const double m = scaled_gain * cons.points[k].magnitude;
            int found = -1;
            for (std::size_t c = 0; c < classes.size(); ++c) {
                if (std::abs(classes[c].center_abs - m) <= 1e-12 * std::max(1.0, m)) {
                    found = static_cast<int>(c);
                    break;
                }
            }
            if (found < 0) {
                classes.push_back({m, m * m});
                found = static_cast<int>(classes.size()) - 1;
            }
            class_of[k] = found;
        }
        if (rho >= 1.0 || var_a == 0.0) {
            log_pref = 0.0;
        } else if (exact_power) {
            log_pref = -std::log(var_a) - std::log(1.0 - rho);
        } else {
            const double sv = std::sqrt(var_rec) / (1.0 - rho);
            log_pref = -std::log(var_a) - std::log(1.0 - rho) -
                       0.5 * std::log(2.0 * std::numbers::pi * sv * sv);
        }
    }

    double class_log_lik(const SplitObservation& obs, const MagClass& mc,
                         const QuadratureSpec& quad) const {
        if (rho >= 1.0)  // power branch carries no signal
            return -0.5 * std::log(2.0 * std::numbers::pi * var_rec) -
                   obs.power * obs.power / (2.0 * var_rec);
        if (var_a == 0.0) {  // plain Gaussian around the deterministic power
            const double pr = obs.power - (1.0 - rho) * mc.center_norm;
            return -0.5 * std::log(2.0 * std::numbers::pi * var_rec) - pr * pr / (2.0 * var_rec);
        }
        if (exact_power) {
            // Y2/(1-rho) is exactly |center + W|^2: scaled noncentral chi-square
            const double v = obs.power / (1.0 - rho);
            if (v < 0.0) return -std::numeric_limits<double>::infinity();
            return log_pref - (v + mc.center_norm) / var_a +
                   log_bessel_i0(2.0 * std::sqrt(v) * mc.center_abs / var_a);
        }
        const double m_v = obs.power / (1.0 - rho);
        const double s_v = std::sqrt(var_rec) / (1.0 - rho);
        RadialIntegrand f{m_v, s_v, alpha, mc.center_abs / var_a};
        return log_pref - mc.center_norm / var_a + log_radial_integral(f, quad);
    }

    int classify(const SplitObservation& obs, const QuadratureSpec& quad,
                 std::vector<double>* metrics = nullptr) const {
        thread_local std::vector<double> class_ll;
        class_ll.assign(classes.size(), 0.0);
        for (std::size_t c = 0; c < classes.size(); ++c)
            class_ll[c] = class_log_lik(obs, classes[c], quad);
        int best = 0;
        double best_ll = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < class_of.size(); ++k) {
            const double ll = class_ll[class_of[k]];
            if (metrics) metrics->push_back(ll);
            if (ll > best_ll) {
                best_ll = ll;
                best = static_cast<int>(k);
            }
        }
        return best;
    }
};

}  // namespace detail

// Power-only receiver: ML over the marginal density of Y2. Multi-ring
// constellations keep only magnitude information; constant-modulus alphabets
// are undecodable and always yield index 0.
inline DetectorVerdict detect_pd(const SplitObservation& obs, const Constellation& cons,
                                 const ChannelParams& params, const QuadratureSpec& quad) {
    params.validate();
    if (params.rho < 1.0 && params.var_rectifier == 0.0 && params.var_antenna == 0.0)
        throw DegenerateDensity("power density needs var_antenna or var_rectifier > 0");
    if (params.rho >= 1.0 && params.var_rectifier == 0.0)
        throw DegenerateDensity("power branch at rho=1 with zero rectifier noise is a point mass");
    detail::PdContext ctx(cons, params);
    DetectorVerdict v;
    v.metrics.reserve(cons.points.size());
    v.symbol_index = ctx.classify(obs, quad, &v.metrics);
    return v;
}

// ---------------------------------------------------------------------------
// Operation counting
// ---------------------------------------------------------------------------

// Multiplications + divisions needed to evaluate Upsilon for one candidate,
// measured by running the same straight-line code on an instrumented scalar.
// The tally is identical for every candidate and input value.
inline std::uint64_t count_multiplications(const Constellation& cons, const ChannelParams& params) {
    params.validate();
    if (!(params.rho > 0.0)) throw SplitterDegenerate("upsilon needs rho > 0");
    const double scaled_gain = std::sqrt(params.power) * params.gain;
    const double denom_tang = params.var_antenna + params.var_conversion / params.rho;

    std::uint64_t per_candidate = 0;
    for (const auto& p : cons.points) {
        OpCount c;
        using CD = detail::CountedDouble;
        detail::upsilon_impl<CD>(CD(1.25, &c), CD(-0.5, &c), CD(p.value.real(), &c),
                                 CD(p.value.imag(), &c), CD(p.magnitude, &c), CD(scaled_gain, &c),
                                 CD(params.var_antenna, &c), CD(denom_tang, &c));
        if (per_candidate == 0) per_candidate = c.total();
        else if (per_candidate != c.total())
            throw std::logic_error("upsilon op count varied across candidates");
    }
    return per_candidate;
}

// Cost model for one closed-form PDF evaluation in the reference 3D scheme:
// about 300 multiplications plus an exponentiation charged at 2 log2(x).
inline std::uint64_t closed_form_pdf_cost_model(double exp_argument) {
    const double arg = std::max(std::abs(exp_argument), 2.0);
    return 300 + static_cast<std::uint64_t>(std::llround(2.0 * std::log2(arg)));
}

}  // namespace splitrx
