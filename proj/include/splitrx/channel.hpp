#pragma once

// Dual-branch splitting-receiver channel. A power splitter routes a fraction
// rho of the received signal to a coherent chain and the rest to a power
// detector, so one transmitted symbol produces a complex sample Y1 and a real
// power sample Y2. Three independent noises act: antenna noise ahead of the
// splitter (common to both branches), conversion noise in the coherent chain,
// and rectifier noise in the power chain.
//
// `transmit` produces the canonical phase-derotated, efficiency-normalized
// form every detector consumes. `transmit_raw` keeps the channel phase and
// the conversion efficiency eta explicit; it exists to validate the
// equivalence of the two forms.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "splitrx/constellation.hpp"
#include "splitrx/rng.hpp"

namespace splitrx {

struct ChannelParams {
    double power = 1.0;          // P, linear transmit power
    double gain = 1.0;           // |h|
    double phase_shift = 0.0;    // phi, radians (raw model only)
    double rho = 0.5;            // power splitting ratio, [0,1]
    double eta = 1.0;            // conversion efficiency, (0,1] (raw model only)
    double var_antenna = 1.0;    // sigma_A^2
    double var_conversion = 1.0; // sigma_cov^2
    double var_rectifier = 1.0;  // sigma_rec^2

    void validate() const {
        auto fail = [](const std::string& msg) { throw std::invalid_argument("ChannelParams: " + msg); };
        if (!(power > 0.0)) fail("power must be > 0");
        if (!(gain > 0.0)) fail("gain must be > 0");
        if (!(rho >= 0.0 && rho <= 1.0)) fail("rho must be in [0,1]");
        if (!(eta > 0.0 && eta <= 1.0)) fail("eta must be in (0,1]");
        if (!(var_antenna >= 0.0)) fail("var_antenna must be >= 0");
        if (!(var_conversion >= 0.0)) fail("var_conversion must be >= 0");
        if (!(var_rectifier >= 0.0)) fail("var_rectifier must be >= 0");
    }
};

// One joint draw of the three channel noises, in canonical (derotated) form.
struct NoiseDraw {
    std::complex<double> antenna{};     // ~ CN(0, var_antenna)
    std::complex<double> conversion{};  // ~ CN(0, var_conversion)
    double rectifier = 0.0;             // ~ N(0, var_rectifier)
};

// One received sample pair. The power sample may be negative: the rectifier
// noise is additive Gaussian and nothing clamps it at the channel level.
struct SplitObservation {
    std::complex<double> coherent{};  // Y1
    double power = 0.0;               // Y2
};

inline NoiseDraw draw_noise(const ChannelParams& params, Rng& rng) {
    double z0, z1, z2, z3, z4, z5;
    rng.normal_pair(z0, z1);
    rng.normal_pair(z2, z3);
    rng.normal_pair(z4, z5);  // z5 unused; fixed draw count keeps streams aligned
    const double sa = std::sqrt(params.var_antenna / 2.0);
    const double sc = std::sqrt(params.var_conversion / 2.0);
    const double sr = std::sqrt(params.var_rectifier);
    NoiseDraw n;
    n.antenna = {sa * z0, sa * z1};
    n.conversion = {sc * z2, sc * z3};
    n.rectifier = sr * z4;
    return n;
}

// Canonical form: Y1 = sqrt(rho)(sqrt(P)|h| x + W) + Z,
//                 Y2 = (1-rho)|sqrt(P)|h| x + W|^2 + N.
inline SplitObservation transmit(const ConstellationPoint& x, const ChannelParams& params,
                                 const NoiseDraw& noise) {
    const std::complex<double> u = std::sqrt(params.power) * params.gain * x.value + noise.antenna;
    SplitObservation obs;
    obs.coherent = std::sqrt(params.rho) * u + noise.conversion;
    obs.power = (1.0 - params.rho) * std::norm(u) + noise.rectifier;
    return obs;
}

// Raw form with explicit channel phase and conversion efficiency. The noise
// draw is interpreted in canonical coordinates; the raw-model noises are the
// rotated/scaled versions W' = e^{j phi} W, Z' = e^{j phi} Z, N' = eta N, so
// derotating the coherent sample and dividing the power sample by eta
// reproduces `transmit` exactly for a matched draw.
inline SplitObservation transmit_raw(const ConstellationPoint& x, const ChannelParams& params,
                                     const NoiseDraw& noise) {
    const std::complex<double> rot = std::polar(1.0, params.phase_shift);
    const std::complex<double> h = params.gain * rot;
    const std::complex<double> u = std::sqrt(params.power) * h * x.value + rot * noise.antenna;
    SplitObservation obs;
    obs.coherent = std::sqrt(params.rho) * u + rot * noise.conversion;
    obs.power = params.eta * ((1.0 - params.rho) * std::norm(u) + noise.rectifier);
    return obs;
}

}  // namespace splitrx
