#pragma once

// Transmit alphabets: square M-QAM, M-PSK and multi-ring APSK, all normalized
// to unit average symbol energy so that the channel's P parameter alone sets
// the transmit power. Constellations are immutable after construction and can
// be shared freely across threads.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "splitrx/errors.hpp"

namespace splitrx {

enum class Scheme { QAM, PSK, APSK };

inline const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::QAM: return "QAM";
        case Scheme::PSK: return "PSK";
        default: return "APSK";
    }
}

struct ConstellationPoint {
    int index = 0;
    std::complex<double> value{};
    double magnitude = 0.0;
    double phase = 0.0;  // in (-pi, pi]

    ConstellationPoint() = default;
    ConstellationPoint(int idx, std::complex<double> v)
        : index(idx), value(v), magnitude(std::abs(v)), phase(std::arg(v)) {}
};

struct Ring {
    int points = 0;
    double radius = 0.0;  // post-normalization
};

struct Constellation {
    Scheme scheme = Scheme::QAM;
    int order = 0;  // M
    std::vector<ConstellationPoint> points;
    std::vector<Ring> rings;  // filled for APSK only

    double average_energy() const {
        double e = 0.0;
        for (const auto& p : points) e += std::norm(p.value);
        return e / static_cast<double>(points.size());
    }

    double min_pairwise_distance() const {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < points.size(); ++i)
            for (std::size_t j = i + 1; j < points.size(); ++j)
                d = std::min(d, std::abs(points[i].value - points[j].value));
        return d;
    }
};

// Square QAM on the odd-integer grid {+-1, +-3, ...}, scaled to unit average
// energy. Index order is row-major starting at the bottom-left corner
// (most negative imaginary row first, real part ascending within a row).
inline Constellation make_qam(int order) {
    if (order < 4) throw InvalidOrder("QAM order must be >= 4, got " + std::to_string(order));
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
    if (side * side != order || side % 2 != 0)
        throw InvalidOrder("QAM order must be a perfect square with even root, got " + std::to_string(order));

    double energy = 0.0;
    for (int row = 0; row < side; ++row) {
        for (int col = 0; col < side; ++col) {
            const double re = -(side - 1) + 2.0 * col;
            const double im = -(side - 1) + 2.0 * row;
            energy += re * re + im * im;
        }
    }
    const double scale = 1.0 / std::sqrt(energy / order);

    Constellation c;
    c.scheme = Scheme::QAM;
    c.order = order;
    c.points.reserve(order);
    for (int row = 0; row < side; ++row) {
        for (int col = 0; col < side; ++col) {
            const double re = (-(side - 1) + 2.0 * col) * scale;
            const double im = (-(side - 1) + 2.0 * row) * scale;
            c.points.emplace_back(row * side + col, std::complex<double>(re, im));
        }
    }
    return c;
}

// M-PSK with a pi/M phase offset so no point sits on an I/Q axis.
inline Constellation make_psk(int order) {
    if (order < 2) throw InvalidOrder("PSK order must be >= 2, got " + std::to_string(order));
    Constellation c;
    c.scheme = Scheme::PSK;
    c.order = order;
    c.points.reserve(order);
    for (int k = 0; k < order; ++k) {
        const double angle = (2.0 * k + 1.0) * std::numbers::pi / order;
        c.points.emplace_back(k, std::polar(1.0, angle));
    }
    return c;
}

enum class RadiusMode { UniformlySpaced };

// Multi-ring APSK. Pre-normalization ring radii are 1, 2, ..., R; each ring
// carries its points uniformly in phase with a per-ring offset of
// pi/(points in ring). Indexing is ring-major, innermost ring first.
inline Constellation make_apsk(const std::vector<int>& ring_points,
                               RadiusMode mode = RadiusMode::UniformlySpaced) {
    (void)mode;  // single supported mode
    if (ring_points.empty()) throw InvalidOrder("APSK needs at least one ring");
    int order = 0;
    for (int n : ring_points) {
        if (n < 1) throw InvalidOrder("APSK ring must hold at least one point");
        order += n;
    }

    double energy = 0.0;
    for (std::size_t r = 0; r < ring_points.size(); ++r) {
        const double radius = static_cast<double>(r + 1);
        energy += ring_points[r] * radius * radius;
    }
    const double scale = 1.0 / std::sqrt(energy / order);

    Constellation c;
    c.scheme = Scheme::APSK;
    c.order = order;
    c.points.reserve(order);
    c.rings.reserve(ring_points.size());
    int index = 0;
    for (std::size_t r = 0; r < ring_points.size(); ++r) {
        const int n = ring_points[r];
        const double radius = static_cast<double>(r + 1) * scale;
        c.rings.push_back({n, radius});
        for (int k = 0; k < n; ++k) {
            const double angle = (2.0 * k + 1.0) * std::numbers::pi / n;
            c.points.emplace_back(index++, std::polar(radius, angle));
        }
    }
    return c;
}

}  // namespace splitrx
