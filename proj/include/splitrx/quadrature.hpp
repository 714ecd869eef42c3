#pragma once

// Fixed-order Gaussian quadrature rules. Nodes and weights are computed once
// per order by Newton iteration on the orthonormal recurrences and then shared
// read-only between threads.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace splitrx {

// Gauss-Hermite rule: integrates f against exp(-t^2) on the real line.
// Ascending node order; weights symmetric.
struct GaussHermite {
    std::vector<double> node;
    std::vector<double> weight;

    explicit GaussHermite(int order) {
        if (order < 1) throw std::invalid_argument("Gauss-Hermite order must be >= 1");
        const int n = order;
        node.assign(n, 0.0);
        weight.assign(n, 0.0);
        const double pim4 = 0.7511255444649425;  // pi^(-1/4)
        const int m = (n + 1) / 2;
        double z = 0.0;
        for (int i = 0; i < m; ++i) {
            if (i == 0) {
                z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
            } else if (i == 1) {
                z -= 1.14 * std::pow(n, 0.426) / z;
            } else if (i == 2) {
                z = 1.86 * z - 0.86 * node[n - 1];
            } else if (i == 3) {
                z = 1.91 * z - 0.91 * node[n - 2];
            } else {
                z = 2.0 * z - node[n - i + 1];
            }
            double pp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p1 = pim4;
                double p2 = 0.0;
                for (int j = 1; j <= n; ++j) {
                    const double p3 = p2;
                    p2 = p1;
                    p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
                }
                pp = std::sqrt(2.0 * n) * p2;
                const double z1 = z;
                z = z1 - p1 / pp;
                if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
            }
            node[n - 1 - i] = z;
            node[i] = -z;
            weight[i] = 2.0 / (pp * pp);
            weight[n - 1 - i] = weight[i];
        }
        if (n % 2 == 1) node[n / 2] = 0.0;
    }

    int order() const noexcept { return static_cast<int>(node.size()); }
};

// Gauss-Legendre rule on [-1, 1]; ascending node order.
struct GaussLegendre {
    std::vector<double> node;
    std::vector<double> weight;

    explicit GaussLegendre(int order) {
        if (order < 1) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
        const int n = order;
        node.assign(n, 0.0);
        weight.assign(n, 0.0);
        const int m = (n + 1) / 2;
        for (int i = 0; i < m; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p1 = 1.0;
                double p2 = 0.0;
                for (int j = 1; j <= n; ++j) {
                    const double p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
                }
                pp = n * (z * p1 - p2) / (z * z - 1.0);
                const double z1 = z;
                z = z1 - p1 / pp;
                if (std::abs(z - z1) <= 1e-15) break;
            }
            node[i] = -z;
            node[n - 1 - i] = z;
            weight[i] = 2.0 / ((1.0 - z * z) * pp * pp);
            weight[n - 1 - i] = weight[i];
        }
    }

    int order() const noexcept { return static_cast<int>(node.size()); }
};

// How the 3D likelihood integral is evaluated. RadialBessel reduces the
// angular integral in closed form and applies a peak-centered Gauss-Hermite
// rule radially; it stays accurate at high SNR where the rectifier factor is
// a narrow ridge. CartesianGH is the plain product rule over the antenna
// noise; it is only trustworthy when that ridge is wide relative to the node
// spacing (low/moderate SNR) and is kept as a cross-validation path.
enum class LikelihoodMethod { RadialBessel, CartesianGH };

// Immutable per-run quadrature configuration; precomputes the node tables.
struct QuadratureSpec {
    explicit QuadratureSpec(int order_ = 48, LikelihoodMethod method_ = LikelihoodMethod::RadialBessel)
        : order(order_), method(method_), hermite(order_), fallback_legendre(4 * order_) {
        if (order_ < 16 || order_ > 128)
            throw std::invalid_argument("quadrature order must be in [16, 128]");
    }

    int order;
    LikelihoodMethod method;
    GaussHermite hermite;
    GaussLegendre fallback_legendre;  // boundary-peak fallback for the radial path
};

}  // namespace splitrx
