#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace splitrx {

// Inverse standard normal CDF (Acklam's rational approximation, |eps| < 1.2e-9).
inline double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) return std::numeric_limits<double>::quiet_NaN();
    static constexpr double a[] = {-39.69683028665376, 220.9460984245205,  -275.9285104469687,
                                   138.3577518672690,  -30.66479806614716, 2.506628277459239};
    static constexpr double b[] = {-54.47609879822406, 161.5858368580409, -155.6989798598866,
                                   66.80131188771972,  -13.28068155288572};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838,
                                   -2.549732539343734,     4.374664141464968,      2.938163982698783};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996,
                                   3.754408661907416};
    const double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Wilson score interval half-width for a binomial proportion. Stays sane for
// proportions at or near 0/1, unlike the plain normal approximation.
inline double wilson_half_width(std::uint64_t successes, std::uint64_t trials, double ci_level) {
    if (trials == 0) return 0.5;
    if (!(ci_level > 0.0 && ci_level < 1.0)) throw std::invalid_argument("ci_level must be in (0,1)");
    const double z = inverse_normal_cdf(0.5 + 0.5 * ci_level);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    return z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
}

}  // namespace splitrx
