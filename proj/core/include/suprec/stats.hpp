#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace suprec {

/// z for a two-sided 95% normal interval.
inline constexpr double kZ95 = 1.959963984540054;

/// A binomial proportion with its Wilson score interval at 95%.
struct Proportion {
    std::uint64_t count = 0;
    std::uint64_t trials = 0;

    double p() const { return trials == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(trials); }

    double std_err() const {
        if (trials == 0) return 0.0;
        const double q = p();
        return std::sqrt(q * (1.0 - q) / static_cast<double>(trials));
    }

    double ci_lo() const {
        if (count == 0) return 0.0;
        return std::max(0.0, wilson_center() - wilson_radius());
    }
    double ci_hi() const {
        if (trials > 0 && count == trials) return 1.0;
        return std::min(1.0, wilson_center() + wilson_radius());
    }

private:
    double wilson_center() const {
        if (trials == 0) return 0.5;
        const double n = static_cast<double>(trials);
        const double z2 = kZ95 * kZ95;
        return (p() + z2 / (2.0 * n)) / (1.0 + z2 / n);
    }

    double wilson_radius() const {
        if (trials == 0) return 0.5;
        const double n = static_cast<double>(trials);
        const double q = p();
        const double z2 = kZ95 * kZ95;
        const double rad = kZ95 * std::sqrt(q * (1.0 - q) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
        return std::min(rad, 1.0);
    }
};

/// ceil() that forgives values a hair above an integer, so that ratios whose
/// exact value is integral (e.g. 12/0.4) do not round up on the last ulp.
inline long long ceil_tol(double x, double rtol = 1e-9) {
    const double r = std::round(x);
    if (std::abs(x - r) <= rtol * std::max(1.0, std::abs(x))) return static_cast<long long>(r);
    return static_cast<long long>(std::ceil(x));
}

/// floor() with the same integer snapping as ceil_tol.
inline long long floor_tol(double x, double rtol = 1e-9) {
    const double r = std::round(x);
    if (std::abs(x - r) <= rtol * std::max(1.0, std::abs(x))) return static_cast<long long>(r);
    return static_cast<long long>(std::floor(x));
}

} // namespace suprec
