#pragma once

// Reference computations used only by the tests. Each one takes a route that
// does not go through the library code it checks: direct formulas in long
// double, brute-force enumeration, and uniform trapezoid integration.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>

namespace oracle {

/// Grating + refraction angle in degrees, long double throughout.
inline long double refraction_deg(long double slit_um, long double lambda_nm, long double theta_a_deg,
                                  long double n_air, long double n_ris, int m) {
    const long double pi = std::numbers::pi_v<long double>;
    const long double s = (n_air * std::sin(theta_a_deg * pi / 180) + m * lambda_nm / (slit_um * 1000)) / n_ris;
    return std::asin(s) * 180 / pi;
}

/// Largest m whose grating sine stays below 1, found by counting up from 0.
inline int brute_force_max_order(double slit_um, double lambda_nm, double theta_a_deg, double n_air, double n_ris) {
    const double sin_a = std::sin(theta_a_deg * std::numbers::pi / 180);
    int best = -1;
    for (int m = 0; m < 100000; ++m) {
        if ((n_air * sin_a + m * (lambda_nm / (slit_um * 1000))) / n_ris < 1.0)
            best = m;
        else
            break;
    }
    return best;
}

inline double sinc2(double x) {
    if (x == 0.0) return 1.0;
    const double s = std::sin(x) / x;
    return s * s;
}

/// Trapezoid rule with `samples` uniform points of sinc^2(pi * r * sin(t)) over [lo, hi].
inline double trapezoid_envelope(double slit_over_lambda, double lo, double hi, std::size_t samples) {
    const double h = (hi - lo) / static_cast<double>(samples - 1);
    long double sum = 0.0L;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = lo + h * static_cast<double>(i);
        const double w = (i == 0 || i == samples - 1) ? 0.5 : 1.0;
        sum += w * sinc2(std::numbers::pi * slit_over_lambda * std::sin(t));
    }
    return static_cast<double>(sum * h);
}

/// Power fraction inside +/- phi, normalised over +/- 89.9 deg, by brute-force trapezoid.
inline double power_fraction(double slit_over_lambda, double phi, std::size_t samples = 1'000'000) {
    const double horizon = 89.9 * std::numbers::pi / 180;
    return trapezoid_envelope(slit_over_lambda, -phi, phi, samples) /
           trapezoid_envelope(slit_over_lambda, -horizon, horizon, samples);
}

/// Deterministic generator shared by property tests.
inline std::mt19937_64& rng() {
    static std::mt19937_64 gen{20201014};
    return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>{lo, hi}(rng()); }

}  // namespace oracle
