#pragma once

// Single-slit Fraunhofer pattern formed inside the RIS slab. The slit sees the
// in-medium wavelength lambda / n_ris; the envelope is centred on the steered
// direction of the configured order and projected onto the PD plane at depth y.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <vector>

#include "risvlc/csv.hpp"
#include "risvlc/optics.hpp"
#include "risvlc/quadrature.hpp"

namespace risvlc {

/// Normalisation integrals stop here; the remaining sliver to 90 deg is bounded analytically.
inline constexpr double kHorizonDeg = 89.9;

struct IntensityProfile {
    std::vector<double> positions_mm;
    std::vector<double> relative_intensity;
    double center_offset_mm = 0.0;
    double medium_wavelength_nm = 0.0;
};

struct SpotReport {
    double full_width_mm = 0.0;  // +inf when the first null lies beyond the horizon
    Angle first_null_angle;
    double pd_coverage = 0.0;
    bool null_beyond_horizon = false;
};

namespace detail {

inline double medium_wavelength_nm(const SteeringGeometry& g, const IncidentWave& w) {
    return w.wavelength.nm() / g.n_ris;
}

// sinc^2(pi * a * sin(theta) / lambda_m) with the slit-to-wavelength ratio precomputed.
inline double sinc2(double slit_over_lambda, double theta) {
    const double half_beta = std::numbers::pi * slit_over_lambda * std::sin(theta);
    if (half_beta == 0.0) return 1.0;
    const double s = std::sin(half_beta) / half_beta;
    return s * s;
}

// Integral of the envelope over theta in [0, upper], split at every null so
// that each adaptive call sees a single smooth lobe.
inline QuadratureResult lobe_integral(double slit_over_lambda, double upper, const QuadratureOptions& opt) {
    QuadratureResult total;
    auto f = [slit_over_lambda](double t) { return sinc2(slit_over_lambda, t); };
    QuadratureOptions piece_opt = opt;
    piece_opt.abs_tol = opt.abs_tol / (std::floor(slit_over_lambda * std::sin(upper)) + 1.0);
    double lo = 0.0;
    for (int k = 1;; ++k) {
        const double s = k / slit_over_lambda;
        const double hi = s < 1.0 ? std::min(std::asin(s), upper) : upper;
        const auto piece = integrate(f, lo, hi, piece_opt);
        total.value += piece.value;
        total.error += piece.error;
        if (hi >= upper) break;
        lo = hi;
    }
    if (total.error > opt.abs_tol)
        throw QuadratureFailure("accumulated quadrature error " + std::to_string(total.error) +
                                " exceeds tolerance");
    return total;
}

}  // namespace detail

/// I / I_max at angle theta from the steered pattern centre.
inline double fraunhofer_relative_intensity(const SteeringGeometry& geom, const IncidentWave& wave,
                                            Angle theta) {
    validate(geom);
    validate(wave);
    if (!(std::abs(theta.rad()) < std::numbers::pi / 2)) throw RangeError("theta must lie in (-90, 90) deg");
    const double ratio = geom.slit_um * 1000.0 / detail::medium_wavelength_nm(geom, wave);
    return std::clamp(detail::sinc2(ratio, theta.rad()), 0.0, 1.0);
}

/// Lateral displacement of the pattern centre on the PD plane, y * tan(theta_ris).
inline double center_offset_mm(const SteeringGeometry& geom, const IncidentWave& wave) {
    return geom.depth_mm * std::tan(refraction_angle(geom, wave).rad());
}

inline IntensityProfile profile_on_pd(const SteeringGeometry& geom, const IncidentWave& wave, int samples) {
    if (samples < 3) throw RangeError("profile needs at least 3 samples");
    IntensityProfile p;
    p.center_offset_mm = center_offset_mm(geom, wave);
    p.medium_wavelength_nm = detail::medium_wavelength_nm(geom, wave);
    const double ratio = geom.slit_um * 1000.0 / p.medium_wavelength_nm;
    const double half = geom.pd_length_mm / 2;
    p.positions_mm.resize(samples);
    p.relative_intensity.resize(samples);
    for (int i = 0; i < samples; ++i) {
        // Index-based grid keeps the endpoints exact and mirror points symmetric.
        const double u = i == samples - 1 ? half : -half + geom.pd_length_mm * i / (samples - 1);
        const double theta = std::atan((u - p.center_offset_mm) / geom.depth_mm);
        p.positions_mm[i] = u;
        p.relative_intensity[i] = std::clamp(detail::sinc2(ratio, theta), 0.0, 1.0);
    }
    return p;
}

struct PowerFraction {
    double value = 0.0;
    double error = 0.0;      // quadrature error estimate propagated to the ratio
    double tail_bound = 0.0;  // upper bound on the neglected power beyond the horizon, relative
};

/// Fraction of the pattern's power that lands within +/- window_halfwidth_mm of
/// the pattern centre on the PD plane. Power per unit PD length is the angular
/// intensity times d(theta)/du, so the PD-plane integral is evaluated in theta.
inline PowerFraction pattern_power_fraction_detail(const SteeringGeometry& geom, const IncidentWave& wave,
                                                   double window_halfwidth_mm,
                                                   const QuadratureOptions& opt = {}) {
    validate(geom);
    validate(wave);
    if (!(window_halfwidth_mm > 0.0)) throw RangeError("window half-width must be > 0");
    const double ratio = geom.slit_um * 1000.0 / detail::medium_wavelength_nm(geom, wave);
    const double horizon = Angle::degrees(kHorizonDeg).rad();

    const auto den = detail::lobe_integral(ratio, horizon, opt);
    PowerFraction out;
    const double tail_beta = std::numbers::pi * ratio * std::sin(horizon);
    out.tail_bound = (std::numbers::pi / 2 - horizon) * std::min(1.0, 1.0 / (tail_beta * tail_beta)) / den.value;

    const double phi = std::atan(window_halfwidth_mm / geom.depth_mm);
    if (phi >= horizon) {
        out.value = 1.0;
        return out;
    }
    const auto num = detail::lobe_integral(ratio, phi, opt);
    out.value = std::clamp(num.value / den.value, 0.0, 1.0);
    out.error = (num.error + out.value * den.error) / den.value;
    return out;
}

inline double pattern_power_fraction(const SteeringGeometry& geom, const IncidentWave& wave,
                                     double window_halfwidth_mm, const QuadratureOptions& opt = {}) {
    return pattern_power_fraction_detail(geom, wave, window_halfwidth_mm, opt).value;
}

/// Central-lobe geometry on the PD plane. When the slit is narrower than the
/// in-medium wavelength the first null does not exist: the width is +inf and
/// null_beyond_horizon is set (solvers turn this into NullBeyondHorizon).
inline SpotReport spot_report(const SteeringGeometry& geom, const IncidentWave& wave,
                              const QuadratureOptions& opt = {}) {
    if (wave.order >= 1) (void)refraction_angle(geom, wave);
    validate(geom);
    validate(wave);
    SpotReport r;
    const double s = detail::medium_wavelength_nm(geom, wave) / (geom.slit_um * 1000.0);
    const double pd_half = geom.pd_length_mm / 2;
    if (s >= 1.0) {
        r.null_beyond_horizon = true;
        r.first_null_angle = Angle::degrees(90.0);
        r.full_width_mm = std::numeric_limits<double>::infinity();
        r.pd_coverage = pattern_power_fraction(geom, wave, pd_half, opt);
        return r;
    }
    r.first_null_angle = Angle::radians(std::asin(s));
    r.full_width_mm = 2 * geom.depth_mm * std::tan(r.first_null_angle.rad());
    const double lobe = pattern_power_fraction(geom, wave, r.full_width_mm / 2, opt);
    const double inside = pattern_power_fraction(geom, wave, std::min(pd_half, r.full_width_mm / 2), opt);
    r.pd_coverage = std::clamp(inside / lobe, 0.0, 1.0);
    return r;
}

inline void write_csv(std::ostream& os, const IntensityProfile& p) {
    os << "position_mm,relative_intensity\n";
    for (std::size_t i = 0; i < p.positions_mm.size(); ++i)
        os << csv::num(p.positions_mm[i]) << ',' << csv::num(p.relative_intensity[i]) << '\n';
}

}  // namespace risvlc
