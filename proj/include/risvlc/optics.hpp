#pragma once

// Forward steering model of a single-slit RIS element: light arriving from
// air at incidence theta_a is diffracted by the slit (width a, which also acts
// as the grating pitch) into order m and refracted into the RIS slab:
//
//     n_ris * sin(theta_ris) = n_air * sin(theta_a) + m * lambda / a
//
// The diffracted order adds to the tangential component.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "risvlc/error.hpp"
#include "risvlc/units.hpp"

namespace risvlc {

inline constexpr double kMinIndex = 1.0;
inline constexpr double kMaxIndex = 2.5;
inline constexpr double kMaxAirIndex = 1.001;
inline constexpr int kMaxOrder = 3;

/// Cross-section of one RIS cell: opaque film with a slit on top, slab of
/// depth y, photodetector pastille of length x at the bottom.
struct SteeringGeometry {
    double slit_um = 4.0;       // a
    double depth_mm = 0.75;     // y
    double pd_length_mm = 1.0;  // x
    double n_air = 1.0;
    double n_ris = 1.5;

    bool operator==(const SteeringGeometry&) const = default;
};

struct IncidentWave {
    Wavelength wavelength{550.0};
    Angle incidence;  // theta_a, half the receiver FoV
    double power_w = 1.0;
    int order = 1;

    bool operator==(const IncidentWave&) const = default;
};

inline std::vector<Violation> check(const SteeringGeometry& g, std::string_view prefix = "geometry") {
    std::vector<Violation> out;
    auto field = [&](const char* name) { return std::string(prefix) + "." + name; };
    if (!(g.slit_um > 0 && std::isfinite(g.slit_um))) out.push_back({field("slit_um"), "must be > 0"});
    if (!(g.depth_mm > 0 && std::isfinite(g.depth_mm))) out.push_back({field("depth_mm"), "must be > 0"});
    if (!(g.pd_length_mm > 0 && std::isfinite(g.pd_length_mm)))
        out.push_back({field("pd_length_mm"), "must be > 0"});
    if (!(g.n_air >= kMinIndex && g.n_air <= kMaxAirIndex))
        out.push_back({field("n_air"), "must lie in [1.0, 1.001]"});
    if (!(g.n_ris > kMinIndex && g.n_ris <= kMaxIndex))
        out.push_back({field("n_ris"), "must lie in (1.0, 2.5]"});
    return out;
}

inline std::vector<Violation> check(const IncidentWave& w, std::string_view prefix = "wave") {
    std::vector<Violation> out;
    auto field = [&](const char* name) { return std::string(prefix) + "." + name; };
    const double nm = w.wavelength.nm();
    if (!(nm >= Wavelength::min_nm && nm <= Wavelength::max_nm))
        out.push_back({field("wavelength_nm"), "must lie in [200, 2000]"});
    const double th = w.incidence.rad();
    if (!(th >= 0.0 && th <= std::numbers::pi / 2))
        out.push_back({field("incidence_deg"), "must lie in [0, 90]"});
    if (!(w.power_w >= 0.0 && std::isfinite(w.power_w))) out.push_back({field("power_w"), "must be >= 0"});
    if (w.order < 0 || w.order > kMaxOrder) out.push_back({field("order"), "must be one of 0, 1, 2, 3"});
    return out;
}

namespace detail {

inline void throw_if(const std::vector<Violation>& v) {
    if (v.empty()) return;
    std::string msg;
    for (const auto& e : v) msg += (msg.empty() ? "" : "; ") + e.path + " " + e.message;
    throw RangeError(msg);
}

inline double wavelength_over_slit(const SteeringGeometry& g, const IncidentWave& w) {
    return w.wavelength.nm() / (g.slit_um * 1000.0);
}

// Sine of the refracted direction for order m; >= 1 means the order does not propagate.
inline double grating_sine(const SteeringGeometry& g, const IncidentWave& w, int m) {
    return (g.n_air * std::sin(w.incidence.rad()) + m * wavelength_over_slit(g, w)) / g.n_ris;
}

}  // namespace detail

inline void validate(const SteeringGeometry& g) { detail::throw_if(check(g)); }
inline void validate(const IncidentWave& w) { detail::throw_if(check(w)); }

/// Refraction angle theta_ris of the wave's diffraction order inside the slab.
inline Angle refraction_angle(const SteeringGeometry& geom, const IncidentWave& wave) {
    validate(geom);
    validate(wave);
    const double s = detail::grating_sine(geom, wave, wave.order);
    if (!(s < 1.0))
        throw EvanescentOrder("order m=" + std::to_string(wave.order) + " does not propagate (sine " +
                              std::to_string(s) + " >= 1)");
    return Angle::radians(std::asin(s));
}

/// Snell's law between two media. Grazing exit (sine exactly 1) is allowed.
inline Angle snell_angle(double n_in, double n_out, Angle theta_in) {
    if (!(n_in >= kMinIndex && n_in <= kMaxIndex) || !(n_out >= kMinIndex && n_out <= kMaxIndex))
        throw RangeError("refractive index outside [1.0, 2.5]");
    if (!(theta_in.rad() >= 0.0 && theta_in.rad() <= std::numbers::pi / 2))
        throw RangeError("incidence angle outside [0, 90] deg");
    const double s = (n_in * std::sin(theta_in.rad())) / n_out;
    if (s > 1.0) throw TotalInternalReflection("sin(theta_in) * n_in / n_out = " + std::to_string(s) + " > 1");
    return Angle::radians(std::asin(s));
}

/// Largest order m >= 0 that propagates for this geometry and wave, ignoring
/// wave.order. Returns -1 only when even the zeroth order is cut off, which
/// can happen when n_air * sin(theta_a) >= n_ris.
inline int max_propagating_order(const SteeringGeometry& geom, const IncidentWave& wave) {
    validate(geom);
    validate(wave);
    auto propagates = [&](int m) { return detail::grating_sine(geom, wave, m) < 1.0; };
    if (!propagates(0)) return -1;
    const double ratio = detail::wavelength_over_slit(geom, wave);
    const double headroom = geom.n_ris - geom.n_air * std::sin(wave.incidence.rad());
    int m = static_cast<int>(std::clamp(std::floor(headroom / ratio), 0.0, 1e9));
    while (m > 0 && !propagates(m)) --m;
    while (propagates(m + 1)) ++m;
    return m;
}

}  // namespace risvlc
