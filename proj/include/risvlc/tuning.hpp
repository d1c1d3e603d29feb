#pragma once

// Electrically tuned RIS realisations and the inverse-design solvers built on
// the forward model.
//
//  * Meta-lens on a dielectric-elastomer "artificial muscle": the drive voltage
//    stretches the cell laterally by s(v); the slit scales by s and the slab
//    thins as 1/s^2 (incompressible elastomer).
//  * Liquid-crystal cell with TiO2 nano-disks: above threshold the effective
//    index rises linearly with voltage until saturation.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "risvlc/diffraction.hpp"
#include "risvlc/optics.hpp"

namespace risvlc {

using WarningSink = std::function<void(const std::string&)>;

struct MetaLensActuator {
    double v_max_v = 1000.0;
    double stretch_max = 2.0;
    SteeringGeometry base;

    bool operator==(const MetaLensActuator&) const = default;
};

struct LiquidCrystalActuator {
    double v_on_v = 3.0;
    double v_sat_v = 5.0;
    double n_base = 1.508;
    double delta_n = 0.3;

    bool operator==(const LiquidCrystalActuator&) const = default;
};

using Actuator = std::variant<MetaLensActuator, LiquidCrystalActuator>;

inline std::vector<Violation> check(const MetaLensActuator& a, std::string_view prefix = "actuator") {
    std::vector<Violation> out;
    const std::string p(prefix);
    if (!(a.v_max_v > 0)) out.push_back({p + ".v_max_v", "must be > 0"});
    if (!(a.stretch_max > 1)) out.push_back({p + ".stretch_max", "must be > 1"});
    return out;
}

inline std::vector<Violation> check(const LiquidCrystalActuator& a, std::string_view prefix = "actuator") {
    std::vector<Violation> out;
    const std::string p(prefix);
    if (!(a.v_on_v > 0)) out.push_back({p + ".v_on_v", "must be > 0"});
    if (!(a.v_sat_v > a.v_on_v)) out.push_back({p + ".v_sat_v", "must exceed v_on_v"});
    if (!(a.delta_n >= 0.2 && a.delta_n <= 0.4)) out.push_back({p + ".delta_n", "must lie in [0.2, 0.4]"});
    if (!(a.n_base > kMinIndex && a.n_base + a.delta_n <= kMaxIndex))
        out.push_back({p + ".n_base", "n_base must exceed 1.0 and n_base + delta_n must not exceed 2.5"});
    return out;
}

/// Lateral stretch ratio s(v), linear in the clamped drive voltage.
inline double metalens_stretch(const MetaLensActuator& act, double v, const WarningSink& warn = {}) {
    detail::throw_if(check(act));
    const double vc = std::clamp(v, 0.0, act.v_max_v);
    if (vc != v && warn) warn("meta-lens drive " + std::to_string(v) + " V clamped to " + std::to_string(vc) + " V");
    return 1.0 + vc / act.v_max_v * (act.stretch_max - 1.0);
}

inline SteeringGeometry metalens_apply(const MetaLensActuator& act, double v, const WarningSink& warn = {}) {
    const double s = metalens_stretch(act, v, warn);
    SteeringGeometry g = act.base;
    if (s == 1.0) return g;
    g.slit_um *= s;
    g.depth_mm /= s * s;
    return g;
}

inline double lc_index(const LiquidCrystalActuator& act, double v, const WarningSink& warn = {}) {
    detail::throw_if(check(act));
    if ((v < 0.0 || v > act.v_sat_v) && warn)
        warn("liquid-crystal drive " + std::to_string(v) + " V outside [0, " + std::to_string(act.v_sat_v) +
             "] V, clamped");
    const double frac = std::clamp((v - act.v_on_v) / (act.v_sat_v - act.v_on_v), 0.0, 1.0);
    return act.n_base + frac * act.delta_n;
}

inline SteeringGeometry lc_apply(const LiquidCrystalActuator& act, double v, const SteeringGeometry& base,
                                 const WarningSink& warn = {}) {
    SteeringGeometry g = base;
    g.n_ris = lc_index(act, v, warn);
    return g;
}

/// Drive interval searched by the voltage solver: [0, v_max] or [v_on, v_sat].
inline std::pair<double, double> voltage_bracket(const Actuator& act) {
    return std::visit(
        [](const auto& a) -> std::pair<double, double> {
            if constexpr (std::is_same_v<std::decay_t<decltype(a)>, MetaLensActuator>)
                return {0.0, a.v_max_v};
            else
                return {a.v_on_v, a.v_sat_v};
        },
        act);
}

/// Geometry produced by driving the actuator at v. The meta-lens carries its own
/// base geometry; the liquid-crystal cell modifies `base`.
inline SteeringGeometry apply_actuator(const Actuator& act, double v, const SteeringGeometry& base,
                                       const WarningSink& warn = {}) {
    if (const auto* ml = std::get_if<MetaLensActuator>(&act)) return metalens_apply(*ml, v, warn);
    return lc_apply(std::get<LiquidCrystalActuator>(act), v, base, warn);
}

// ---------------------------------------------------------------------------
// Closed-form inverses

/// Index that refracts the wave's order to theta_target through a slit of the given width.
inline double solve_index_for_angle(const IncidentWave& wave, double slit_um, Angle theta_target,
                                    double n_air = 1.0) {
    validate(wave);
    if (!(slit_um > 0)) throw RangeError("slit must be > 0");
    if (!(theta_target.rad() > 0 && theta_target.rad() < std::numbers::pi / 2))
        throw RangeError("target refraction angle must lie in (0, 90) deg");
    const double tangential = n_air * std::sin(wave.incidence.rad()) + wave.order * wave.wavelength.nm() / (slit_um * 1000.0);
    const double n = tangential / std::sin(theta_target.rad());
    if (!(n > kMinIndex && n <= kMaxIndex))
        throw OutOfMaterialRange("required index " + std::to_string(n) + " outside (1.0, 2.5]");
    return n;
}

/// Full width of the central lobe on the PD plane, 2 y tan(asin(lambda_m / a)).
inline double central_lobe_width_mm(const SteeringGeometry& geom, const IncidentWave& wave) {
    const double s = wave.wavelength.nm() / geom.n_ris / (geom.slit_um * 1000.0);
    if (!(s < 1.0))
        throw NullBeyondHorizon("in-medium wavelength exceeds the slit; the central lobe fills the half-space");
    return 2 * geom.depth_mm * std::tan(std::asin(s));
}

/// Slab depth that makes the central lobe exactly spot_target_mm wide. The
/// geometry's own depth is ignored.
inline double solve_depth_for_spot(const SteeringGeometry& geom, const IncidentWave& wave, double spot_target_mm) {
    if (!(spot_target_mm > 0)) throw RangeError("spot target must be > 0");
    SteeringGeometry g = geom;
    g.depth_mm = 1.0;
    validate(g);
    validate(wave);
    return spot_target_mm / central_lobe_width_mm(g, wave);
}

// ---------------------------------------------------------------------------
// Design targets and the voltage solver

enum class TargetKind { RefractionAngle, SpotWidth, PdLanding };
enum class FreeVariable { NRis, Depth, Voltage };

constexpr std::string_view to_string(TargetKind k) {
    switch (k) {
    case TargetKind::RefractionAngle: return "refraction_angle";
    case TargetKind::SpotWidth: return "spot_width";
    case TargetKind::PdLanding: return "pd_landing";
    }
    return "";
}

constexpr std::string_view to_string(FreeVariable f) {
    switch (f) {
    case FreeVariable::NRis: return "n_ris";
    case FreeVariable::Depth: return "depth";
    case FreeVariable::Voltage: return "voltage";
    }
    return "";
}

/// One design goal. `value` is in degrees for RefractionAngle and in mm for
/// SpotWidth (central-lobe full width) and PdLanding (pattern-centre offset).
struct DesignTarget {
    TargetKind kind = TargetKind::RefractionAngle;
    double value = 0.0;
    IncidentWave wave;
    SteeringGeometry geometry;
    FreeVariable free = FreeVariable::Voltage;

    bool operator==(const DesignTarget&) const = default;
};

/// The quantity a target kind constrains, evaluated by the forward model.
inline double target_metric(TargetKind kind, const SteeringGeometry& geom, const IncidentWave& wave) {
    switch (kind) {
    case TargetKind::RefractionAngle: return refraction_angle(geom, wave).deg();
    case TargetKind::SpotWidth: validate(geom); validate(wave); return central_lobe_width_mm(geom, wave);
    case TargetKind::PdLanding: return center_offset_mm(geom, wave);
    }
    return 0.0;
}

struct VoltageSolution {
    double voltage_v = 0.0;
    double achieved = 0.0;  // metric at voltage_v
    int iterations = 0;     // bisection steps taken
};

inline constexpr int kMaxBisectionSteps = 60;
inline constexpr double kVoltageRelTol = 1e-6;

/// Bisection for the drive voltage meeting `target` within 1e-6 relative.
/// Both actuator maps are monotone, so the forward metric is expected to be
/// monotone over the bracket; this is checked on a coarse grid first.
inline VoltageSolution solve_voltage(const DesignTarget& target, const Actuator& act) {
    const auto [lo0, hi0] = voltage_bracket(act);
    auto metric = [&](double v) { return target_metric(target.kind, apply_actuator(act, v, target.geometry), target.wave); };

    constexpr int kProbe = 32;
    std::vector<double> probe(kProbe + 1);
    for (int i = 0; i <= kProbe; ++i) probe[i] = metric(lo0 + (hi0 - lo0) * i / kProbe);
    const double flo = probe.front();
    const double fhi = probe.back();
    const double scale = std::max({std::abs(flo), std::abs(fhi), 1e-300});
    bool up = false;
    bool down = false;
    for (int i = 0; i < kProbe; ++i) {
        const double d = probe[i + 1] - probe[i];
        if (d > 1e-12 * scale) up = true;
        if (d < -1e-12 * scale) down = true;
    }
    if (up && down) throw NonMonotonic(std::string(to_string(target.kind)) + " is not monotone in drive voltage");

    const double tol = std::max(kVoltageRelTol * std::abs(target.value), 1e-12);
    const double fmin = std::min(flo, fhi);
    const double fmax = std::max(flo, fhi);
    if (target.value < fmin - tol || target.value > fmax + tol)
        throw Infeasible(std::string(to_string(target.kind)) + " target " + std::to_string(target.value) +
                             " outside reachable interval [" + std::to_string(fmin) + ", " + std::to_string(fmax) + "]",
                         fmin, fmax);

    if (std::abs(flo - target.value) <= tol) return {lo0, flo, 0};
    if (std::abs(fhi - target.value) <= tol) return {hi0, fhi, 0};

    const bool increasing = fhi > flo;
    double lo = lo0;
    double hi = hi0;
    for (int it = 1; it <= kMaxBisectionSteps; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = metric(mid);
        if (std::abs(fm - target.value) <= tol) return {mid, fm, it};
        if ((fm < target.value) == increasing)
            lo = mid;
        else
            hi = mid;
    }
    throw NonConvergent("voltage bisection did not meet tolerance within 60 steps");
}

struct DesignSolution {
    FreeVariable free = FreeVariable::Voltage;
    double value = 0.0;     // index, mm, or volts
    double achieved = 0.0;  // forward metric at the solution
    int iterations = 0;
};

/// Solves any supported (target kind, free variable) pair.
inline DesignSolution solve(const DesignTarget& target, const std::optional<Actuator>& actuator = std::nullopt) {
    DesignSolution out;
    out.free = target.free;
    SteeringGeometry g = target.geometry;
    const IncidentWave& w = target.wave;
    switch (target.free) {
    case FreeVariable::NRis: {
        double theta = 0.0;
        if (target.kind == TargetKind::RefractionAngle) {
            theta = Angle::degrees(target.value).rad();
        } else if (target.kind == TargetKind::PdLanding) {
            theta = std::atan(target.value / g.depth_mm);
        } else {
            // Width fixes the first-null angle, and with it lambda / n.
            if (!(target.value > 0)) throw RangeError("spot target must be > 0");
            const double null_angle = std::atan(target.value / (2 * g.depth_mm));
            const double n = w.wavelength.nm() / (g.slit_um * 1000.0 * std::sin(null_angle));
            if (!(n > kMinIndex && n <= kMaxIndex))
                throw OutOfMaterialRange("required index " + std::to_string(n) + " outside (1.0, 2.5]");
            g.n_ris = n;
            out.value = n;
            out.achieved = target_metric(target.kind, g, w);
            return out;
        }
        g.n_ris = solve_index_for_angle(w, g.slit_um, Angle::radians(theta), g.n_air);
        out.value = g.n_ris;
        break;
    }
    case FreeVariable::Depth: {
        if (target.kind == TargetKind::SpotWidth) {
            g.depth_mm = solve_depth_for_spot(g, w, target.value);
        } else if (target.kind == TargetKind::PdLanding) {
            if (!(target.value > 0)) throw RangeError("landing target must be > 0 to fix a depth");
            const double t = std::tan(refraction_angle(g, w).rad());
            if (!(t > 0)) throw Infeasible("pattern is not steered; landing offset is 0 at every depth", 0, 0);
            g.depth_mm = target.value / t;
        } else {
            throw Infeasible("refraction angle does not depend on slab depth", 0, 0);
        }
        out.value = g.depth_mm;
        break;
    }
    case FreeVariable::Voltage: {
        if (!actuator) throw RangeError("voltage design needs an actuator");
        const auto v = solve_voltage(target, *actuator);
        out.value = v.voltage_v;
        out.achieved = v.achieved;
        out.iterations = v.iterations;
        return out;
    }
    }
    out.achieved = target_metric(target.kind, g, w);
    return out;
}

// ---------------------------------------------------------------------------
// Presets

struct ActuatorPreset {
    std::string_view name;
    Actuator actuator;
    std::pair<double, double> voltage_range_v;
};

/// Elastomer meta-lens: 0-1 kV drive; the lateral stretch limit is the ratio
/// of the spot sizes it spans (37.7 um / 21.4 um).
inline ActuatorPreset metalens_she2018(const SteeringGeometry& base = {}) {
    return {"metalens-she2018", MetaLensActuator{1000.0, 37.7 / 21.4, base}, {0.0, 1000.0}};
}

/// TiO2 nano-disk liquid-crystal cell: 3-5 V drive, index swing 0.3 from 1.508.
inline ActuatorPreset lc_sun2019() {
    return {"lc-sun2019", LiquidCrystalActuator{3.0, 5.0, 1.508, 0.3}, {3.0, 5.0}};
}

inline std::optional<ActuatorPreset> find_preset(std::string_view name, const SteeringGeometry& base = {}) {
    if (name == "metalens-she2018") return metalens_she2018(base);
    if (name == "lc-sun2019") return lc_sun2019();
    return std::nullopt;
}

}  // namespace risvlc
