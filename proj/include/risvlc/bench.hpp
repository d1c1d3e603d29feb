#pragma once

// Rotation bench comparing static lens front-ends, characterised only by their
// published incidence envelopes, with closed-loop RIS front-ends that re-drive
// their actuator at every rotation angle to keep the steered beam on the PD.

#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "risvlc/csv.hpp"
#include "risvlc/parallel.hpp"
#include "risvlc/radiometry.hpp"
#include "risvlc/tuning.hpp"

namespace risvlc {

enum class FrontEndKind { Convex, Gilcpc, Spherical, Cmbbp, AdjLens, MetalensRis, LcRis };

inline constexpr FrontEndKind kAllFrontEnds[] = {FrontEndKind::Convex,  FrontEndKind::Gilcpc,
                                                 FrontEndKind::Spherical, FrontEndKind::Cmbbp,
                                                 FrontEndKind::AdjLens, FrontEndKind::MetalensRis,
                                                 FrontEndKind::LcRis};

constexpr std::string_view to_string(FrontEndKind k) {
    switch (k) {
    case FrontEndKind::Convex: return "convex";
    case FrontEndKind::Gilcpc: return "gilcpc";
    case FrontEndKind::Spherical: return "spherical";
    case FrontEndKind::Cmbbp: return "cmbbp";
    case FrontEndKind::AdjLens: return "adj_lens";
    case FrontEndKind::MetalensRis: return "metalens_ris";
    case FrontEndKind::LcRis: return "lc_ris";
    }
    return "";
}

inline std::optional<FrontEndKind> parse_front_end_kind(std::string_view s) {
    for (auto k : kAllFrontEnds)
        if (to_string(k) == s) return k;
    return std::nullopt;
}

constexpr bool is_ris(FrontEndKind k) { return k == FrontEndKind::MetalensRis || k == FrontEndKind::LcRis; }

/// Optical state a RIS front-end steers with.
struct RisSetup {
    SteeringGeometry geometry;
    IncidentWave wave;
    Actuator actuator;

    bool operator==(const RisSetup&) const = default;
};

struct ReceiverFrontEnd {
    FrontEndKind kind = FrontEndKind::Convex;
    Angle max_incidence;
    std::optional<Angle> rolloff_start;  // CMBBP only
    double rolloff_floor = 0.5;          // CMBBP relative intensity at max_incidence
    std::optional<double> spot_mm;
    bool tunable = false;
    std::optional<std::pair<double, double>> voltage_range_v;
    std::optional<RisSetup> ris;

    bool operator==(const ReceiverFrontEnd&) const = default;
};

/// Adjustable-element lens envelope. Only "< 90 deg" is published; 89 deg keeps
/// it between the CMBBP and RIS envelopes.
inline constexpr double kAdjLensDefaultDeg = 89.0;

inline RisSetup default_ris_setup(FrontEndKind kind) {
    RisSetup s;
    s.geometry = SteeringGeometry{4.0, 0.75, 1.5, 1.0, 1.6};
    s.wave = IncidentWave{Wavelength{550.0}, Angle{}, 1.0, 1};
    if (kind == FrontEndKind::LcRis) {
        const auto lc = std::get<LiquidCrystalActuator>(lc_sun2019().actuator);
        s.geometry.n_ris = lc.n_base;
        s.actuator = lc;
    } else {
        s.actuator = metalens_she2018(s.geometry).actuator;
    }
    return s;
}

/// Table-row defaults for each kind.
inline ReceiverFrontEnd make_front_end(FrontEndKind kind) {
    ReceiverFrontEnd fe;
    fe.kind = kind;
    switch (kind) {
    case FrontEndKind::Convex: fe.max_incidence = Angle::degrees(36.2); fe.spot_mm = 2.0; break;
    case FrontEndKind::Gilcpc: fe.max_incidence = Angle::degrees(40.0); break;
    case FrontEndKind::Spherical: fe.max_incidence = Angle::degrees(45.0); fe.spot_mm = 3.0; break;
    case FrontEndKind::Cmbbp:
        fe.max_incidence = Angle::degrees(85.0);
        fe.rolloff_start = Angle::degrees(25.0);
        break;
    case FrontEndKind::AdjLens: fe.max_incidence = Angle::degrees(kAdjLensDefaultDeg); fe.tunable = true; break;
    case FrontEndKind::MetalensRis:
    case FrontEndKind::LcRis: {
        fe.max_incidence = Angle::degrees(90.0);
        fe.tunable = true;
        fe.ris = default_ris_setup(kind);
        fe.voltage_range_v = voltage_bracket(fe.ris->actuator);
        fe.spot_mm = central_lobe_width_mm(fe.ris->geometry, fe.ris->wave);
        break;
    }
    }
    return fe;
}

inline std::vector<Violation> check(const ReceiverFrontEnd& fe, std::string_view prefix = "front_end") {
    std::vector<Violation> out;
    const std::string p(prefix);
    const double deg = fe.max_incidence.deg();
    if (!(deg > 0 && deg <= 90.0 + 1e-9)) out.push_back({p + ".max_incidence_deg", "must lie in (0, 90]"});
    if (fe.rolloff_start.has_value() != (fe.kind == FrontEndKind::Cmbbp))
        out.push_back({p + ".rolloff_start_deg", "present exactly for cmbbp"});
    if (fe.rolloff_start && !(fe.rolloff_start->deg() >= 0 && fe.rolloff_start->deg() < deg))
        out.push_back({p + ".rolloff_start_deg", "must lie in [0, max_incidence)"});
    if (!(fe.rolloff_floor >= 0 && fe.rolloff_floor <= 1)) out.push_back({p + ".rolloff_floor", "must lie in [0, 1]"});
    if (is_ris(fe.kind) != fe.ris.has_value()) out.push_back({p + ".ris", "present exactly for RIS kinds"});
    if (fe.ris) {
        auto add = [&](std::vector<Violation> v) { out.insert(out.end(), v.begin(), v.end()); };
        add(check(fe.ris->geometry, p + ".ris.geometry"));
        add(check(fe.ris->wave, p + ".ris.wave"));
        std::visit([&](const auto& a) { add(check(a, p + ".ris.actuator")); }, fe.ris->actuator);
    }
    return out;
}

struct Detection {
    bool detected = false;
    double relative_intensity = 0.0;
    std::optional<double> drive_v;  // RIS only
};

namespace detail {

inline constexpr double kAngleSlackDeg = 1e-9;

// Closed loop: lowest drive that lands the steered pattern centre on the PD.
inline Detection detect_ris(const ReceiverFrontEnd& fe, Angle rotation) {
    const RisSetup& s = *fe.ris;
    IncidentWave wave = s.wave;
    wave.incidence = rotation;
    const double edge = s.geometry.pd_length_mm / 2;
    DesignTarget target{TargetKind::PdLanding, edge, wave, s.geometry, FreeVariable::Voltage};
    const auto [v_lo, v_hi] = voltage_bracket(s.actuator);
    try {
        auto landing = [&](double v) {
            return target_metric(TargetKind::PdLanding, apply_actuator(s.actuator, v, s.geometry), wave);
        };
        double v = v_lo;
        if (std::abs(landing(v_lo)) > edge) {
            if (std::abs(landing(v_hi)) > edge) return {};
            v = solve_voltage(target, s.actuator).voltage_v;
        }
        const auto t = transmittance(apply_actuator(s.actuator, v, s.geometry), wave);
        return {true, t.value, v};
    } catch (const EvanescentOrder&) {
        return {};
    } catch (const Infeasible&) {
        return {};
    }
}

inline double cmbbp_rolloff(const ReceiverFrontEnd& fe, double deg) {
    const double start = fe.rolloff_start->deg();
    const double stop = fe.max_incidence.deg();
    if (deg <= start) return 1.0;
    const double t = std::min(1.0, (deg - start) / (stop - start));
    return 1.0 - t * (1.0 - fe.rolloff_floor);
}

}  // namespace detail

/// Whether the front-end still detects light after rotating by `rotation`, and
/// the relative intensity it receives.
inline Detection detect(const ReceiverFrontEnd& fe, Angle rotation) {
    const double deg = rotation.deg();
    if (!(deg >= -detail::kAngleSlackDeg && deg <= 90.0 + detail::kAngleSlackDeg))
        throw RangeError("rotation must lie in [0, 90] deg");
    if (deg > fe.max_incidence.deg() + detail::kAngleSlackDeg) return {};
    if (fe.ris) return detail::detect_ris(fe, rotation);
    double intensity = rotation.cos_exact();
    if (fe.kind == FrontEndKind::Cmbbp && fe.rolloff_start) intensity *= detail::cmbbp_rolloff(fe, deg);
    return {true, std::clamp(intensity, 0.0, 1.0), std::nullopt};
}

struct RotationSweepResult {
    std::vector<double> angles_deg;
    std::vector<bool> detected;
    std::vector<double> relative_intensity;
    std::vector<double> drive_v;  // NaN where not applicable
};

/// Rotation angles 0, step, 2*step, ... and 90 deg, rounded to 1e-9 deg so that
/// grid points coincide with decimal envelope limits.
inline std::vector<double> rotation_grid(double step_deg) {
    if (!(step_deg > 0 && step_deg <= 10.0)) throw RangeError("rotation step must lie in (0, 10] deg");
    std::vector<double> out;
    for (long k = 0;; ++k) {
        const double a = std::round(k * step_deg * 1e9) / 1e9;
        if (a > 90.0 - detail::kAngleSlackDeg) break;
        out.push_back(a);
    }
    out.push_back(90.0);
    return out;
}

inline RotationSweepResult rotation_sweep(const ReceiverFrontEnd& fe, Angle step) {
    RotationSweepResult r;
    r.angles_deg = rotation_grid(step.deg());
    const std::size_t n = r.angles_deg.size();
    std::vector<Detection> d(n);
    parallel_for(n, [&](std::size_t i) { d[i] = detect(fe, Angle::degrees(r.angles_deg[i])); });
    r.detected.resize(n);
    r.relative_intensity.resize(n);
    r.drive_v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        r.detected[i] = d[i].detected;
        r.relative_intensity[i] = d[i].detected ? d[i].relative_intensity : 0.0;
        r.drive_v[i] = d[i].drive_v.value_or(std::numeric_limits<double>::quiet_NaN());
    }
    return r;
}

struct TableRow {
    FrontEndKind kind;
    double max_incidence_deg = 0.0;
    double max_detected_deg = std::numeric_limits<double>::quiet_NaN();
    double mean_intensity = std::numeric_limits<double>::quiet_NaN();  // over detected angles
    bool tunable = false;
    std::optional<std::pair<double, double>> voltage_range_v;
};

/// One row per front-end, in input order (duplicates kept).
inline std::vector<TableRow> compare_table(const std::vector<ReceiverFrontEnd>& front_ends, Angle step) {
    std::vector<TableRow> rows;
    rows.reserve(front_ends.size());
    for (const auto& fe : front_ends) {
        const auto sweep = rotation_sweep(fe, step);
        TableRow row{fe.kind, fe.max_incidence.deg()};
        row.tunable = fe.tunable;
        row.voltage_range_v = fe.voltage_range_v;
        double sum = 0.0;
        int count = 0;
        for (std::size_t i = 0; i < sweep.angles_deg.size(); ++i) {
            if (!sweep.detected[i]) continue;
            row.max_detected_deg = sweep.angles_deg[i];
            sum += sweep.relative_intensity[i];
            ++count;
        }
        if (count > 0) row.mean_intensity = sum / count;
        rows.push_back(row);
    }
    return rows;
}

inline std::vector<ReceiverFrontEnd> table1_roster() {
    std::vector<ReceiverFrontEnd> out;
    for (auto k : kAllFrontEnds) out.push_back(make_front_end(k));
    return out;
}

inline void write_csv(std::ostream& os, const std::vector<TableRow>& rows) {
    os << "kind,max_incidence_deg,max_detected_deg,mean_intensity,tunable,voltage_low_v,voltage_high_v\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : rows) {
        os << to_string(r.kind) << ',' << csv::num(r.max_incidence_deg) << ',' << csv::num(r.max_detected_deg) << ','
           << csv::num(r.mean_intensity) << ',' << (r.tunable ? "yes" : "no") << ','
           << csv::num(r.voltage_range_v ? r.voltage_range_v->first : nan) << ','
           << csv::num(r.voltage_range_v ? r.voltage_range_v->second : nan) << '\n';
    }
}

inline void write_csv(std::ostream& os, const RotationSweepResult& r) {
    os << "rotation_deg,detected,relative_intensity,drive_v\n";
    for (std::size_t i = 0; i < r.angles_deg.size(); ++i)
        os << csv::num(r.angles_deg[i]) << ',' << (r.detected[i] ? 1 : 0) << ',' << csv::num(r.relative_intensity[i])
           << ',' << csv::num(r.drive_v[i]) << '\n';
}

/// Aligned text rendering: kind, incidence range, tunable, external voltage.
inline void write_text_table(std::ostream& os, const std::vector<TableRow>& rows) {
    auto fmt = [](double v, int prec) {
        std::ostringstream s;
        s << std::fixed << std::setprecision(prec) << v;
        return s.str();
    };
    os << std::left << std::setw(14) << "kind" << std::setw(16) << "max_angle_deg" << std::setw(18)
       << "max_detected_deg" << std::setw(16) << "mean_intensity" << std::setw(9) << "tunable"
       << "voltage_range\n";
    for (const auto& r : rows) {
        std::string volts = "no";
        if (r.voltage_range_v) {
            const auto [lo, hi] = *r.voltage_range_v;
            volts = hi >= 1000.0 ? fmt(lo / 1000.0, 1) + " kV - " + fmt(hi / 1000.0, 1) + " kV"
                                 : fmt(lo, 1) + " V - " + fmt(hi, 1) + " V";
        }
        os << std::left << std::setw(14) << to_string(r.kind) << std::setw(16) << fmt(r.max_incidence_deg, 1)
           << std::setw(18) << (std::isnan(r.max_detected_deg) ? std::string("-") : fmt(r.max_detected_deg, 1))
           << std::setw(16) << (std::isnan(r.mean_intensity) ? std::string("-") : fmt(r.mean_intensity, 4))
           << std::setw(9) << (r.tunable ? "yes" : "no") << volts << '\n';
    }
}

}  // namespace risvlc
