#pragma once

// Scenario files (JSON in) and result artifacts (CSV out).
//
// Every numeric key carries its unit as a suffix (_nm, _um, _mm, _deg, _v, _w)
// unless the quantity is dimensionless; see kDimensionlessKeys. A scenario runs
// exactly one of: a single evaluation (default), a sweep, a design solve, or a
// rotation bench.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "risvlc/bench.hpp"
#include "risvlc/csv.hpp"
#include "risvlc/diffraction.hpp"
#include "risvlc/radiometry.hpp"
#include "risvlc/tuning.hpp"

namespace risvlc {

using json = nlohmann::ordered_json;

enum class SweepParameter { Wavelength, NRis, Depth, Incidence, Voltage };

inline constexpr SweepParameter kAllSweepParameters[] = {SweepParameter::Wavelength, SweepParameter::NRis,
                                                         SweepParameter::Depth, SweepParameter::Incidence,
                                                         SweepParameter::Voltage};

constexpr std::string_view to_string(SweepParameter p) {
    switch (p) {
    case SweepParameter::Wavelength: return "wavelength";
    case SweepParameter::NRis: return "n_ris";
    case SweepParameter::Depth: return "depth";
    case SweepParameter::Incidence: return "incidence";
    case SweepParameter::Voltage: return "voltage";
    }
    return "";
}

/// Key suffix carrying the parameter's unit ("" for the dimensionless index).
constexpr std::string_view unit_suffix(SweepParameter p) {
    switch (p) {
    case SweepParameter::Wavelength: return "_nm";
    case SweepParameter::NRis: return "";
    case SweepParameter::Depth: return "_mm";
    case SweepParameter::Incidence: return "_deg";
    case SweepParameter::Voltage: return "_v";
    }
    return "";
}

/// CSV column name for a swept parameter, e.g. "wavelength_nm".
inline std::string column_name(SweepParameter p) {
    if (p == SweepParameter::NRis) return "n_ris";
    return std::string(to_string(p)) + std::string(unit_suffix(p));
}

struct SweepSeries {
    SweepParameter parameter = SweepParameter::NRis;
    std::vector<double> values;

    bool operator==(const SweepSeries&) const = default;
};

/// Geometry fields replaced to form the reference ("before") state of a tuning gain.
struct GeometryOverride {
    std::optional<double> slit_um;
    std::optional<double> depth_mm;
    std::optional<double> pd_length_mm;
    std::optional<double> n_ris;

    bool operator==(const GeometryOverride&) const = default;

    SteeringGeometry apply(SteeringGeometry g) const {
        if (slit_um) g.slit_um = *slit_um;
        if (depth_mm) g.depth_mm = *depth_mm;
        if (pd_length_mm) g.pd_length_mm = *pd_length_mm;
        if (n_ris) g.n_ris = *n_ris;
        return g;
    }
};

struct SweepSpec {
    SweepParameter parameter = SweepParameter::Wavelength;
    double from = 0.0;
    double to = 0.0;
    int steps = 2;
    GridSpacing spacing = GridSpacing::Linear;
    std::optional<SweepSeries> series;
    std::optional<int> profile_samples;
    std::optional<GeometryOverride> gain_reference;

    bool operator==(const SweepSpec&) const = default;
};

struct DesignSpec {
    TargetKind kind = TargetKind::RefractionAngle;
    double value = 0.0;  // deg or mm by kind
    FreeVariable free = FreeVariable::Voltage;

    bool operator==(const DesignSpec&) const = default;
};

struct BenchSpec {
    std::vector<ReceiverFrontEnd> front_ends;
    double step_deg = 1.0;

    bool operator==(const BenchSpec&) const = default;
};

struct ActuatorSpec {
    std::optional<std::string> preset;
    Actuator actuator;

    bool operator==(const ActuatorSpec&) const = default;
};

enum class ScenarioMode { Eval, Sweep, Design, Bench };

constexpr std::string_view to_string(ScenarioMode m) {
    switch (m) {
    case ScenarioMode::Eval: return "eval";
    case ScenarioMode::Sweep: return "sweep";
    case ScenarioMode::Design: return "design";
    case ScenarioMode::Bench: return "bench";
    }
    return "";
}

struct Scenario {
    std::string name = "scenario";
    SteeringGeometry geometry;
    IncidentWave wave;
    std::optional<ActuatorSpec> actuator;
    std::optional<int> profile_samples;  // single evaluation only
    std::optional<SweepSpec> sweep;
    std::optional<DesignSpec> design;
    std::optional<BenchSpec> bench;

    bool operator==(const Scenario&) const = default;

    ScenarioMode mode() const {
        if (sweep) return ScenarioMode::Sweep;
        if (design) return ScenarioMode::Design;
        if (bench) return ScenarioMode::Bench;
        return ScenarioMode::Eval;
    }

    DesignTarget design_target() const { return {design->kind, design->value, wave, geometry, design->free}; }
};

// ---------------------------------------------------------------------------
// Loading

inline const std::set<std::string, std::less<>> kDimensionlessKeys = {
    "n_air", "n_ris", "order", "steps", "stretch_max", "n_base", "delta_n", "profile_samples", "rolloff_floor",
    "from", "to", "values"};

inline bool has_unit_suffix(std::string_view key) {
    for (std::string_view s : {"_nm", "_um", "_mm", "_deg", "_v", "_w"})
        if (key.size() > s.size() && key.substr(key.size() - s.size()) == s) return true;
    return false;
}

namespace detail {

class ScenarioReader {
public:
    std::vector<Violation> violations;

    void fail(std::string path, std::string msg) { violations.push_back({std::move(path), std::move(msg)}); }

    // Reports keys outside `allowed` and unit-less numeric keys.
    void keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
        for (const auto& [k, v] : obj.items()) {
            const std::string p = path.empty() ? k : path + "." + k;
            bool known = false;
            for (auto a : allowed) known = known || a == k;
            const bool numeric = v.is_number() || (v.is_array() && !v.empty() && v.front().is_number());
            if (numeric && !has_unit_suffix(k) && !kDimensionlessKeys.contains(k))
                fail(p, "numeric key must carry a unit suffix (_nm, _um, _mm, _deg, _v, _w)");
            else if (!known)
                fail(p, "unknown key");
        }
    }

    const json* object(const json& parent, const std::string& key, const std::string& path, bool required) {
        const std::string p = path.empty() ? key : path + "." + key;
        if (!parent.contains(key)) {
            if (required) fail(p, "required");
            return nullptr;
        }
        const json& v = parent.at(key);
        if (!v.is_object()) {
            fail(p, "must be an object");
            return nullptr;
        }
        return &v;
    }

    std::optional<double> number(const json& obj, const std::string& key, const std::string& path, bool required) {
        const std::string p = path + "." + key;
        if (!obj.contains(key)) {
            if (required) fail(p, "required");
            return std::nullopt;
        }
        const json& v = obj.at(key);
        if (!v.is_number()) {
            fail(p, "must be a number");
            return std::nullopt;
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            fail(p, "must be finite");
            return std::nullopt;
        }
        return d;
    }

    std::optional<int> integer(const json& obj, const std::string& key, const std::string& path, bool required) {
        const std::string p = path + "." + key;
        if (!obj.contains(key)) {
            if (required) fail(p, "required");
            return std::nullopt;
        }
        const json& v = obj.at(key);
        if (!v.is_number_integer()) {
            fail(p, "must be an integer");
            return std::nullopt;
        }
        return v.get<int>();
    }

    std::optional<std::string> string(const json& obj, const std::string& key, const std::string& path,
                                      bool required) {
        const std::string p = path + "." + key;
        if (!obj.contains(key)) {
            if (required) fail(p, "required");
            return std::nullopt;
        }
        if (!obj.at(key).is_string()) {
            fail(p, "must be a string");
            return std::nullopt;
        }
        return obj.at(key).get<std::string>();
    }

    std::optional<bool> boolean(const json& obj, const std::string& key, const std::string& path) {
        if (!obj.contains(key)) return std::nullopt;
        if (!obj.at(key).is_boolean()) {
            fail(path + "." + key, "must be a boolean");
            return std::nullopt;
        }
        return obj.at(key).get<bool>();
    }

    SteeringGeometry geometry(const json& g, const std::string& path) {
        keys(g, path, {"slit_um", "depth_mm", "pd_length_mm", "n_air", "n_ris"});
        SteeringGeometry out;
        if (auto v = number(g, "slit_um", path, true)) out.slit_um = *v;
        if (auto v = number(g, "depth_mm", path, true)) out.depth_mm = *v;
        if (auto v = number(g, "pd_length_mm", path, true)) out.pd_length_mm = *v;
        if (auto v = number(g, "n_air", path, false)) out.n_air = *v;
        if (auto v = number(g, "n_ris", path, true)) out.n_ris = *v;
        for (auto& e : check(out, path)) violations.push_back(e);
        return out;
    }

    IncidentWave wave(const json& w, const std::string& path) {
        keys(w, path, {"wavelength_nm", "incidence_deg", "power_w", "order"});
        IncidentWave out;
        if (auto v = number(w, "wavelength_nm", path, true)) {
            if (*v >= Wavelength::min_nm && *v <= Wavelength::max_nm)
                out.wavelength = Wavelength{*v};
            else
                fail(path + ".wavelength_nm", "must lie in [200, 2000]");
        }
        if (auto v = number(w, "incidence_deg", path, false)) out.incidence = Angle::degrees(*v);
        if (auto v = number(w, "power_w", path, false)) out.power_w = *v;
        if (auto v = integer(w, "order", path, false)) out.order = *v;
        for (auto& e : check(out, path))
            if (e.path != path + ".wavelength_nm") violations.push_back(e);
        return out;
    }

    std::optional<ActuatorSpec> actuator(const json& a, const std::string& path, const SteeringGeometry& base) {
        ActuatorSpec spec;
        if (a.contains("preset")) {
            keys(a, path, {"preset"});
            const auto name = string(a, "preset", path, true);
            if (!name) return std::nullopt;
            const auto preset = find_preset(*name, base);
            if (!preset) {
                fail(path + ".preset", "unknown preset '" + *name + "' (metalens-she2018, lc-sun2019)");
                return std::nullopt;
            }
            spec.preset = *name;
            spec.actuator = preset->actuator;
            return spec;
        }
        const auto type = string(a, "type", path, true);
        if (!type) return std::nullopt;
        if (*type == "metalens") {
            keys(a, path, {"type", "v_max_v", "stretch_max"});
            MetaLensActuator m;
            m.base = base;
            if (auto v = number(a, "v_max_v", path, false)) m.v_max_v = *v;
            if (auto v = number(a, "stretch_max", path, true)) m.stretch_max = *v;
            for (auto& e : check(m, path)) violations.push_back(e);
            spec.actuator = m;
        } else if (*type == "liquid_crystal") {
            keys(a, path, {"type", "v_on_v", "v_sat_v", "n_base", "delta_n"});
            LiquidCrystalActuator l;
            if (auto v = number(a, "v_on_v", path, false)) l.v_on_v = *v;
            if (auto v = number(a, "v_sat_v", path, false)) l.v_sat_v = *v;
            if (auto v = number(a, "n_base", path, true)) l.n_base = *v;
            if (auto v = number(a, "delta_n", path, false)) l.delta_n = *v;
            for (auto& e : check(l, path)) violations.push_back(e);
            spec.actuator = l;
        } else {
            fail(path + ".type", "must be 'metalens' or 'liquid_crystal'");
            return std::nullopt;
        }
        return spec;
    }

    std::optional<SweepParameter> parameter(const json& obj, const std::string& path) {
        const auto name = string(obj, "parameter", path, true);
        if (!name) return std::nullopt;
        for (auto p : kAllSweepParameters)
            if (to_string(p) == *name) return p;
        fail(path + ".parameter", "must be one of wavelength, n_ris, depth, incidence, voltage");
        return std::nullopt;
    }

    SweepSpec sweep(const json& s, const std::string& path) {
        SweepSpec out;
        const auto param = parameter(s, path);
        const std::string sfx = param ? std::string(unit_suffix(*param)) : "";
        const std::string from_key = "from" + sfx;
        const std::string to_key = "to" + sfx;
        keys(s, path, {"parameter", from_key, to_key, "steps", "spacing", "series", "profile_samples",
                       "gain_reference"});
        if (param) {
            out.parameter = *param;
            if (auto v = number(s, from_key, path, true)) out.from = *v;
            if (auto v = number(s, to_key, path, true)) out.to = *v;
        }
        if (auto v = integer(s, "steps", path, true)) {
            out.steps = *v;
            if (*v < 2) fail(path + ".steps", "must be >= 2");
        }
        if (auto sp = string(s, "spacing", path, false)) {
            if (*sp == "log")
                out.spacing = GridSpacing::Log;
            else if (*sp != "linear")
                fail(path + ".spacing", "must be 'linear' or 'log'");
        }
        if (out.spacing == GridSpacing::Log && !(out.from > 0 && out.to > 0))
            fail(path, "log spacing needs positive endpoints");
        if (const json* ser = object(s, "series", path, false)) {
            const std::string sp = path + ".series";
            SweepSeries series;
            const auto sparam = parameter(*ser, sp);
            const std::string vkey = "values" + (sparam ? std::string(unit_suffix(*sparam)) : "");
            keys(*ser, sp, {"parameter", vkey});
            if (sparam) {
                series.parameter = *sparam;
                if (param && *sparam == *param) fail(sp + ".parameter", "must differ from the swept parameter");
                if (!ser->contains(vkey) || !ser->at(vkey).is_array() || ser->at(vkey).empty()) {
                    fail(sp + "." + vkey, "required non-empty array of numbers");
                } else {
                    for (const auto& v : ser->at(vkey)) {
                        if (!v.is_number()) {
                            fail(sp + "." + vkey, "must contain only numbers");
                            break;
                        }
                        series.values.push_back(v.get<double>());
                    }
                }
            }
            out.series = series;
        }
        if (auto v = integer(s, "profile_samples", path, false)) {
            out.profile_samples = *v;
            if (*v < 3) fail(path + ".profile_samples", "must be >= 3");
        }
        if (const json* ref = object(s, "gain_reference", path, false)) {
            const std::string rp = path + ".gain_reference";
            keys(*ref, rp, {"slit_um", "depth_mm", "pd_length_mm", "n_ris"});
            GeometryOverride o;
            o.slit_um = number(*ref, "slit_um", rp, false);
            o.depth_mm = number(*ref, "depth_mm", rp, false);
            o.pd_length_mm = number(*ref, "pd_length_mm", rp, false);
            o.n_ris = number(*ref, "n_ris", rp, false);
            out.gain_reference = o;
        }
        return out;
    }

    DesignSpec design(const json& d, const std::string& path) {
        DesignSpec out;
        std::string value_key = "value_deg";
        if (auto t = string(d, "target", path, true)) {
            if (*t == "refraction_angle")
                out.kind = TargetKind::RefractionAngle;
            else if (*t == "spot_width")
                out.kind = TargetKind::SpotWidth;
            else if (*t == "pd_landing")
                out.kind = TargetKind::PdLanding;
            else
                fail(path + ".target", "must be one of refraction_angle, spot_width, pd_landing");
            if (out.kind != TargetKind::RefractionAngle) value_key = "value_mm";
        }
        keys(d, path, {"target", value_key, "free"});
        if (auto v = number(d, value_key, path, true)) {
            out.value = *v;
            if (!(*v > 0)) fail(path + "." + value_key, "must be > 0");
            if (out.kind == TargetKind::RefractionAngle && !(*v < 90)) fail(path + "." + value_key, "must be < 90");
        }
        if (auto f = string(d, "free", path, true)) {
            if (*f == "n_ris")
                out.free = FreeVariable::NRis;
            else if (*f == "depth")
                out.free = FreeVariable::Depth;
            else if (*f == "voltage")
                out.free = FreeVariable::Voltage;
            else
                fail(path + ".free", "must be one of n_ris, depth, voltage");
        }
        return out;
    }

    BenchSpec bench(const json& b, const std::string& path) {
        keys(b, path, {"step_deg", "front_ends"});
        BenchSpec out;
        if (auto v = number(b, "step_deg", path, true)) {
            out.step_deg = *v;
            if (!(*v > 0 && *v <= 10)) fail(path + ".step_deg", "must lie in (0, 10]");
        }
        if (!b.contains("front_ends") || !b.at("front_ends").is_array()) {
            fail(path + ".front_ends", "required array");
            return out;
        }
        const auto& list = b.at("front_ends");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string fp = path + ".front_ends[" + std::to_string(i) + "]";
            const json& f = list[i];
            if (!f.is_object()) {
                fail(fp, "must be an object");
                continue;
            }
            keys(f, fp, {"kind", "max_incidence_deg", "rolloff_start_deg", "rolloff_floor", "spot_mm", "tunable"});
            const auto name = string(f, "kind", fp, true);
            if (!name) continue;
            const auto kind = parse_front_end_kind(*name);
            if (!kind) {
                fail(fp + ".kind", "unknown front-end kind '" + *name + "'");
                continue;
            }
            ReceiverFrontEnd fe = make_front_end(*kind);
            if (auto v = number(f, "max_incidence_deg", fp, false)) fe.max_incidence = Angle::degrees(*v);
            if (auto v = number(f, "rolloff_start_deg", fp, false)) fe.rolloff_start = Angle::degrees(*v);
            if (auto v = number(f, "rolloff_floor", fp, false)) fe.rolloff_floor = *v;
            if (auto v = number(f, "spot_mm", fp, false)) fe.spot_mm = *v;
            if (auto v = boolean(f, "tunable", fp)) fe.tunable = *v;
            for (auto& e : check(fe, fp)) violations.push_back(e);
            out.front_ends.push_back(fe);
        }
        return out;
    }
};

}  // namespace detail

/// Validates a parsed document. All violations are collected before throwing.
inline Scenario scenario_from_json(const json& doc, std::string default_name = "scenario") {
    detail::ScenarioReader r;
    Scenario s;
    s.name = std::move(default_name);
    if (!doc.is_object()) throw ValidationError(std::vector<Violation>{{"$", "scenario must be a JSON object"}});
    r.keys(doc, "", {"name", "geometry", "wave", "actuator", "profile_samples", "sweep", "design", "bench"});
    if (auto n = r.string(doc, "name", "$", false)) s.name = *n;
    if (const json* g = r.object(doc, "geometry", "", true)) s.geometry = r.geometry(*g, "geometry");
    if (const json* w = r.object(doc, "wave", "", true)) s.wave = r.wave(*w, "wave");
    if (const json* a = r.object(doc, "actuator", "", false)) s.actuator = r.actuator(*a, "actuator", s.geometry);
    if (auto v = r.integer(doc, "profile_samples", "$", false)) {
        s.profile_samples = *v;
        if (*v < 3) r.fail("profile_samples", "must be >= 3");
    }
    if (const json* sw = r.object(doc, "sweep", "", false)) s.sweep = r.sweep(*sw, "sweep");
    if (const json* d = r.object(doc, "design", "", false)) s.design = r.design(*d, "design");
    if (const json* b = r.object(doc, "bench", "", false)) s.bench = r.bench(*b, "bench");

    const int active = int(s.sweep.has_value()) + int(s.design.has_value()) + int(s.bench.has_value());
    if (active > 1) r.fail("$", "sweep, design and bench are mutually exclusive; give at most one");
    if (s.profile_samples && active > 0) r.fail("profile_samples", "only valid for a single evaluation");
    const bool needs_actuator = (s.sweep && (s.sweep->parameter == SweepParameter::Voltage ||
                                             (s.sweep->series && s.sweep->series->parameter == SweepParameter::Voltage))) ||
                                (s.design && s.design->free == FreeVariable::Voltage);
    if (needs_actuator && !s.actuator) r.fail("actuator", "required for voltage sweeps and voltage designs");
    if (!r.violations.empty()) throw ValidationError(std::move(r.violations));
    return s;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return scenario_from_json(doc, path.stem().string());
}

// ---------------------------------------------------------------------------
// Serialisation (inverse of scenario_from_json)

inline json to_json(const SteeringGeometry& g) {
    return {{"slit_um", g.slit_um}, {"depth_mm", g.depth_mm}, {"pd_length_mm", g.pd_length_mm},
            {"n_air", g.n_air}, {"n_ris", g.n_ris}};
}

inline json to_json(const IncidentWave& w) {
    return {{"wavelength_nm", w.wavelength.nm()}, {"incidence_deg", w.incidence.deg()}, {"power_w", w.power_w},
            {"order", w.order}};
}

inline json to_json(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["geometry"] = to_json(s.geometry);
    j["wave"] = to_json(s.wave);
    if (s.actuator) {
        if (s.actuator->preset) {
            j["actuator"] = {{"preset", *s.actuator->preset}};
        } else if (const auto* m = std::get_if<MetaLensActuator>(&s.actuator->actuator)) {
            j["actuator"] = {{"type", "metalens"}, {"v_max_v", m->v_max_v}, {"stretch_max", m->stretch_max}};
        } else {
            const auto& l = std::get<LiquidCrystalActuator>(s.actuator->actuator);
            j["actuator"] = {{"type", "liquid_crystal"}, {"v_on_v", l.v_on_v}, {"v_sat_v", l.v_sat_v},
                             {"n_base", l.n_base}, {"delta_n", l.delta_n}};
        }
    }
    if (s.profile_samples) j["profile_samples"] = *s.profile_samples;
    if (s.sweep) {
        const auto& w = *s.sweep;
        const std::string sfx(unit_suffix(w.parameter));
        json sj = {{"parameter", to_string(w.parameter)}, {"from" + sfx, w.from}, {"to" + sfx, w.to},
                   {"steps", w.steps}, {"spacing", w.spacing == GridSpacing::Log ? "log" : "linear"}};
        if (w.series)
            sj["series"] = {{"parameter", to_string(w.series->parameter)},
                            {"values" + std::string(unit_suffix(w.series->parameter)), w.series->values}};
        if (w.profile_samples) sj["profile_samples"] = *w.profile_samples;
        if (w.gain_reference) {
            json r = json::object();
            if (w.gain_reference->slit_um) r["slit_um"] = *w.gain_reference->slit_um;
            if (w.gain_reference->depth_mm) r["depth_mm"] = *w.gain_reference->depth_mm;
            if (w.gain_reference->pd_length_mm) r["pd_length_mm"] = *w.gain_reference->pd_length_mm;
            if (w.gain_reference->n_ris) r["n_ris"] = *w.gain_reference->n_ris;
            sj["gain_reference"] = r;
        }
        j["sweep"] = sj;
    }
    if (s.design) {
        const std::string key = s.design->kind == TargetKind::RefractionAngle ? "value_deg" : "value_mm";
        j["design"] = {{"target", to_string(s.design->kind)}, {key, s.design->value}, {"free", to_string(s.design->free)}};
    }
    if (s.bench) {
        json list = json::array();
        for (const auto& fe : s.bench->front_ends) {
            json f = {{"kind", to_string(fe.kind)}, {"max_incidence_deg", fe.max_incidence.deg()}};
            if (fe.rolloff_start) f["rolloff_start_deg"] = fe.rolloff_start->deg();
            f["rolloff_floor"] = fe.rolloff_floor;
            if (fe.spot_mm) f["spot_mm"] = *fe.spot_mm;
            f["tunable"] = fe.tunable;
            list.push_back(f);
        }
        j["bench"] = {{"step_deg", s.bench->step_deg}, {"front_ends", list}};
    }
    return j;
}

// ---------------------------------------------------------------------------
// Running

struct RunOptions {
    std::filesystem::path out_dir = "out";
    QuadratureOptions quadrature;
};

struct Artifact {
    std::filesystem::path path;
    std::string summary;
};

namespace detail {

inline std::string file_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("write failed for " + path.string());
}

inline std::size_t count_rows(const std::string& csv_text) {
    const auto lines = static_cast<std::size_t>(std::count(csv_text.begin(), csv_text.end(), '\n'));
    return lines > 0 ? lines - 1 : 0;
}

inline void apply_parameter(SweepParameter p, double value, SteeringGeometry& g, IncidentWave& w,
                            const std::optional<ActuatorSpec>& act) {
    switch (p) {
    case SweepParameter::Wavelength: w.wavelength = Wavelength{value}; break;
    case SweepParameter::NRis: g.n_ris = value; break;
    case SweepParameter::Depth: g.depth_mm = value; break;
    case SweepParameter::Incidence: w.incidence = Angle::degrees(value); break;
    case SweepParameter::Voltage: {
        Actuator a = act->actuator;
        if (auto* m = std::get_if<MetaLensActuator>(&a)) m->base = g;
        g = apply_actuator(a, value, g);
        break;
    }
    }
}

struct PointMetrics {
    double refraction_angle_deg = std::numeric_limits<double>::quiet_NaN();
    double center_offset_mm = std::numeric_limits<double>::quiet_NaN();
    double spot_full_width_mm = std::numeric_limits<double>::quiet_NaN();
    std::optional<TransmittanceResult> transmittance;
    std::optional<double> tuning_gain;
    std::string status = "ok";
};

inline PointMetrics evaluate_point(const SteeringGeometry& g, const IncidentWave& w,
                                   const std::optional<GeometryOverride>& gain_ref, const QuadratureOptions& opt) {
    PointMetrics m;
    try {
        const Angle theta = refraction_angle(g, w);
        m.refraction_angle_deg = theta.deg();
        m.center_offset_mm = g.depth_mm * std::tan(theta.rad());
        const double s = w.wavelength.nm() / g.n_ris / (g.slit_um * 1000.0);
        m.spot_full_width_mm = s < 1.0 ? 2 * g.depth_mm * std::tan(std::asin(s)) : std::numeric_limits<double>::infinity();
        if (gain_ref) {
            const auto tg = tuning_gain(gain_ref->apply(g), g, w, opt);
            m.transmittance = tg.after;
            m.tuning_gain = tg.gain;
        } else {
            m.transmittance = transmittance(g, w, opt);
        }
    } catch (const Error& e) {
        m.status = std::string(to_string(e.kind()));
    }
    return m;
}

}  // namespace detail

inline std::vector<Artifact> run_eval(const Scenario& s, const RunOptions& opt) {
    std::vector<Artifact> out;
    const auto& g = s.geometry;
    const auto& w = s.wave;
    const Angle theta = refraction_angle(g, w);
    const auto spot = spot_report(g, w, opt.quadrature);
    const auto t = transmittance(g, w, opt.quadrature);
    std::ostringstream os;
    os << "refraction_angle_deg,max_propagating_order,center_offset_mm,spot_full_width_mm,first_null_angle_deg,"
          "pd_coverage,transmittance,incidence_factor,captured_power_w\n";
    os << csv::num(theta.deg()) << ',' << max_propagating_order(g, w) << ','
       << csv::num(g.depth_mm * std::tan(theta.rad())) << ',' << csv::num(spot.full_width_mm) << ','
       << csv::num(spot.first_null_angle.deg()) << ',' << csv::num(spot.pd_coverage) << ',' << csv::num(t.value)
       << ',' << csv::num(t.incidence_factor) << ',' << csv::num(t.captured_power_w) << '\n';
    const auto path = opt.out_dir / (s.name + ".csv");
    detail::write_file(path, os.str());
    out.push_back({path, "theta_ris=" + csv::num(theta.deg()) + " deg, T=" + csv::num(t.value)});
    if (s.profile_samples) {
        std::ostringstream ps;
        write_csv(ps, profile_on_pd(g, w, *s.profile_samples));
        const auto pp = opt.out_dir / (s.name + "-profile.csv");
        detail::write_file(pp, ps.str());
        out.push_back({pp, std::to_string(*s.profile_samples) + " profile samples"});
    }
    return out;
}

inline std::vector<Artifact> run_sweep(const Scenario& s, const RunOptions& opt) {
    const SweepSpec& sw = *s.sweep;
    const auto grid = make_grid(sw.from, sw.to, sw.steps, sw.spacing);
    const std::vector<double> series_values = sw.series ? sw.series->values : std::vector<double>{0.0};
    const std::size_t ns = series_values.size();
    const std::size_t n = ns * grid.size();

    struct Point {
        SteeringGeometry g;
        IncidentWave w;
        detail::PointMetrics m;
    };
    std::vector<Point> pts(n);
    parallel_for(n, [&](std::size_t k) {
        const std::size_t si = k / grid.size();
        const std::size_t gi = k % grid.size();
        Point& p = pts[k];
        p.g = s.geometry;
        p.w = s.wave;
        try {
            if (sw.series) detail::apply_parameter(sw.series->parameter, series_values[si], p.g, p.w, s.actuator);
            detail::apply_parameter(sw.parameter, grid[gi], p.g, p.w, s.actuator);
        } catch (const Error& e) {
            p.m.status = std::string(to_string(e.kind()));
            return;
        }
        p.m = detail::evaluate_point(p.g, p.w, sw.gain_reference, opt.quadrature);
    });

    std::vector<Artifact> out;
    std::ostringstream os;
    if (sw.series) os << column_name(sw.series->parameter) << ',';
    os << column_name(sw.parameter)
       << ",refraction_angle_deg,center_offset_mm,spot_full_width_mm,transmittance,incidence_factor,captured_power_w";
    if (sw.gain_reference) os << ",tuning_gain";
    os << ",status\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::size_t failed = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& m = pts[k].m;
        const auto& t = m.transmittance;
        if (sw.series) os << csv::num(series_values[k / grid.size()]) << ',';
        os << csv::num(grid[k % grid.size()]) << ',' << csv::num(m.refraction_angle_deg) << ','
           << csv::num(m.center_offset_mm) << ',' << csv::num(m.spot_full_width_mm) << ','
           << csv::num(t ? t->value : nan) << ',' << csv::num(t ? t->incidence_factor : nan) << ','
           << csv::num(t ? t->captured_power_w : nan);
        if (sw.gain_reference) os << ',' << csv::num(m.tuning_gain.value_or(nan));
        os << ',' << m.status << '\n';
        if (m.status != "ok") ++failed;
    }
    const auto path = opt.out_dir / (s.name + ".csv");
    detail::write_file(path, os.str());
    out.push_back({path, std::to_string(n) + " sweep points, " + std::to_string(failed) + " failed"});

    auto series_tag = [&](std::size_t si) {
        return sw.series ? "-" + column_name(sw.series->parameter) + "=" + detail::file_number(series_values[si])
                         : std::string{};
    };
    if (sw.parameter == SweepParameter::Wavelength) {
        for (std::size_t si = 0; si < ns; ++si) {
            std::vector<SweepPoint> tp(grid.size());
            for (std::size_t gi = 0; gi < grid.size(); ++gi) {
                tp[gi].wavelength_nm = grid[gi];
                tp[gi].result = pts[si * grid.size() + gi].m.transmittance;
            }
            std::ostringstream ts;
            write_csv(ts, tp);
            const auto tpath = opt.out_dir / (s.name + "-transmittance" + series_tag(si) + ".csv");
            detail::write_file(tpath, ts.str());
            out.push_back({tpath, std::to_string(grid.size()) + " transmittance rows"});
        }
    }
    if (sw.profile_samples) {
        for (std::size_t k = 0; k < n; ++k) {
            const auto& p = pts[k];
            if (p.m.status != "ok") continue;
            std::ostringstream ps;
            write_csv(ps, profile_on_pd(p.g, p.w, *sw.profile_samples));
            const auto ppath = opt.out_dir / (s.name + "-profile" + series_tag(k / grid.size()) + "-" +
                                              column_name(sw.parameter) + "=" +
                                              detail::file_number(grid[k % grid.size()]) + ".csv");
            detail::write_file(ppath, ps.str());
            out.push_back({ppath, std::to_string(*sw.profile_samples) + " profile samples"});
        }
    }
    return out;
}

inline std::vector<Artifact> run_design(const Scenario& s, const RunOptions& opt) {
    std::optional<Actuator> act;
    if (s.actuator) act = s.actuator->actuator;
    const auto sol = solve(s.design_target(), act);
    std::ostringstream os;
    os << "target_kind,target_value,free_variable,solution,achieved,iterations\n";
    os << to_string(s.design->kind) << ',' << csv::num(s.design->value) << ',' << to_string(sol.free) << ','
       << csv::num(sol.value) << ',' << csv::num(sol.achieved) << ',' << sol.iterations << '\n';
    const auto path = opt.out_dir / (s.name + ".csv");
    detail::write_file(path, os.str());
    return {{path, std::string(to_string(sol.free)) + "=" + csv::num(sol.value)}};
}

inline std::vector<Artifact> run_bench(const Scenario& s, const RunOptions& opt) {
    const auto& b = *s.bench;
    const Angle step = Angle::degrees(b.step_deg);
    const auto rows = compare_table(b.front_ends, step);
    std::vector<Artifact> out;
    std::ostringstream os;
    write_csv(os, rows);
    const auto path = opt.out_dir / (s.name + ".csv");
    detail::write_file(path, os.str());
    out.push_back({path, std::to_string(rows.size()) + " front-ends compared"});
    std::ostringstream ts;
    write_text_table(ts, rows);
    const auto tpath = opt.out_dir / (s.name + ".txt");
    detail::write_file(tpath, ts.str());
    out.push_back({tpath, "aligned comparison table"});
    for (std::size_t i = 0; i < b.front_ends.size(); ++i) {
        std::ostringstream rs;
        write_csv(rs, rotation_sweep(b.front_ends[i], step));
        const auto rpath =
            opt.out_dir / (s.name + "-sweep-" + std::to_string(i) + "-" + std::string(to_string(b.front_ends[i].kind)) + ".csv");
        detail::write_file(rpath, rs.str());
        out.push_back({rpath, "rotation sweep"});
    }
    return out;
}

/// Runs the scenario's mode and writes its CSV artifacts into opt.out_dir.
inline std::vector<Artifact> run(const Scenario& s, const RunOptions& opt = {}) {
    std::error_code ec;
    std::filesystem::create_directories(opt.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + opt.out_dir.string() + ": " + ec.message());
    switch (s.mode()) {
    case ScenarioMode::Eval: return run_eval(s, opt);
    case ScenarioMode::Sweep: return run_sweep(s, opt);
    case ScenarioMode::Design: return run_design(s, opt);
    case ScenarioMode::Bench: return run_bench(s, opt);
    }
    return {};
}

/// Bundled figure and table scenarios run by the `figures` subcommand.
inline const std::vector<std::string>& bundled_figure_scenarios() {
    static const std::vector<std::string> names = {"fig2-left", "fig2-right", "fig3-left", "fig3-right",
                                                   "fig4-top",  "fig4-bottom", "table1"};
    return names;
}

}  // namespace risvlc
