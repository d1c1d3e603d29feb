// Acceptance suite: one PASS/FAIL line per criterion; exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "risvlc/risvlc.hpp"

using namespace risvlc;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
    std::printf("[%s] %d. %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

IncidentWave wave(double lambda_nm, double theta_deg, int m) {
    return IncidentWave{Wavelength{lambda_nm}, Angle::degrees(theta_deg), 1.0, m};
}

SteeringGeometry geom(double slit_um, double n_ris, double depth_mm = 0.75, double pd_mm = 1.0) {
    return SteeringGeometry{slit_um, depth_mm, pd_mm, 1.0, n_ris};
}

void fig2_endpoints() {
    const double lo = refraction_angle(geom(4, 1.4), wave(300, 90, 1)).deg();
    const double hi = refraction_angle(geom(4, 1.9), wave(300, 90, 1)).deg();
    const double swing = refraction_angle(geom(4, 1.4), wave(800, 90, 1)).deg() -
                         refraction_angle(geom(4, 1.9), wave(800, 90, 1)).deg();
    const bool pass = std::abs(lo - 50.133) <= 0.5 && std::abs(hi - 34.377) <= 0.5 && std::abs(swing - 20.053) <= 0.7;
    report(1, "Grazing-incidence steering endpoints", pass,
           fmt("n=1.4 -> %.4f deg (50.133+-0.5), n=1.9 -> %.4f deg (34.377+-0.5), 800 nm swing %.4f deg (20.053+-0.7)",
               lo, hi, swing));
}

void monotonicity() {
    const auto t0 = std::chrono::steady_clock::now();
    int violations = 0, evaluated = 0;
    for (int i = 0; i < 10000; ++i) {
        const double a = oracle::uniform(1.0, 50.0), lam = oracle::uniform(200, 1900), th = oracle::uniform(0, 90);
        const double n1 = oracle::uniform(1.01, 2.4), n2 = n1 + oracle::uniform(1e-6, 2.5 - n1);
        const double lam2 = lam + oracle::uniform(1e-3, 2000 - lam);
        try {
            const double base = refraction_angle(geom(a, n1), wave(lam, th, 1)).rad();
            if (!(refraction_angle(geom(a, n2), wave(lam, th, 1)).rad() < base)) ++violations;
            if (!(refraction_angle(geom(a, n1), wave(lam2, th, 1)).rad() > base)) ++violations;
            ++evaluated;
        } catch (const EvanescentOrder&) {
        }
    }
    const double dt = seconds_since(t0);
    report(2, "Monotonicity in n_ris and wavelength", violations == 0 && evaluated > 0 && dt < 5.0,
           fmt("%d violations over %d propagating inputs (10000 drawn), %.3f s (< 5 s)", violations, evaluated, dt));
}

void snell_reduction() {
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double n_air = oracle::uniform(1.0, 1.001), n_ris = oracle::uniform(1.0011, 2.5);
        const SteeringGeometry g{oracle::uniform(0.2, 50), 1, 1, n_air, n_ris};
        const auto w = wave(oracle::uniform(200, 2000), oracle::uniform(0, 90), 0);
        worst = std::max(worst, std::abs(refraction_angle(g, w).rad() - snell_angle(n_air, n_ris, w.incidence).rad()));
    }
    report(3, "Snell reduction for m = 0", worst <= 1e-12, fmt("max |difference| %.3g rad over 10000 inputs (<= 1e-12)", worst));
}

void diffraction_oracle() {
    // The lobe fraction reaches its ideal 0.9028 in the Fraunhofer regime, lambda_m / a <= 0.05.
    const auto w = wave(550, 0, 0);
    bool pass = true;
    std::string detail;
    for (double a : {8.0, 20.0, 40.0}) {
        const auto g = geom(a, 1.5, 1.0);
        const double ratio = a * 1000 * 1.5 / 550;
        const double phi = std::asin(1.0 / ratio);
        const double lib = pattern_power_fraction(g, w, std::tan(phi));
        const double ref = oracle::power_fraction(ratio, phi);
        const bool ok = std::abs(lib - 0.9028) <= 5e-4 && std::abs(ref - 0.9028) <= 5e-4 && std::abs(lib - ref) <= 1e-6;
        pass = pass && ok;
        detail += fmt("a=%g um: %.6f (oracle %.6f); ", a, lib, ref);
        for (int k = 1; k <= 3; ++k) {
            const double rel = fraunhofer_relative_intensity(g, w, Angle::radians(std::asin(k / ratio)));
            pass = pass && rel < 1e-10;
        }
    }
    const auto g4 = geom(4, 1.5, 1.0);
    const double r4 = 4000 * 1.5 / 550;
    detail += fmt("informational a=4 um: %.6f; nulls k=1..3 < 1e-10",
                  pattern_power_fraction(g4, w, std::tan(std::asin(1.0 / r4))));
    report(4, "Central-lobe power fraction and null placement", pass, detail);
}

void cos_law() {
    double worst = 0.0;
    int n = 0;
    for (int i = 0; i < 500; ++i) {
        const auto g = SteeringGeometry{oracle::uniform(2, 40), oracle::uniform(0.1, 3), oracle::uniform(0.01, 3), 1.0,
                                        oracle::uniform(1.3, 2.5)};
        const double lam = oracle::uniform(300, 1000);
        const double th = oracle::uniform(0, 89.99);
        try {
            const double t0 = transmittance(g, wave(lam, 0, 1)).value;
            const double t1 = transmittance(g, wave(lam, th, 1)).value;
            worst = std::max(worst, std::abs(t1 / t0 - std::cos(Angle::degrees(th).rad())));
            ++n;
        } catch (const EvanescentOrder&) {
        }
    }
    const double t90 = transmittance(geom(4, 1.5), wave(550, 90, 1)).value;
    report(5, "cos-factor law", worst <= 1e-12 && t90 == 0.0 && n > 0,
           fmt("max |T(theta)/T(0) - cos theta| %.3g over %d geometries (<= 1e-12); T(90 deg) = %g", worst, n, t90));
}

void tuning_gain_properties() {
    bool exact = true;
    for (int i = 0; i < 500; ++i) {
        const auto a = geom(oracle::uniform(2, 40), oracle::uniform(1.3, 2.5), oracle::uniform(0.1, 3), oracle::uniform(0.01, 3));
        const auto b = geom(oracle::uniform(2, 40), oracle::uniform(1.3, 2.5), oracle::uniform(0.1, 3), oracle::uniform(0.01, 3));
        const auto w = wave(oracle::uniform(300, 1000), oracle::uniform(0, 80), 0);
        exact = exact && tuning_gain(a, b, w).gain == -tuning_gain(b, a, w).gain && tuning_gain(a, a, w).gain == 0.0;
    }

    const auto s = load_scenario(fs::path(RISVLC_SCENARIO_DIR) / "fig4-bottom.json");
    std::vector<double> depths{s.geometry.depth_mm};
    for (double d : s.sweep->series->values) depths.push_back(d);
    const auto grid = make_grid(s.sweep->from, s.sweep->to, s.sweep->steps);
    std::vector<double> spread;
    bool varies = true;
    for (double lam : grid) {
        double lo = 2, hi = -1;
        for (double d : depths) {
            auto g = s.geometry;
            g.depth_mm = d;
            auto w = s.wave;
            w.wavelength = Wavelength{lam};
            const double t = transmittance(g, w).value;
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        }
        spread.push_back(hi - lo);
        if (lam <= 700 && !(hi - lo > 1e-6)) varies = false;
    }
    bool shrinking = true;
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] >= 700 && !(spread[i] < spread[i - 1])) shrinking = false;
    report(6, "Tuning-gain properties", exact && varies && shrinking,
           fmt("antisymmetry/identity exact over 500 pairs: %s; depth spread 400-700 nm non-constant: %s "
               "(spread %.4f at 400 nm); spread strictly decreasing 700-1000 nm: %s (%.4f -> %.4f)",
               exact ? "yes" : "no", varies ? "yes" : "no", spread.front(), shrinking ? "yes" : "no",
               spread[30], spread.back()));
}

void inverse_solvers() {
    int fails = 0, max_steps = 0, done = 0;
    const auto ml = metalens_she2018(geom(4, 1.6, 0.75, 1.5)).actuator;
    const Actuator lc = lc_sun2019().actuator;
    while (done < 1000) {
        const int i = done;
        DesignTarget t;
        t.wave = wave(oracle::uniform(400, 900), oracle::uniform(0, 70), 1);
        t.geometry = geom(oracle::uniform(2, 20), 1.5, oracle::uniform(0.2, 2));
        SteeringGeometry truth = t.geometry;
        double tol = 1e-9;
        std::optional<Actuator> act;
        switch (i % 3) {
        case 0:
            t.kind = TargetKind::RefractionAngle;
            t.free = FreeVariable::NRis;
            truth.n_ris = oracle::uniform(1.3, 2.4);
            break;
        case 1:
            t.kind = TargetKind::SpotWidth;
            t.free = FreeVariable::Depth;
            truth.depth_mm = oracle::uniform(0.1, 3);
            break;
        default: {
            t.kind = i % 2 ? TargetKind::PdLanding : TargetKind::RefractionAngle;
            t.free = FreeVariable::Voltage;
            act = (i / 3) % 2 ? ml : lc;
            if ((i / 3) % 2 == 0) t.geometry.n_ris = 1.508;
            const auto [lo, hi] = voltage_bracket(*act);
            truth = apply_actuator(*act, oracle::uniform(lo, hi), t.geometry);
            tol = kVoltageRelTol;
            break;
        }
        }
        try {
            t.value = target_metric(t.kind, truth, t.wave);
        } catch (const EvanescentOrder&) {
            continue;
        }
        const auto sol = solve(t, act);
        SteeringGeometry g = t.geometry;
        if (t.free == FreeVariable::NRis) g.n_ris = sol.value;
        if (t.free == FreeVariable::Depth) g.depth_mm = sol.value;
        if (t.free == FreeVariable::Voltage) g = apply_actuator(*act, sol.value, t.geometry);
        if (!(std::abs(target_metric(t.kind, g, t.wave) - t.value) <= tol * std::abs(t.value))) ++fails;
        max_steps = std::max(max_steps, sol.iterations);
        ++done;
    }
    report(7, "Inverse-solver round trips", fails == 0 && max_steps <= kMaxBisectionSteps,
           fmt("%d failures over 1000 targets (index/depth 1e-9 rel, voltage 1e-6 rel); max bisection steps %d (<= 60)",
               fails, max_steps));
}

void bench_table() {
    const auto step = Angle::degrees(0.1);
    std::map<FrontEndKind, double> reach;
    bool cos_ok = true;
    double worst_cos = 0.0;
    bool ris_ok = true;
    for (const auto& fe : table1_roster()) {
        const auto sw = rotation_sweep(fe, step);
        double last = -1;
        for (std::size_t i = 0; i < sw.angles_deg.size(); ++i)
            if (sw.detected[i]) last = sw.angles_deg[i];
        reach[fe.kind] = last;
        if (!is_ris(fe.kind)) continue;
        for (std::size_t i = 0; i < sw.angles_deg.size(); ++i) {
            const double deg = sw.angles_deg[i];
            if (deg > 89.9 + 1e-9) break;
            if (!sw.detected[i]) {
                ris_ok = false;
                continue;
            }
            const double c = std::cos(Angle::degrees(deg).rad());
            const double dev = std::abs(sw.relative_intensity[i] / sw.relative_intensity[0] - c) / c;
            worst_cos = std::max(worst_cos, dev);
        }
    }
    cos_ok = worst_cos <= 0.01;
    using K = FrontEndKind;
    const bool order = reach[K::Convex] < reach[K::Gilcpc] && reach[K::Gilcpc] < reach[K::Spherical] &&
                       reach[K::Spherical] < reach[K::Cmbbp] && reach[K::Cmbbp] < reach[K::MetalensRis] &&
                       reach[K::Cmbbp] < reach[K::LcRis] && reach[K::Convex] == 36.2 && reach[K::Gilcpc] == 40.0 &&
                       reach[K::Spherical] == 45.0 && reach[K::Cmbbp] == 85.0;
    report(8, "Receiver envelope ordering on the rotation bench", order && ris_ok && cos_ok,
           fmt("convex %.1f < gilcpc %.1f < spherical %.1f < cmbbp %.1f < metalens_ris %.1f / lc_ris %.1f deg; "
               "RIS detected through 89.9 deg: %s; max relative deviation of I/I(0) from cos theta %.3g (<= 0.01)",
               reach[K::Convex], reach[K::Gilcpc], reach[K::Spherical], reach[K::Cmbbp], reach[K::MetalensRis],
               reach[K::LcRis], ris_ok ? "yes" : "no", worst_cos));
}

std::map<std::string, std::string> csv_files(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() != ".csv") continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        out[e.path().filename().string()] = s.str();
    }
    return out;
}

void determinism() {
    const auto root = fs::temp_directory_path() / "risvlc-acceptance";
    fs::remove_all(root);
    double worst = 0.0;
    bool ran = true;
    for (const char* sub : {"a", "b"}) {
        const auto dir = root / sub;
        const std::string cmd = std::string(RISVLC_CLI_PATH) + " figures --quiet --scenarios " RISVLC_SCENARIO_DIR
                                " --out " + dir.string();
        const auto t0 = std::chrono::steady_clock::now();
        ran = ran && std::system(cmd.c_str()) == 0;
        worst = std::max(worst, seconds_since(t0));
    }
    const auto a = ran ? csv_files(root / "a") : decltype(csv_files(root)){};
    const auto b = ran ? csv_files(root / "b") : decltype(csv_files(root)){};
    const bool same = ran && !a.empty() && a == b;
    report(9, "Deterministic figure suite", same && worst < 60.0,
           fmt("%zu CSV files, byte-identical across two runs: %s; slowest run %.2f s (< 60 s)", a.size(),
               same ? "yes" : "no", worst));
}

}  // namespace

int main() {
    const std::function<void()> criteria[] = {fig2_endpoints, monotonicity,           snell_reduction,
                                              diffraction_oracle, cos_law,            tuning_gain_properties,
                                              inverse_solvers, bench_table,           determinism};
    for (int i = 0; i < 9; ++i) {
        try {
            criteria[i]();
        } catch (const std::exception& e) {
            report(i + 1, "criterion raised", false, e.what());
        }
    }
    std::printf("%d of 9 acceptance criteria passed\n", 9 - failures);
    return failures == 0 ? 0 : 1;
}
