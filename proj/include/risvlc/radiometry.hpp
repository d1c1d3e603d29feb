#pragma once

#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "risvlc/csv.hpp"
#include "risvlc/diffraction.hpp"
#include "risvlc/parallel.hpp"

namespace risvlc {

/// PD-captured power over slit-incident power.
struct TransmittanceResult {
    double value = 0.0;
    double incidence_factor = 1.0;  // cos(theta_a)
    double captured_power_w = 0.0;
};

struct TuningGain {
    TransmittanceResult before;
    TransmittanceResult after;
    double gain = 0.0;  // after.value - before.value
};

/// T = cos(theta_a) * (fraction of the pattern landing on the PD aperture).
/// The aperture is taken centred on the steered pattern, so T depends on the
/// incidence angle only through the projection factor.
inline TransmittanceResult transmittance(const SteeringGeometry& geom, const IncidentWave& wave,
                                         const QuadratureOptions& opt = {}) {
    (void)refraction_angle(geom, wave);
    TransmittanceResult r;
    r.incidence_factor = wave.incidence.cos_exact();
    const double capture = pattern_power_fraction(geom, wave, geom.pd_length_mm / 2, opt);
    r.value = std::clamp(r.incidence_factor * capture, 0.0, 1.0);
    r.captured_power_w = r.value * wave.power_w;
    return r;
}

inline TuningGain tuning_gain(const SteeringGeometry& before, const SteeringGeometry& after,
                              const IncidentWave& wave, const QuadratureOptions& opt = {}) {
    auto eval = [&](const SteeringGeometry& g, const char* state) {
        try {
            return transmittance(g, wave, opt);
        } catch (const Error& e) {
            throw Error(e.kind(), std::string(state) + " state: " + e.what());
        }
    };
    TuningGain t;
    t.before = eval(before, "before");
    t.after = eval(after, "after");
    t.gain = t.after.value - t.before.value;
    return t;
}

enum class GridSpacing { Linear, Log };

/// Inclusive grid of `steps` points between lo and hi.
inline std::vector<double> make_grid(double lo, double hi, int steps, GridSpacing spacing = GridSpacing::Linear) {
    if (steps < 2) throw RangeError("a sweep needs at least 2 steps");
    std::vector<double> out(steps);
    for (int i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) / (steps - 1);
        if (spacing == GridSpacing::Log)
            out[i] = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
        else
            out[i] = lo + t * (hi - lo);
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

struct SweepPoint {
    double wavelength_nm = 0.0;
    std::optional<TransmittanceResult> result;
    std::optional<ErrorKind> error;  // set instead of result when this point failed
};

inline std::vector<SweepPoint> wavelength_sweep(const SteeringGeometry& geom, const IncidentWave& wave_template,
                                                double lambda_min_nm, double lambda_max_nm, int steps,
                                                GridSpacing spacing = GridSpacing::Linear,
                                                const QuadratureOptions& opt = {}) {
    if (!(lambda_min_nm >= Wavelength::min_nm && lambda_max_nm <= Wavelength::max_nm &&
          lambda_min_nm <= lambda_max_nm))
        throw RangeError("sweep band must lie within [200, 2000] nm");
    const auto grid = make_grid(lambda_min_nm, lambda_max_nm, steps, spacing);
    std::vector<SweepPoint> out(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        out[i].wavelength_nm = grid[i];
        try {
            IncidentWave w = wave_template;
            w.wavelength = Wavelength{grid[i]};
            out[i].result = transmittance(geom, w, opt);
        } catch (const Error& e) {
            out[i].error = e.kind();
        }
    });
    return out;
}

inline void write_csv(std::ostream& os, const std::vector<SweepPoint>& sweep) {
    os << "wavelength_nm,transmittance,incidence_factor,captured_power_w\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& p : sweep) {
        const auto& r = p.result;
        os << csv::num(p.wavelength_nm) << ',' << csv::num(r ? r->value : nan) << ','
           << csv::num(r ? r->incidence_factor : nan) << ',' << csv::num(r ? r->captured_power_w : nan) << '\n';
    }
}

}  // namespace risvlc
