#pragma once

#include <cmath>
#include <compare>
#include <numbers>
#include <string>

#include "risvlc/error.hpp"

namespace risvlc {

/// Plane angle. Computation uses radians; the degree value an angle was
/// built from is kept so that files round-trip exactly.
class Angle {
public:
    constexpr Angle() = default;

    static constexpr Angle radians(double rad) { return Angle{rad, rad * (180.0 / std::numbers::pi)}; }
    static constexpr Angle degrees(double deg) {
        if (deg == 90.0) return Angle{std::numbers::pi / 2, 90.0};
        return Angle{deg * (std::numbers::pi / 180.0), deg};
    }

    constexpr double rad() const { return rad_; }
    constexpr double deg() const { return deg_; }

    /// cos() that returns exactly zero at a right angle.
    double cos_exact() const {
        if (rad_ == std::numbers::pi / 2) return 0.0;
        return std::cos(rad_);
    }

    constexpr bool operator==(const Angle& o) const { return rad_ == o.rad_; }
    constexpr auto operator<=>(const Angle& o) const { return rad_ <=> o.rad_; }

private:
    constexpr Angle(double rad, double deg) : rad_{rad}, deg_{deg} {}
    double rad_ = 0.0;
    double deg_ = 0.0;
};

/// Vacuum wavelength in nanometres, restricted to the UV-to-NIR guard band.
class Wavelength {
public:
    static constexpr double min_nm = 200.0;
    static constexpr double max_nm = 2000.0;

    constexpr Wavelength() = default;
    explicit Wavelength(double nm) : nm_{nm} {
        if (!(nm >= min_nm && nm <= max_nm))
            throw RangeError("wavelength " + std::to_string(nm) + " nm outside [200, 2000] nm");
    }

    constexpr double nm() const { return nm_; }
    constexpr auto operator<=>(const Wavelength&) const = default;

private:
    double nm_ = 550.0;
};

}  // namespace risvlc
