#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace risvlc::csv {

/// Locale-independent, round-trippable (17 significant digits) number field.
inline std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string num(int v) { return std::to_string(v); }

}  // namespace risvlc::csv
