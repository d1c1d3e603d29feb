#pragma once

#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "risvlc/error.hpp"

namespace risvlc {

struct QuadratureOptions {
    double abs_tol = 1e-9;
    double rel_tol = 1e-10;
    unsigned max_depth = 18;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

namespace detail {

// One 15-point Gauss-Kronrod panel; recursion splits it until the local error
// meets its share of the absolute budget (or the relative tolerance).
template <class F>
void gk_adapt(F& f, double lo, double hi, double abs_budget, double rel_tol, unsigned depth,
              QuadratureResult& acc, bool& exhausted) {
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, lo, hi, 0, 0.0, &err);
    if (err <= abs_budget || err <= rel_tol * std::abs(v)) {
        acc.value += v;
        acc.error += err;
        return;
    }
    if (depth == 0) {
        exhausted = true;
        acc.value += v;
        acc.error += err;
        return;
    }
    const double mid = 0.5 * (lo + hi);
    gk_adapt(f, lo, mid, abs_budget / 2, rel_tol, depth - 1, acc, exhausted);
    gk_adapt(f, mid, hi, abs_budget / 2, rel_tol, depth - 1, acc, exhausted);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (15 points) on [lo, hi]. Throws QuadratureFailure
/// when a panel is still above tolerance after max_depth bisections.
template <class F>
QuadratureResult integrate(F&& f, double lo, double hi, const QuadratureOptions& opt = {}) {
    QuadratureResult acc;
    if (hi == lo) return acc;
    bool exhausted = false;
    detail::gk_adapt(f, lo, hi, opt.abs_tol, opt.rel_tol, opt.max_depth, acc, exhausted);
    if (exhausted || !std::isfinite(acc.value))
        throw QuadratureFailure("quadrature on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                "] did not converge: error estimate " + std::to_string(acc.error));
    return acc;
}

}  // namespace risvlc
