#pragma once

#include <cmath>
#include <utility>

#include "relfun/types.hpp"

namespace relfun {

/// Bisection on [lo, hi] for a continuous f with f(lo) and f(hi) of opposite
/// sign. Converges to |hi - lo| <= xtol or |f| <= ftol. Throws
/// ConvergenceError if the bracket is invalid or the iteration cap is hit.
template <class F>
double bisect(F&& f, double lo, double hi, double xtol = 1e-15, double ftol = 0.0,
              int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi)) {
        throw ConvergenceError("bisect: endpoints do not bracket a root");
    }
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if (fmid == 0.0 || (ftol > 0.0 && std::fabs(fmid) <= ftol)) return mid;
        if (std::signbit(fmid) == std::signbit(flo)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
        if (hi - lo <= xtol * (1.0 + std::fabs(lo) + std::fabs(hi))) {
            return 0.5 * (lo + hi);
        }
    }
    throw ConvergenceError("bisect: iteration limit reached");
}

/// Newton iteration with bisection fallback inside a bracketing interval.
/// f must return {value, derivative} and be increasing through the root
/// (f(lo) < 0 < f(hi)); negate at the call site otherwise. Steps leaving the
/// bracket fall back to its midpoint.
template <class F>
double newton_bracketed(F&& f, double x0, double lo, double hi, double xtol = 1e-15,
                        int max_iter = 100) {
    double x = x0;
    for (int i = 0; i < max_iter; ++i) {
        auto [v, d] = f(x);
        if (v == 0.0) return x;
        if (v < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        double step = (d != 0.0) ? v / d : 0.0;
        double xn = x - step;
        if (!(xn > lo && xn < hi) || step == 0.0) xn = 0.5 * (lo + hi);
        if (std::fabs(xn - x) <= xtol * (1.0 + std::fabs(x))) return xn;
        x = xn;
    }
    throw ConvergenceError("newton_bracketed: iteration limit reached");
}

}  // namespace relfun
