#pragma once

#include <cmath>

namespace relfun {

/// Golden-section maximization of a unimodal f on [lo, hi].
/// Returns the abscissa of the maximum to within xtol (absolute).
template <class F>
double golden_max(F&& f, double lo, double hi, double xtol = 1e-12, int max_iter = 300) {
    constexpr double invphi = 0.6180339887498948482;   // 1/phi
    constexpr double invphi2 = 0.3819660112501051518;  // 1/phi^2
    double h = hi - lo;
    if (h <= xtol) return 0.5 * (lo + hi);
    double x1 = lo + invphi2 * h;
    double x2 = lo + invphi * h;
    double f1 = f(x1);
    double f2 = f(x2);
    for (int i = 0; i < max_iter && h > xtol; ++i) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            h = hi - lo;
            x1 = lo + invphi2 * h;
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            h = hi - lo;
            x2 = lo + invphi * h;
            f2 = f(x2);
        }
    }
    return 0.5 * (lo + hi);
}

/// Golden-section minimization of a unimodal f on [lo, hi].
template <class F>
double golden_min(F&& f, double lo, double hi, double xtol = 1e-12, int max_iter = 300) {
    return golden_max([&f](double x) { return -f(x); }, lo, hi, xtol, max_iter);
}

}  // namespace relfun
