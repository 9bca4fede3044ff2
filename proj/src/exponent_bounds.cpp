#include "relfun/exponent_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "relfun/core_functions.hpp"
#include "relfun/optimize.hpp"

namespace relfun {

namespace {

void check_rate_range(double r, double cap, const char* what, bool allow_zero) {
    if (!(allow_zero ? r >= 0.0 : r > 0.0) || r > cap * (1.0 + 1e-12) + 1e-15) {
        throw std::invalid_argument(std::string(what) + ": rate outside its domain");
    }
}

/// Tangent branch A(1 - tau_R)/4 + ln(1 + 2 t_R) - R shared by both upper
/// bounds at low rates; equals A/4 at R = 0.
double tangent_branch(double r, double a) {
    if (r == 0.0) return 0.25 * a;
    const double t = t_of_rate(r);
    return 0.25 * a * (1.0 - tau_of_t(t)) + std::log1p(2.0 * t) - r;
}

double affine_branch(double r, const ChannelParams& p, const ThresholdSet& th) {
    return e_sp(th.r_crit, p) + th.r_crit - r;
}

struct InnerMax {
    double value = 0.0;
    double rho = 0.0;
};

/// max over rho in [tau_u, 1) of f(u, rho) at fixed inner rate u; f is
/// concave in rho, so golden section plus the left endpoint suffices.
InnerMax inner_max(double u, double r, double a) {
    const double t = (u == 0.0) ? 0.0 : t_of_rate(u);
    const double tau = tau_of_t(t);
    constexpr double eps = 1e-9;
    if (tau >= 1.0 - eps) {
        throw std::invalid_argument("theorem2_numeric: empty feasible correlation region");
    }
    const double scale = std::exp(2.0 * (u - r));        // e^{2(u-R)} <= 1
    const double inv_scale = std::exp(2.0 * (r - u));    // e^{2(R-u)} >= 1
    const auto f = [&](double rho) {
        return 0.25 * a * (1.0 - rho) * scale + r - 2.0 * u + j_spectrum(t, rho) +
               0.5 * std::log((1.0 + rho) / (2.0 * inv_scale + rho - 1.0));
    };
    const double rho_star = golden_max(f, tau + eps, 1.0 - eps, 1e-12);
    InnerMax best{f(rho_star), rho_star};
    // Exact left endpoint: J(t, tau_t) = ln(1 + 2t) analytically.
    const double f_tau = 0.25 * a * (1.0 - tau) * scale + r - 2.0 * u + std::log1p(2.0 * t) +
                         0.5 * std::log((1.0 + tau) / (2.0 * inv_scale + tau - 1.0));
    if (f_tau >= best.value) best = {f_tau, tau};
    return best;
}

}  // namespace

double upper_bound_t1(double r, const ChannelParams& p) {
    const ThresholdSet th = thresholds(p);
    check_rate_range(r, th.capacity, "upper_bound_t1", /*allow_zero=*/true);
    r = std::min(r, th.capacity);
    if (r <= th.r_bar1) return tangent_branch(r, p.a);
    if (r <= th.r_crit) return affine_branch(r, p, th);
    return e_sp(r, p);
}

double upper_bound_t2(double r, const ChannelParams& p) {
    const ThresholdSet th = thresholds(p);
    if (p.a <= th.a0) return upper_bound_t1(r, p);
    check_rate_range(r, th.capacity, "upper_bound_t2", /*allow_zero=*/true);
    r = std::min(r, th.capacity);
    if (r <= th.r_bar2) return tangent_branch(r, p.a);
    if (r <= th.r_bar3) {
        const double ae = th.a_const * std::exp(-2.0 * r);
        return 0.25 * p.a * ae - 0.5 * std::log(2.0 - ae) - 0.5 * std::log(th.a_const);
    }
    if (r <= th.r_crit) return affine_branch(r, p, th);
    return e_sp(r, p);
}

double lower_bound(double r, const ChannelParams& p) {
    const ThresholdSet th = thresholds(p);
    check_rate_range(r, th.capacity, "lower_bound", /*allow_zero=*/true);
    r = std::min(r, th.capacity);
    if (r <= th.r_low) {
        return 0.25 * p.a * (1.0 - std::sqrt(-std::expm1(-2.0 * r)));
    }
    if (r <= th.r_crit) return affine_branch(r, p, th);
    return e_sp(r, p);
}

SpherePackingResult sphere_packing_numeric(double r, const ChannelParams& p) {
    const double cap = capacity(p);
    if (!(r > 0.0) || !(r < cap)) {
        throw std::invalid_argument("sphere_packing_numeric: rate must lie in (0, capacity)");
    }
    const double a = p.a;
    const double w = -std::expm1(-2.0 * r);
    const double aw = a * w;
    const double g = 0.5 * (std::sqrt(aw) + std::sqrt(aw + 4.0));

    SpherePackingResult result{};
    result.solution.lambda = std::sqrt(a / w) / g;
    result.solution.r_var = g * g;
    result.solution.s_var = result.solution.r_var + a - 2.0 * a / result.solution.lambda;
    result.solution.r1 = result.solution.r_var * std::exp(-2.0 * r);

    // The objective is concave: F''(x) = -1/x^2 - sqrt(A w)/(2 x^{3/2}) < 0.
    const auto objective = [a, aw](double x) {
        return std::log(x) - x - a + 2.0 * std::sqrt(aw * x);
    };
    const double x_hat = golden_max(objective, 1e-9, a + 9.0, 1e-12);
    const double s_hat = x_hat + a - 2.0 * std::sqrt(aw * x_hat);
    result.exponent = 0.5 * (s_hat - 1.0) + r - 0.5 * std::log(x_hat);

    const double residual = std::fabs(x_hat - result.solution.r_var);
    if (residual > 1e-6 * (1.0 + result.solution.r_var)) {
        throw ConvergenceError("sphere_packing_numeric: optimizer missed the stationary radius (|" +
                               std::to_string(x_hat) + " - " +
                               std::to_string(result.solution.r_var) +
                               "| = " + std::to_string(residual) + ")");
    }
    return result;
}

double straight_line(double anchor_r, double anchor_e, double r) {
    if (r > anchor_r) {
        throw std::invalid_argument("straight_line: rate must not exceed the anchor rate");
    }
    return anchor_e + (anchor_r - r);
}

double theorem2_numeric(double r, const ChannelParams& p, Theorem2Detail* detail) {
    const double cap = capacity(p);
    check_rate_range(r, cap, "theorem2_numeric", /*allow_zero=*/false);
    r = std::min(r, cap);
    const double a = p.a;
    const ThresholdSet th = thresholds(p);

    double best_value = std::numeric_limits<double>::infinity();
    double best_u = 0.0;
    InnerMax best_inner{};
    const auto consider = [&](double u) {
        const InnerMax inner = inner_max(u, r, a);
        if (inner.value < best_value) {
            best_value = inner.value;
            best_u = u;
            best_inner = inner;
        }
    };

    constexpr int kGrid = 512;
    for (int i = 0; i <= kGrid; ++i) {
        consider(r * static_cast<double>(i) / kGrid);
    }
    if (th.r_bar2 < r) consider(th.r_bar2);

    // Refine around the best grid point (the u = 0 limit candidate needs no
    // refinement: the outer objective is monotone into it when it wins).
    if (best_u > 0.0) {
        const double h = r / kGrid;
        const double lo = std::max(0.0, best_u - h);
        const double hi = std::min(r, best_u + h);
        const double u_star =
            golden_min([&](double u) { return inner_max(u, r, a).value; }, lo, hi, 1e-10);
        consider(u_star);
    }

    if (detail != nullptr) {
        detail->value = best_value;
        detail->u_opt = best_u;
        detail->rho_opt = best_inner.rho;
    }
    return best_value;
}

double c_of_v(double v, const ChannelParams& p) {
    if (!(p.a > 0.0)) throw std::invalid_argument("c_of_v: A must be positive");
    if (!(v > 0.0) || v > 1.0) throw std::invalid_argument("c_of_v: v must lie in (0, 1]");
    return 0.25 * p.a * v - 0.5 * std::log(v * (2.0 - v));
}

double v_of_r(double u, double outer_r) {
    if (u > outer_r) throw std::invalid_argument("v_of_r: inner rate must not exceed outer rate");
    if (u < 0.0) throw std::invalid_argument("v_of_r: inner rate must be nonnegative");
    return (1.0 - tau_of_t(t_of_rate(u))) * std::exp(2.0 * (u - outer_r));
}

double v1(const ChannelParams& p) {
    if (!(p.a > 0.0)) throw std::invalid_argument("v1: A must be positive");
    return 4.0 / (p.a + 2.0 + std::sqrt(p.a * p.a + 4.0));
}

double f2(double u) {
    if (u < 0.0) throw std::invalid_argument("f2: rate must be nonnegative");
    return 2.0 * u + std::log1p(-tau_of_t(t_of_rate(u)));
}

BoundCurve sample_curve(BoundKind kind, const ChannelParams& p, double rmin, double rmax,
                        int points) {
    if (points < 2) throw std::invalid_argument("sample_curve: need at least 2 grid points");
    if (!(rmin >= 0.0) || !(rmax > rmin)) {
        throw std::invalid_argument("sample_curve: need 0 <= rmin < rmax");
    }
    const ThresholdSet th = thresholds(p);
    const double exact_lo = (p.a > th.a0) ? th.r_bar3 : th.r_bar1;
    BoundCurve curve;
    curve.channel = p;
    curve.kind = kind;
    curve.rates.reserve(points);
    curve.values.reserve(points);
    for (int i = 0; i < points; ++i) {
        const double r =
            (i == points - 1) ? rmax : rmin + (rmax - rmin) * static_cast<double>(i) / (points - 1);
        double value = 0.0;
        switch (kind) {
            case BoundKind::SpherePackingClosed:
                value = e_sp(r, p);
                break;
            case BoundKind::SpherePackingNumeric:
                value = sphere_packing_numeric(r, p).exponent;
                break;
            case BoundKind::UpperT1:
                value = upper_bound_t1(r, p);
                break;
            case BoundKind::UpperT2:
                value = upper_bound_t2(r, p);
                break;
            case BoundKind::LowerClassical:
                value = lower_bound(r, p);
                break;
            case BoundKind::StraightLine:
                value = (r <= th.r_crit) ? straight_line(th.r_crit, e_sp(th.r_crit, p), r)
                                         : e_sp(r, p);
                break;
            case BoundKind::Exact:
                if (r < exact_lo - 1e-12) {
                    throw std::invalid_argument(
                        "sample_curve: exact values are only established at high rates");
                }
                value = upper_bound_t2(r, p);
                break;
        }
        if (value < 0.0 && value >= -1e-12) value = 0.0;
        curve.rates.push_back(r);
        curve.values.push_back(value);
    }
    return curve;
}

}  // namespace relfun
