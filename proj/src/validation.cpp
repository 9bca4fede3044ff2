#include "relfun/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "relfun/code_lab.hpp"
#include "relfun/core_functions.hpp"
#include "relfun/exponent_bounds.hpp"
#include "relfun/optimize.hpp"
#include "relfun/rng.hpp"
#include "relfun/rootfind.hpp"
#include "relfun/spectrum_bounds.hpp"
#include "relfun/sphere_geometry.hpp"

namespace relfun {

namespace {

/// Accumulates check outcomes with two conventions:
///   identity: residual is a worst absolute error, pass iff residual <= tol;
///   margin:   residual is a worst slack, pass iff residual > tol.
struct Suite {
    std::vector<CheckResult> out;

    void identity(std::string name, double residual, double tol) {
        const bool ok = std::isfinite(residual) && residual <= tol;
        out.push_back({std::move(name), ok, residual, tol});
    }
    void margin(std::string name, double worst, double floor_value = 0.0) {
        const bool ok = std::isfinite(worst) && worst > floor_value;
        out.push_back({std::move(name), ok, worst, floor_value});
    }
    void violations(std::string name, double count) {
        out.push_back({std::move(name), count == 0.0, count, 0.0});
    }
};

[[nodiscard]] std::vector<double> lin_grid(double lo, double hi, int points) {
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) {
        g[i] = (i == points - 1) ? hi : lo + (hi - lo) * i / (points - 1);
    }
    return g;
}

[[nodiscard]] std::vector<double> log_grid(double lo, double hi, int points) {
    std::vector<double> g(points);
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (int i = 0; i < points; ++i) {
        g[i] = (i == points - 1) ? hi : std::exp(llo + (lhi - llo) * i / (points - 1));
    }
    return g;
}

constexpr double kPiLocal = 3.14159265358979323846;

/// ln of the boundary-sphere area |S^{n-2}| = (n-1) pi^{(n-1)/2} / Gamma((n+1)/2).
[[nodiscard]] double subsphere_area_log(int n) {
    return std::log(n - 1.0) + 0.5 * (n - 1.0) * std::log(kPiLocal) -
           std::lgamma((n + 1.0) / 2.0);
}

/// SNRs exercising both the merged (A <= a0) and separated (A > a0) regimes.
const std::vector<double> kSnrSet = {0.5, 1.0, 2.288, 4.0, 10.0, 50.0};

/// Second upper bound, middle branch, evaluated directly from the universal
/// branch constant (used to probe junction continuity from both sides).
[[nodiscard]] double curved_branch_t2(double r, const ChannelParams& p, const ThresholdSet& th) {
    const double ae = th.a_const * std::exp(-2.0 * r);
    return p.a * ae / 4.0 - 0.5 * std::log(2.0 - ae) - 0.5 * std::log(th.a_const);
}

[[nodiscard]] double max_pairwise_cosine(const SphericalCode& code) {
    double mu = -1.0;
    const double an = code.a * code.n;
    for (int i = 0; i < code.m; ++i) {
        for (int j = i + 1; j < code.m; ++j) {
            double dot = 0.0;
            for (int k = 0; k < code.n; ++k) {
                dot += code.row(i)[k] * code.row(j)[k];
            }
            mu = std::max(mu, dot / an);
        }
    }
    return mu;
}

void check_core(Suite& s, double perturb) {
    // Rate parametrization round trip R(t_of_rate(R)) = R.
    {
        double worst = 0.0;
        for (double r : lin_grid(0.0, 5.0, 101)) {
            worst = std::max(worst, std::abs(rate_of_t(t_of_rate(r)) - r));
        }
        s.identity("core/rate-inverse-roundtrip", worst, 1e-10);
    }
    // tau(t) strictly increasing from 0 toward (but never reaching) 1.
    {
        double worst = 1.0;
        double prev = tau_of_t(0.0);
        worst = std::min(worst, 1.0 - prev);
        for (double t : lin_grid(0.1, 50.0, 500)) {
            const double cur = tau_of_t(t);
            worst = std::min({worst, cur - prev, 1.0 - cur});
            prev = cur;
        }
        s.margin("core/tau-monotone-range", worst);
    }
    // The auxiliary derivative function has exactly one sign change, with the
    // bracketing signs D(0.01) < 0 < D(1).
    {
        double bad = 0.0;
        if (d_sign_changes() != 1) bad += 1.0;
        if (!(d_of_t(0.01) < 0.0)) bad += 1.0;
        if (!(d_of_t(1.0) > 0.0)) bad += 1.0;
        s.violations("core/d-unique-root", bad);
    }
    // Defining equations of the universal constants.
    {
        const ThresholdSet u = thresholds(ChannelParams{1.0});
        const ThresholdSet at_a0 = thresholds(ChannelParams{u.a0});
        const double worst = std::max({std::abs(d_of_t(u.t_bar2)),
                                       std::abs(rate_of_t(u.t_bar2) - u.r_bar2),
                                       std::abs(tau_of_t(u.t_bar2) - u.tau_bar2),
                                       std::abs(at_a0.r_bar1 - u.r_bar2)});
        s.identity("core/universal-root-quality", worst, 1e-9);
    }
    // 0 < R_low < R_crit < C across the whole SNR range.
    {
        double worst = 1.0;
        for (double a : log_grid(0.01, 100.0, 60)) {
            const ThresholdSet th = thresholds(ChannelParams{a});
            worst = std::min({worst, th.r_low, th.r_crit - th.r_low, th.capacity - th.r_crit});
        }
        s.margin("core/threshold-window", worst);
    }
    // exp(-2 R_crit) = 1 - tau_bar1 = 4/(A+2+sqrt(A^2+4)), two closed forms.
    {
        double worst = 0.0;
        for (double a : log_grid(0.01, 100.0, 60)) {
            const ChannelParams p{a};
            const ThresholdSet th = thresholds(p);
            const double lhs = std::exp(-2.0 * th.r_crit);
            worst = std::max({worst, std::abs(lhs - (1.0 - th.tau_bar1)),
                              std::abs(lhs - v1(p))});
        }
        s.identity("core/rcrit-correlation-identity", worst, 1e-10);
    }
    // 1 + 2 t_bar1 = sqrt(A/(4 tau_bar1)).
    {
        double worst = 0.0;
        for (double a : log_grid(0.01, 100.0, 60)) {
            const ThresholdSet th = thresholds(ChannelParams{a});
            worst = std::max(worst,
                             std::abs(1.0 + 2.0 * th.t_bar1 - std::sqrt(a / (4.0 * th.tau_bar1))));
        }
        s.identity("core/tbar1-junction-parameters", worst, 1e-10);
    }
    // Junction identity E_sp(R_crit) + R_crit = A(1-tau_bar1)/4 + ln(1+2 t_bar1).
    // `perturb` scales tau_bar1 and t_bar1 as a negative control.
    {
        double worst = 0.0;
        for (double a : log_grid(0.01, 100.0, 60)) {
            const ChannelParams p{a};
            const ThresholdSet th = thresholds(p);
            const double tau_p = th.tau_bar1 * (1.0 + perturb);
            const double t_p = th.t_bar1 * (1.0 + perturb);
            const double lhs = e_sp(th.r_crit, p) + th.r_crit;
            const double rhs = a * (1.0 - tau_p) / 4.0 + std::log1p(2.0 * t_p);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        s.identity("core/junction-identity", worst, 1e-9);
    }
    // Threshold ordering r_bar2 < r_bar3 < r_bar1 < r_crit for A > a0, and the
    // lower-bound junction sits below the start of the exactness region.
    {
        const double a0 = thresholds(ChannelParams{1.0}).a0;
        double worst = 1.0;
        for (int i = 1; i <= 50; ++i) {
            const double a = a0 + (100.0 - a0) * i / 50.0;
            const ThresholdSet th = thresholds(ChannelParams{a});
            worst = std::min({worst, th.r_bar3 - th.r_bar2, th.r_bar1 - th.r_bar3,
                              th.r_crit - th.r_bar1, th.r_bar3 - th.r_low});
        }
        s.margin("core/ordering-chain", worst);
    }
    // R_low crosses r_bar2 once: below it for a0 < A < A_x, above for A > A_x.
    {
        const ThresholdSet u = thresholds(ChannelParams{1.0});
        const double a_x = bisect(
            [&](double a) { return thresholds(ChannelParams{a}).r_low - u.r_bar2; }, 3.0, 5.0);
        double bad = 0.0;
        if (!(a_x > u.a0)) bad += 1.0;
        for (double a : lin_grid(u.a0 + 1e-3, a_x - 1e-3, 20)) {
            if (!(thresholds(ChannelParams{a}).r_low < u.r_bar2)) bad += 1.0;
        }
        for (double a : lin_grid(a_x + 1e-3, 100.0, 20)) {
            if (!(thresholds(ChannelParams{a}).r_low > u.r_bar2)) bad += 1.0;
        }
        s.violations("core/lower-junction-crossover", bad);
    }
    // Spectrum transform boundary values J(t_R, tau_R) = ln(1+2 t_R) and
    // J(t_R, 1) = R.
    {
        double worst = 0.0;
        for (double r : lin_grid(0.05, 2.0, 50)) {
            const double t = t_of_rate(r);
            const double tau = tau_of_t(t);
            worst = std::max({worst, std::abs(j_spectrum(t, tau) - std::log1p(2.0 * t)),
                              std::abs(j_spectrum(t, 1.0) - r)});
        }
        s.identity("core/j-boundary-values", worst, 1e-9);
    }
    // Analytic partials of J against central finite differences.
    {
        double worst = 0.0;
        const double h = 1e-6;
        for (double t : {0.05, 0.1, 0.3, 0.7, 1.5}) {
            // Keep the grid strictly inside (tau(t), 1); the window shrinks
            // as tau(t) -> 1 for large t, and the lower margin stays well
            // clear of the square-root singularity of J at rho = tau(t),
            // where the finite-difference truncation error blows up.
            const double tau = tau_of_t(t);
            for (double rho : lin_grid(tau + 0.2 * (1.0 - tau), 1.0 - 0.05 * (1.0 - tau), 5)) {
                const double fd_rho = (j_spectrum(t, rho + h) - j_spectrum(t, rho - h)) / (2 * h);
                const double fd_t = (j_spectrum(t + h, rho) - j_spectrum(t - h, rho)) / (2 * h);
                worst = std::max({worst, std::abs(j_partial_rho(t, rho) - fd_rho),
                                  std::abs(j_partial_t(t, rho) - fd_t)});
            }
        }
        s.identity("core/j-partials-match-fd", worst, 1e-6);
    }
    // R(t) - J(t, rho) increases in t wherever rho stays above tau(t).
    {
        double worst = 1.0;
        for (double rho : {0.5, 0.8, 0.95}) {
            // Largest t with tau(t) < rho: tau^{-1}(rho).
            const double t_max =
                bisect([&](double t) { return tau_of_t(t) - rho; }, 1e-8, 50.0);
            double prev = rate_of_t(1e-4) - j_spectrum(1e-4, rho);
            for (double t : lin_grid(0.002, 0.95 * t_max, 40)) {
                const double cur = rate_of_t(t) - j_spectrum(t, rho);
                worst = std::min(worst, cur - prev);
                prev = cur;
            }
        }
        s.margin("core/rate-dominates-j", worst);
    }
    // J concave in rho: second differences nonpositive.
    {
        double worst = 0.0;
        for (double t : {0.05, 0.3, 1.0}) {
            const double tau = tau_of_t(t);
            const auto g = lin_grid(tau + 1e-6, 0.999, 101);
            for (std::size_t i = 1; i + 1 < g.size(); ++i) {
                const double second = j_spectrum(t, g[i - 1]) + j_spectrum(t, g[i + 1]) -
                                      2.0 * j_spectrum(t, g[i]);
                worst = std::max(worst, second);
            }
        }
        s.identity("core/j-concavity-in-rho", worst, 1e-8);
    }
}

void check_exponents(Suite& s) {
    // Branch agreement at every junction, from public evaluations only.
    {
        double worst = 0.0;
        for (double a : kSnrSet) {
            const ChannelParams p{a};
            const ThresholdSet th = thresholds(p);
            const double anchor = e_sp(th.r_crit, p);
            worst = std::max(
                {worst,
                 std::abs(upper_bound_t1(th.r_bar1, p) -
                          straight_line(th.r_crit, anchor, th.r_bar1)),
                 std::abs(upper_bound_t1(th.r_crit, p) - anchor),
                 std::abs(lower_bound(th.r_low, p) - straight_line(th.r_crit, anchor, th.r_low))});
            if (a > th.a0) {
                worst = std::max(
                    {worst,
                     std::abs(upper_bound_t2(th.r_bar2, p) - curved_branch_t2(th.r_bar2, p, th)),
                     std::abs(curved_branch_t2(th.r_bar3, p, th) -
                              straight_line(th.r_crit, anchor, th.r_bar3))});
            }
        }
        s.identity("exp/junction-continuity", worst, 1e-9);
    }
    // Exact endpoint values at R = 0 and R = C.
    {
        double worst = 0.0;
        for (double a : kSnrSet) {
            const ChannelParams p{a};
            const double c = capacity(p);
            worst = std::max({worst, std::abs(upper_bound_t1(0.0, p) - a / 4.0),
                              std::abs(upper_bound_t2(0.0, p) - a / 4.0),
                              std::abs(lower_bound(0.0, p) - a / 4.0),
                              std::abs(upper_bound_t1(c, p)), std::abs(upper_bound_t2(c, p)),
                              std::abs(lower_bound(c, p)), std::abs(e_sp(c, p))});
        }
        s.identity("exp/endpoints-exact", worst, 1e-12);
    }
    // The R -> 0+ limit of every bound converges to the R = 0 value A/4.
    // The approach is O(tau_R) with a coefficient proportional to A, so the
    // residual is measured relative to the limit value.
    {
        double worst = 0.0;
        for (double a : kSnrSet) {
            const ChannelParams p{a};
            const double scale = a / 4.0;
            worst = std::max({worst, std::abs(upper_bound_t1(1e-8, p) - scale) / scale,
                              std::abs(upper_bound_t2(1e-8, p) - scale) / scale,
                              std::abs(lower_bound(1e-8, p) - scale) / scale});
        }
        s.identity("exp/endpoint-limit-r0", worst, 1e-3);
    }
    // lower <= min(upper_t1, upper_t2) everywhere.
    {
        double worst = 0.0;
        for (double a : kSnrSet) {
            const ChannelParams p{a};
            const double c = capacity(p);
            for (int i = 1; i <= 101; ++i) {
                const double r = c * i / 101.0;
                const double up = std::min(upper_bound_t1(r, p), upper_bound_t2(r, p));
                worst = std::max(worst, lower_bound(r, p) - up);
            }
        }
        s.identity("exp/sandwich", worst, 1e-9);
    }
    // Upper and lower bounds coincide on the exactness region:
    // [r_bar1, C] always, and already from r_bar3 once A > a0.
    {
        double worst = 0.0;
        for (double a : kSnrSet) {
            const ChannelParams p{a};
            const ThresholdSet th = thresholds(p);
            for (double r : lin_grid(th.r_bar1, th.capacity, 50)) {
                worst = std::max(worst, std::abs(upper_bound_t1(r, p) - lower_bound(r, p)));
            }
            if (a > th.a0) {
                for (double r : lin_grid(th.r_bar3, th.capacity, 50)) {
                    worst = std::max(worst, std::abs(upper_bound_t2(r, p) - lower_bound(r, p)));
                }
            }
        }
        s.identity("exp/exactness-regions", worst, 1e-9);
    }
    // Every bound is nonincreasing in R.
    {
        double worst = 0.0;
        for (double a : kSnrSet) {
            const ChannelParams p{a};
            const auto grid = lin_grid(0.0, capacity(p), 201);
            for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
                worst = std::max({worst, upper_bound_t1(grid[i + 1], p) - upper_bound_t1(grid[i], p),
                                  upper_bound_t2(grid[i + 1], p) - upper_bound_t2(grid[i], p),
                                  lower_bound(grid[i + 1], p) - lower_bound(grid[i], p)});
            }
        }
        s.identity("exp/monotone-nonincreasing", worst, 1e-12);
    }
    // Sphere-packing exponent is convex in R.
    {
        double worst = 0.0;
        for (double a : kSnrSet) {
            const ChannelParams p{a};
            const double c = capacity(p);
            const auto grid = lin_grid(0.01 * c, c, 101);
            for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
                const double second =
                    e_sp(grid[i - 1], p) + e_sp(grid[i + 1], p) - 2.0 * e_sp(grid[i], p);
                worst = std::min(worst, second);
            }
        }
        s.margin("exp/esp-convex", worst, -1e-8);
    }
    // The junction gap r_crit - r_bar1 peaks at ~0.06866 near A ~= 2.288, and
    // the peak value equals -(r_bar2 + ln(1-tau_bar2)/2) exactly.
    {
        const GapMaximum gm = max_junction_gap();
        const ThresholdSet u = thresholds(ChannelParams{1.0});
        s.identity("exp/gap-maximum-value", std::abs(gm.max_gap - 0.06866), 1e-4);
        s.identity("exp/gap-maximum-argmax", std::abs(gm.a_argmax - 2.288), 2e-3);
        s.identity("exp/gap-equals-universal-constant",
                   std::abs(gm.max_gap + u.r_bar2 + 0.5 * std::log1p(-u.tau_bar2)), 1e-6);
    }
    // The min-max evaluation never exceeds the first upper bound.
    {
        double worst = 0.0;
        for (double a : {1.0, 2.5, 4.0, 10.0}) {
            const ChannelParams p{a};
            const double c = capacity(p);
            for (int i = 1; i <= 20; ++i) {
                const double r = c * i / 20.0 * 0.999;
                worst = std::max(worst, theorem2_numeric(r, p) - upper_bound_t1(r, p));
            }
        }
        s.identity("exp/minmax-not-above-first", worst, 1e-5);
    }
    // The min-max evaluation reproduces the refined piecewise bound.
    {
        double worst = 0.0;
        for (double a : {4.0, 10.0}) {
            const ChannelParams p{a};
            const ThresholdSet th = thresholds(p);
            for (double r : lin_grid(0.05 * th.r_crit, th.r_crit, 12)) {
                worst = std::max(worst, std::abs(theorem2_numeric(r, p) - upper_bound_t2(r, p)));
            }
        }
        s.identity("exp/minmax-matches-piecewise", worst, 1e-5);
    }
    // C(v1) = E_sp(R_crit) + R_crit and v1 = exp(-2 R_crit).
    {
        double worst = 0.0;
        for (double a : {1.0, 2.5, 4.0, 10.0}) {
            const ChannelParams p{a};
            const double rc = r_crit(p);
            worst = std::max({worst, std::abs(c_of_v(v1(p), p) - (e_sp(rc, p) + rc)),
                              std::abs(v1(p) - std::exp(-2.0 * rc))});
        }
        s.identity("exp/cv-identity", worst, 1e-9);
    }
    // f2 attains its minimum at r_bar2.
    {
        const double r2 = thresholds(ChannelParams{1.0}).r_bar2;
        const double h = 1e-3;
        const double worst =
            std::min(f2(r2 - h) - f2(r2), f2(r2 + h) - f2(r2));
        s.margin("exp/f2-minimum-at-rbar2", worst);
    }
    // Numeric sphere-packing optimizer: matches the closed form, satisfies the
    // multiplier quadratic (1-e^{-2R}) l^2 + A (1-e^{-2R}) l - A = 0, and the
    // constraint surface r1 = r_var e^{-2R} with
    // s_var - (r_var - A - s_var)^2/(4A) = r1.
    {
        double worst = 0.0;
        for (double a : {1.0, 4.0, 10.0}) {
            const ChannelParams p{a};
            const double c = capacity(p);
            for (double frac : {0.2, 0.45, 0.7, 0.9}) {
                const double r = frac * c;
                const SpherePackingResult res = sphere_packing_numeric(r, p);
                const double w = -std::expm1(-2.0 * r);
                const double l = res.solution.lambda;
                const double quad = (w * l * l + a * w * l - a) / (1.0 + a);
                const double cons = res.solution.s_var -
                                    std::pow(res.solution.r_var - a - res.solution.s_var, 2) /
                                        (4.0 * a) -
                                    res.solution.r1;
                worst = std::max({worst, std::abs(res.exponent - e_sp(r, p)), std::abs(quad),
                                  std::abs(res.solution.r1 -
                                           res.solution.r_var * std::exp(-2.0 * r)),
                                  std::abs(cons)});
            }
        }
        s.identity("exp/sphere-packing-stationarity", worst, 1e-6);
    }
    // Feasibility predicate equivalence behind the min-max reduction: with
    // z = v(u)/2, the multiplier window 2/(A+2+sqrt(A^2+4)) <= z is the same
    // condition as f2(u) >= 2R - 2 R_crit, and the upper window edge
    // z <= (A+2+sqrt(A^2+4))/(2A) always holds.
    {
        double bad = 0.0;
        double worst_upper = 1.0;
        for (double a : {4.0, 10.0}) {
            const ChannelParams p{a};
            const double rc = r_crit(p);
            const double lo_edge = v1(p) / 2.0;
            const double hi_edge = 2.0 / (a * v1(p));  // (A+2+sqrt(A^2+4))/(2A)
            for (double r : lin_grid(0.05 * capacity(p), 0.95 * capacity(p), 10)) {
                for (double u : lin_grid(0.0, r, 10)) {
                    const double z = v_of_r(u, r) / 2.0;
                    const double gap = f2(u) - (2.0 * r - 2.0 * rc);
                    if (std::abs(gap) > 1e-12) {
                        const bool p1 = z >= lo_edge;
                        const bool p2 = gap >= 0.0;
                        if (p1 != p2) bad += 1.0;
                    }
                    worst_upper = std::min(worst_upper, hi_edge - z);
                }
            }
        }
        s.violations("exp/multiplier-window-equivalence", bad);
        s.margin("exp/multiplier-window-upper-edge", worst_upper);
    }
}

void check_spectrum(Suite& s) {
    // The cap-projection bound with inner rate = outer rate reduces exactly
    // to the direct bound.
    {
        double worst = 0.0;
        for (double r : {0.1, 0.25, 0.5, 1.0}) {
            const double tau = tau_of_t(t_of_rate(r));
            for (double rho : lin_grid(tau, 0.95, 8)) {
                const T4Bound tb = b_lower_t4(r, r, rho);
                worst = std::max({worst, std::abs(tb.bound - b_lower_t3(r, rho)),
                                  std::abs(tb.rho - rho)});
            }
        }
        s.identity("spec/projection-reduces-to-direct", worst, 0.0);
    }
    // Envelopes vanish at rho = 1 and never exceed the code rate.
    {
        double worst = 0.0;
        for (double r : {0.2, 0.5, 1.0}) {
            const SpectrumEnvelope e3 = envelope_t3(r);
            const SpectrumEnvelope e4 = envelope_t4(r, 0.7 * r);
            worst = std::max({worst, std::abs(e3.eval(1.0)), std::abs(e4.eval(1.0))});
            for (double rho : lin_grid(e3.support_lo, 1.0, 20)) {
                worst = std::max(worst, e3.eval(rho) - r);
            }
        }
        s.identity("spec/envelope-boundary-values", worst, 1e-9);
    }
    // Projecting through a smaller cap can only sharpen the additive
    // exponent: min over inner rates of the projected objective is strictly
    // below the direct objective in the separation window.
    {
        double worst = 1.0;
        for (double a : {4.0, 10.0}) {
            const ChannelParams p{a};
            const ThresholdSet th = thresholds(p);
            const double r = 0.5 * (th.r_bar2 + th.r_bar3);
            const double direct = rho0_argmax(p, envelope_t3(r)).value;
            double best = direct;
            for (double u : lin_grid(th.r_bar2, r, 11)) {
                best = std::min(best, rho0_argmax(p, envelope_t4(r, u)).value);
            }
            worst = std::min(worst, direct - best);
        }
        s.margin("spec/projection-improves-additive-exponent", worst);
    }
    // First-order optimality of the additive-exponent maximizer: either the
    // stationarity condition J'_rho = A/4 holds at an interior rho0, or rho0
    // sits at the support edge with the objective one-sidedly decreasing.
    {
        double worst = 0.0;
        const ChannelParams p{4.0};
        for (double r : {0.3, 0.7}) {
            const SpectrumEnvelope env = envelope_t3(r);
            const AdditiveExponent add = rho0_argmax(p, env);
            const double t = t_of_rate(r);
            if (add.rho0 > env.support_lo + 1e-7) {
                worst = std::max(worst, std::abs(j_partial_rho(t, add.rho0) - p.a / 4.0));
            } else {
                // Edge case: derivative of A(1-rho)/4 - env must be <= 0.
                const double h = 1e-6;
                const double g0 = p.a * (1.0 - add.rho0) / 4.0 - env.eval(add.rho0);
                const double g1 = p.a * (1.0 - add.rho0 - h) / 4.0 - env.eval(add.rho0 + h);
                worst = std::max(worst, (g1 - g0) / h);
            }
        }
        s.identity("spec/rho0-stationarity", worst, 1e-5);
    }
}

void check_geometry(Suite& s) {
    // Residual-radius identity z(s(rho0), r(rho0), rho) =
    // 1 + A(1+rho0)(rho-rho0)/(2(1+rho)), and z = 1 at rho = rho0.
    {
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const double a = 0.1 + 9.9 * rng::uniform(99, 0, i, 0);
            const double rho0 = -0.5 + 1.499 * rng::uniform(99, 0, i, 1);
            const double rho = -0.5 + 1.499 * rng::uniform(99, 0, i, 2);
            const ChannelParams p{a};
            const auto [sv, rv] = opt_sr(rho0, p);
            const double expect = 1.0 + a * (1.0 + rho0) * (rho - rho0) / (2.0 * (1.0 + rho));
            worst = std::max({worst, std::abs(z_of(sv, rv, rho, p) - expect),
                              std::abs(z_of(sv, rv, rho0, p) - 1.0)});
        }
        s.identity("geo/z-identity-random", worst, 1e-12);
    }
    // Planar triple coordinates: r1 equals the residual, the received point
    // reconstructs r, and the codeword separation is 2A(1-rho) per dimension.
    {
        double worst = 0.0;
        for (int i = 0; i < 2000; ++i) {
            const double a = 0.1 + 9.9 * rng::uniform(98, 0, i, 0);
            const double rho = -0.999 + 1.9 * rng::uniform(98, 0, i, 1);
            const ChannelParams p{a};
            const auto [sv, rv] = opt_sr(rho, p);
            const TripleGeometry tg = triple_coordinates(p, rho, sv, rv);
            const double sep = (2.0 * tg.x1) * tg.x1 * 2.0;  // ||x_1 - x_2||^2 / n = 4 x1^2
            worst = std::max({worst, std::abs(tg.r1 - z_of(sv, rv, rho, p)),
                              std::abs(rv - tg.y2 * tg.y2 - tg.r1),
                              std::abs(sep - 2.0 * a * (1.0 - rho)),
                              std::abs(tg.x1 * tg.x1 + tg.x2 * tg.x2 - a)});
        }
        s.identity("geo/triple-coordinates", worst, 1e-12);
    }
    // Cap and ring areas both increase with the angle; the ring is a subset
    // of the cap whose closed form over-estimates it.
    {
        double worst = 1.0;
        for (int n : {8, 32, 128}) {
            double prev_cap = -1e300;
            double prev_ring = -1e300;
            for (double theta : lin_grid(std::max(0.05, 1.2 / n), 1.5, 40)) {
                const CapSpec spec{n, theta, -1.0};
                const double cap = cap_area_log(spec);
                const double ring = ring_area_log(spec);
                worst = std::min({worst, cap - prev_cap, ring - prev_ring, cap - ring});
                prev_cap = cap;
                prev_ring = ring;
            }
        }
        s.margin("geo/cap-ring-monotone", worst);
    }
    // Ring area bracket: width x boundary area x sin-ratio bounds.
    {
        double worst = 0.0;
        for (int n : {10, 50, 200}) {
            for (double theta : {0.3, 0.785398163397448, 1.2}) {
                const double delta = 1.0 / (static_cast<double>(n) * n);
                const double ring = ring_area_log(CapSpec{n, theta, delta});
                const double outer = std::log(delta) + subsphere_area_log(n) +
                                     (n - 2.0) * std::log(std::sin(theta));
                const double inner = std::log(delta) + subsphere_area_log(n) +
                                     (n - 2.0) * std::log(std::sin(theta - delta));
                worst = std::max({worst, ring - outer, inner - ring});
            }
        }
        s.identity("geo/ring-width-sandwich", worst, 1e-12);
    }
    // Narrow-ring limit: D_n(theta, delta) -> delta |S^{n-2}| sin^{n-2} theta.
    {
        const int n = 50;
        const double theta = 0.8;
        const double delta = 1e-8;
        const double ring = ring_area_log(CapSpec{n, theta, delta});
        const double limit = std::log(delta) + subsphere_area_log(n) +
                             (n - 2.0) * std::log(std::sin(theta));
        s.identity("geo/ring-narrow-limit", std::abs(ring - limit), 1e-6);
    }
    // Half-space condition with the optimal (s, r) flips exactly at tau_bar1.
    {
        double bad = 0.0;
        for (double a : {0.5, 1.0, 4.0, 10.0, 50.0}) {
            const ChannelParams p{a};
            const double tau1 = thresholds(p).tau_bar1;
            for (double eps : {1e-6, 1e-4}) {
                const auto below = opt_sr(tau1 - eps, p);
                const auto above = opt_sr(tau1 + eps, p);
                if (!lemma1_check(p, tau1 - eps, below.first, below.second)) bad += 1.0;
                if (lemma1_check(p, tau1 + eps, above.first, above.second)) bad += 1.0;
            }
        }
        s.violations("geo/halfspace-threshold", bad);
    }
    // Grid-local optimality of the closed-form (s, r) minimizer.
    {
        double worst = 1.0;
        for (double a : {1.0, 4.0, 10.0}) {
            const ChannelParams p{a};
            for (double rho : {0.1, 0.454, 0.8}) {
                const auto [s0, r0] = opt_sr(rho, p);
                const auto h = [&](double sv, double rv) {
                    return (sv - 1.0) / 2.0 - 0.5 * std::log(z_of(sv, rv, rho, p));
                };
                const double center = h(s0, r0);
                for (int i = -2; i <= 2; ++i) {
                    for (int j = -2; j <= 2; ++j) {
                        if (i == 0 && j == 0) continue;
                        worst = std::min(worst, h(s0 + i * 1e-3, r0 + j * 1e-3) - center);
                    }
                }
            }
        }
        s.margin("geo/opt-sr-grid-optimality", worst);
    }
    // Packing bounds dominate every witnessed code: the floor bound
    // 2 n^{3/2} (1-mu)^{-n/2} and (when the cosine is positive) the
    // cap-density bound with phi = arccos(mu)/2.
    {
        double worst_l4 = 1e18;
        double worst_rankin = 1e18;
        const ChannelParams p{1.0};
        const std::vector<SphericalCode> codes = {
            gen_code(CodeKind::Simplex, 16, 17, p, 1),
            gen_code(CodeKind::Biorthogonal, 16, 32, p, 1),
            gen_code(CodeKind::RandomUniform, 16, 64, p, 7),
            gen_code(CodeKind::RandomUniform, 8, 40, p, 3),
            gen_code(CodeKind::RandomUniform, 64, 256, p, 11),
        };
        for (const auto& code : codes) {
            const double mu = std::max(0.0, max_pairwise_cosine(code));
            worst_l4 = std::min(worst_l4,
                                static_cast<double>(lemma4_bound(code.n, mu)) - code.m);
            if (mu > 1.0 / (code.n + 2.0)) {
                const double phi = std::acos(mu) / 2.0;
                worst_rankin = std::min(worst_rankin, rankin_bound(code.n, phi) - code.m);
            }
        }
        s.margin("geo/floor-bound-dominates-codes", worst_l4, -0.5);
        s.margin("geo/cap-density-dominates-codes", worst_rankin);
    }
    // Witnessed codes also satisfy the coarse closed-form packing estimate
    // M < n sqrt(pi n cos(2 phi)) / (sqrt2 (sqrt2 sin phi)^{n-1}).
    {
        double worst = 1e18;
        const ChannelParams p{1.0};
        for (const auto& [n, m, seed] :
             std::vector<std::tuple<int, int, std::uint64_t>>{{16, 64, 7}, {8, 40, 3},
                                                              {64, 256, 11}}) {
            const SphericalCode code = gen_code(CodeKind::RandomUniform, n, m, p, seed);
            const double mu = max_pairwise_cosine(code);
            if (mu <= 1.0 / (n + 2.0)) continue;
            const double phi = std::acos(mu) / 2.0;
            const double log_rhs = std::log(static_cast<double>(n)) +
                                   0.5 * (std::log(kPiLocal) + std::log(static_cast<double>(n)) +
                                          std::log(mu)) -
                                   0.5 * std::log(2.0) -
                                   (n - 1.0) * (0.5 * std::log(2.0) + std::log(std::sin(phi)));
            worst = std::min(worst, std::exp(log_rhs) - m);
        }
        s.margin("geo/coarse-packing-dominates-codes", worst);
    }
    // Gamma-ratio inequality behind the floor bound:
    // Gamma((z-1)/2) (z^2-1) / Gamma(z/2) < sqrt2 z^{3/2} e^{1/z}.
    {
        double worst = 1e300;
        for (double z : log_grid(1.000001, 1e4, 200)) {
            const double lhs = std::lgamma((z - 1.0) / 2.0) + std::log(z * z - 1.0) -
                               std::lgamma(z / 2.0);
            const double rhs = 0.5 * std::log(2.0) + 1.5 * std::log(z) + 1.0 / z;
            worst = std::min(worst, rhs - lhs);
        }
        s.margin("geo/gamma-ratio-inequality", worst);
    }
    // Corrected bracket for the normalized cap integral
    // f = (n-1) Int_0^beta sin^{n-2}: with closed = sin^{n-1}(b)/cos(b) *
    // (1 - tan^2(b)/(n+1)), the ratio f/closed lies in
    // [1, 1/(1 - 3 tan^4(b)/(n^2-1))].
    {
        double worst = 0.0;
        for (int n : {8, 20, 40}) {
            for (double beta : {0.2, 0.5, 0.9}) {
                const double t2 = std::tan(beta) * std::tan(beta);
                if (3.0 * t2 * t2 >= n * n - 1.0) continue;
                // f via the ring quadrature: ring over [0, beta] with the
                // normalization sin^{n-2}(beta) restored.
                const double ring = ring_area_log(CapSpec{n, beta, beta});
                const double log_f = std::log(n - 1.0) + ring - subsphere_area_log(n);
                const double closed = (n - 1.0) * std::log(std::sin(beta)) -
                                      std::log(std::cos(beta)) + std::log1p(-t2 / (n + 1.0));
                const double ratio = std::exp(log_f - closed);
                const double hi = 1.0 / (1.0 - 3.0 * t2 * t2 / (n * n - 1.0));
                worst = std::max({worst, 1.0 - ratio, ratio - hi});
            }
        }
        s.identity("geo/cap-integral-bracket", worst, 1e-9);
    }
    // The cap-density bound never exceeds twice the floor bound.
    {
        double worst = 1e300;
        for (int n : {4, 8, 16, 32, 64}) {
            for (double mu : lin_grid(1.0 / (n + 2.0) + 0.02, 0.9, 8)) {
                const double phi = std::acos(mu) / 2.0;
                const double log_floor =
                    std::log(2.0) + 1.5 * std::log(static_cast<double>(n)) -
                    (n / 2.0) * std::log1p(-mu);
                const double log_rankin = std::log(rankin_bound(n, phi));
                worst = std::min(worst, std::log(2.0) + log_floor - log_rankin);
            }
        }
        s.margin("geo/cap-density-vs-floor-slack2", worst, -1e-12);
    }
    // Vacuous-regime reporting and minimization of the two-stage bound.
    {
        double bad = 0.0;
        if (lemma2_cardinality_bound(64, 0.9, 0.2, 3).has_value()) bad += 1.0;
        const auto best = lemma2_best_m(64, 0.5, 1.0 / 64.0, 4096);
        if (!best.has_value()) {
            bad += 1.0;
        } else {
            const auto single = lemma2_cardinality_bound(64, 0.5, 1.0 / 64.0, best->first);
            if (!single.has_value() || single.value() != best->second) bad += 1.0;
        }
        // (ln bound)/n shrinks as n grows (subexponential cardinality).
        double prev = 1e300;
        for (int n : {16, 32, 64, 128, 256}) {
            const auto b = lemma2_best_m(n, 0.5, 1.0 / n, 4 * n * n);
            if (!b.has_value()) {
                bad += 1.0;
                continue;
            }
            const double rate = std::log(static_cast<double>(b->second)) / n;
            if (rate >= prev) bad += 1.0;
            prev = rate;
        }
        s.violations("geo/two-stage-bound-behavior", bad);
    }
}

void check_code_lab(Suite& s) {
    const ChannelParams p{1.0};
    // Every generator places all points exactly on the power sphere.
    {
        double worst = 0.0;
        const std::vector<SphericalCode> codes = {
            gen_code(CodeKind::Simplex, 8, 9, p, 1),
            gen_code(CodeKind::Simplex, 16, 17, ChannelParams{4.0}, 1),
            gen_code(CodeKind::Biorthogonal, 3, 6, p, 1),
            gen_code(CodeKind::Biorthogonal, 16, 32, p, 1),
            gen_code(CodeKind::Pair, 16, 2, p, 1, 0.5),
            gen_code(CodeKind::RandomUniform, 16, 64, p, 7),
        };
        for (const auto& code : codes) {
            const double an = code.a * code.n;
            for (int i = 0; i < code.m; ++i) {
                double norm2 = 0.0;
                for (int k = 0; k < code.n; ++k) norm2 += code.row(i)[k] * code.row(i)[k];
                worst = std::max(worst, std::abs(norm2 / an - 1.0));
            }
        }
        s.identity("lab/generator-norms", worst, 1e-9);
    }
    // Histogram counts equal an independent recount, and the structured codes
    // produce their known exact spectra.
    {
        double bad = 0.0;
        for (const auto& code : {gen_code(CodeKind::Simplex, 16, 17, p, 1),
                                 gen_code(CodeKind::Biorthogonal, 16, 32, p, 1),
                                 gen_code(CodeKind::RandomUniform, 8, 100, p, 5)}) {
            const SpectrumHistogram h = spectrum_histogram(code);
            std::vector<std::int64_t> recount(h.counts.size(), 0);
            const double an = code.a * code.n;
            for (int i = 0; i < code.m; ++i) {
                for (int j = 0; j < code.m; ++j) {
                    if (i == j) continue;
                    double dot = 0.0;
                    for (int k = 0; k < code.n; ++k) dot += code.row(i)[k] * code.row(j)[k];
                    const double offset =
                        std::max(0.0, (dot / an - h.rho_min) / h.bin_width);
                    auto bin = static_cast<std::size_t>(std::floor(offset));
                    bin = std::min(bin, recount.size() - 1);
                    ++recount[bin];
                }
            }
            if (recount != h.counts) bad += 1.0;
            std::int64_t total = 0;
            for (auto c : h.counts) total += c;
            if (total != static_cast<std::int64_t>(code.m) * (code.m - 1)) bad += 1.0;
        }
        // Biorthogonal: each point has 2n-2 orthogonal neighbors and one
        // antipode; simplex: all 16 neighbors at cosine -1/16.
        const SpectrumHistogram hb =
            spectrum_histogram(gen_code(CodeKind::Biorthogonal, 16, 32, p, 1));
        std::int64_t at_zero = 0;
        std::int64_t at_neg1 = 0;
        for (std::size_t i = 0; i < hb.counts.size(); ++i) {
            if (hb.bin_lo(i) <= 0.0 && 0.0 < hb.bin_hi(i)) at_zero = hb.counts[i];
            if (hb.bin_lo(i) <= -1.0 && -1.0 < hb.bin_hi(i)) at_neg1 = hb.counts[i];
        }
        if (at_zero != 32LL * 30) bad += 1.0;
        if (at_neg1 != 32) bad += 1.0;
        const SpectrumHistogram hs = spectrum_histogram(gen_code(CodeKind::Simplex, 16, 17, p, 1));
        std::int64_t at_rho = 0;
        const double rho_simplex = -1.0 / 16.0;
        for (std::size_t i = 0; i < hs.counts.size(); ++i) {
            if (hs.bin_lo(i) <= rho_simplex && rho_simplex < hs.bin_hi(i)) at_rho = hs.counts[i];
        }
        if (at_rho != 17LL * 16) bad += 1.0;
        s.violations("lab/spectrum-matches-recount", bad);
    }
    // Decoding is invariant under exact power-of-two scaling of the space.
    {
        double bad = 0.0;
        const SphericalCode code = gen_code(CodeKind::RandomUniform, 16, 64, p, 3);
        SphericalCode doubled = code;
        doubled.a *= 4.0;
        for (double& x : doubled.points) x *= 2.0;
        for (int trial = 0; trial < 500; ++trial) {
            const auto msg = static_cast<int>(rng::below(17, rng::kStreamMessage, trial, 0, 64));
            std::vector<double> y(16);
            std::vector<double> y2(16);
            for (int k = 0; k < 16; ++k) {
                y[k] = code.row(msg)[k] + rng::normal(17, rng::kStreamNoise, trial, k);
                y2[k] = 2.0 * y[k];
            }
            const DecodeResult d1 = decode_index(code, y);
            const DecodeResult d2 = decode_index(doubled, y2);
            if (d1.index != d2.index || d1.unique != d2.unique) bad += 1.0;
        }
        s.violations("lab/decoder-scale-invariance", bad);
    }
    // Monte Carlo error rate is unbiased against the closed-form two-point
    // error probability Q(d/2): mean over 50 seeds within 2 standard errors.
    {
        const SphericalCode code = gen_code(CodeKind::Pair, 16, 2, p, 1, 0.5);
        double sum = 0.0;
        const int seeds = 50;
        const std::int64_t trials = 2000;
        for (int seed = 1; seed <= seeds; ++seed) {
            sum += ml_decode_error_mc(code, trials, seed).p_e_hat;
        }
        const double mean = sum / seeds;
        const double q = q_tail(2.0);  // d = sqrt(2 A n (1-rho)) = 4, so Q(d/2)
        const double se = std::sqrt(q * (1.0 - q) / (seeds * trials));
        s.identity("lab/mc-unbiased-vs-two-point", std::abs(mean - q), 2.0 * se);
    }
    // Single-run estimate stays within 4 sigma of the exact value at rho = 0.
    {
        const SphericalCode code = gen_code(CodeKind::Pair, 16, 2, p, 5, 0.0);
        const DecodingEstimate est = ml_decode_error_mc(code, 20000, 5);
        const double q = q_tail(std::sqrt(32.0) / 2.0);
        const double sigma = std::sqrt(q * (1.0 - q) / 20000.0);
        s.identity("lab/pair-error-rate-oracle", std::abs(est.p_e_hat - q), 4.0 * sigma);
    }
}

}  // namespace

GapMaximum max_junction_gap() {
    const auto gap = [](double a) {
        const ThresholdSet th = thresholds(ChannelParams{a});
        return th.r_crit - th.r_bar1;
    };
    const double a_star = golden_max(gap, 0.3, 50.0, 1e-10);
    return GapMaximum{a_star, gap(a_star)};
}

std::vector<CheckResult> run_validation(double perturb) {
    Suite s;
    check_core(s, perturb);
    check_exponents(s);
    check_spectrum(s);
    check_geometry(s);
    check_code_lab(s);
    return std::move(s.out);
}

}  // namespace relfun
