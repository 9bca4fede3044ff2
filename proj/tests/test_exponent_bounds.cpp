#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "relfun/core_functions.hpp"
#include "relfun/exponent_bounds.hpp"
#include "relfun/types.hpp"

using namespace relfun;

namespace {
const ChannelParams kA4{4.0};
}

TEST_CASE("first upper bound: branch values at snr 4") {
    const ThresholdSet th = thresholds(kA4);
    // Tangent branch.
    CHECK(std::abs(upper_bound_t1(0.2, kA4) - 0.47931151193400853) <= 1e-14);
    // R = 0 limit is A/4.
    CHECK(upper_bound_t1(0.0, kA4) == 1.0);
    // Slope -1 segment between r_bar1 and r_crit.
    const double anchor = e_sp(th.r_crit, kA4);
    CHECK(std::abs(upper_bound_t1(0.45, kA4) - straight_line(th.r_crit, anchor, 0.45)) <= 1e-14);
    CHECK(std::abs(upper_bound_t1(0.45, kA4) - 0.17257192377990688) <= 1e-13);
    // Sphere-packing segment above r_crit.
    CHECK(std::abs(upper_bound_t1(0.6, kA4) - e_sp(0.6, kA4)) <= 1e-15);
    CHECK(std::abs(upper_bound_t1(th.capacity, kA4)) <= 1e-12);
}

TEST_CASE("first upper bound: junction continuity") {
    for (double a : {0.5, 1.0, 4.0, 10.0}) {
        const ChannelParams p{a};
        const ThresholdSet th = thresholds(p);
        const double eps = 1e-9;
        CHECK(std::abs(upper_bound_t1(th.r_bar1 - eps, p) - upper_bound_t1(th.r_bar1 + eps, p)) <=
              1e-7);
        CHECK(std::abs(upper_bound_t1(th.r_crit - eps, p) - upper_bound_t1(th.r_crit + eps, p)) <=
              1e-7);
    }
}

TEST_CASE("refined upper bound: branch values at snr 4") {
    const ThresholdSet th = thresholds(kA4);
    // Below r_bar2 the refined bound coincides with the tangent branch.
    CHECK(upper_bound_t2(0.2, kA4) == upper_bound_t1(0.2, kA4));
    CHECK(upper_bound_t2(0.1, kA4) == upper_bound_t1(0.1, kA4));
    // Both branches agree at r_bar2.
    CHECK(std::abs(upper_bound_t2(th.r_bar2, kA4) - 0.42745988647819412) <= 1e-13);
    CHECK(std::abs(upper_bound_t1(th.r_bar2, kA4) - 0.42745988647819412) <= 1e-13);
    // Curved branch interior point.
    CHECK(std::abs(upper_bound_t2(0.3, kA4) - 0.33717115377653130) <= 1e-13);
    // Curved branch meets the slope -1 segment at r_bar3.
    CHECK(std::abs(upper_bound_t2(th.r_bar3, kA4) - 0.21002032423773092) <= 1e-13);
    const double anchor = e_sp(th.r_crit, kA4);
    CHECK(std::abs(upper_bound_t2(th.r_bar3, kA4) -
                   straight_line(th.r_crit, anchor, th.r_bar3)) <= 1e-12);
    // Explicit curved-branch formula.
    const double ae = th.a_const * std::exp(-2.0 * 0.3);
    const double curved =
        kA4.a * ae / 4.0 - 0.5 * std::log(2.0 - ae) - 0.5 * std::log(th.a_const);
    CHECK(std::abs(upper_bound_t2(0.3, kA4) - curved) <= 1e-14);
}

TEST_CASE("refined upper bound: strict improvement window") {
    const ThresholdSet th = thresholds(kA4);
    for (int i = 1; i < 40; ++i) {
        const double r = th.r_bar2 + (th.r_bar1 - th.r_bar2) * i / 40.0;
        CHECK(upper_bound_t2(r, kA4) < upper_bound_t1(r, kA4));
    }
    // Outside the window the two bounds coincide.
    CHECK(upper_bound_t2(0.15, kA4) == upper_bound_t1(0.15, kA4));
    CHECK(std::abs(upper_bound_t2(0.45, kA4) - upper_bound_t1(0.45, kA4)) <= 1e-15);
    CHECK(std::abs(upper_bound_t2(0.7, kA4) - upper_bound_t1(0.7, kA4)) <= 1e-15);
}

TEST_CASE("refined upper bound: degenerate below the separation snr") {
    const ChannelParams weak{1.0};  // capacity ln(2)/2 ~= 0.3466
    for (double r : {0.01, 0.05, 0.1, 0.2, 0.34}) {
        CHECK(upper_bound_t2(r, weak) == upper_bound_t1(r, weak));
    }
}

TEST_CASE("lower bound: branch values at snr 4") {
    const ThresholdSet th = thresholds(kA4);
    CHECK(lower_bound(0.0, kA4) == 1.0);
    CHECK(std::abs(lower_bound(0.1, kA4) - 0.57424273708835202) <= 1e-14);
    // Curved branch formula A(1 - sqrt(1 - e^{-2R}))/4.
    CHECK(std::abs(lower_bound(0.1, kA4) -
                   (1.0 - std::sqrt(-std::expm1(-0.2)))) <= 1e-14);
    // At the junction the curved branch equals the slope -1 segment, and the
    // shared value is e^{-2 r_crit}.
    CHECK(std::abs(lower_bound(th.r_low, kA4) - 0.38196601125010515) <= 1e-13);
    const double anchor = e_sp(th.r_crit, kA4);
    CHECK(std::abs(lower_bound(th.r_low, kA4) - straight_line(th.r_crit, anchor, th.r_low)) <=
          1e-12);
    CHECK(std::abs(lower_bound(0.3, kA4) - 0.32257192377990688) <= 1e-13);
    CHECK(std::abs(lower_bound(0.6, kA4) - e_sp(0.6, kA4)) <= 1e-15);
}

TEST_CASE("bounds sandwich and shared exactness regions") {
    for (double a : {1.0, 4.0, 10.0}) {
        const ChannelParams p{a};
        const ThresholdSet th = thresholds(p);
        for (int i = 0; i <= 60; ++i) {
            const double r = th.capacity * i / 60.0;
            const double t1 = upper_bound_t1(r, p);
            const double t2 = upper_bound_t2(r, p);
            const double low = lower_bound(r, p);
            CHECK(low <= t2 + 1e-12);
            CHECK(t2 <= t1 + 1e-12);
        }
        // Known exactly from r_bar1 up to capacity.
        for (int i = 0; i <= 20; ++i) {
            const double r = th.r_bar1 + (th.capacity - th.r_bar1) * i / 20.0;
            CHECK(std::abs(upper_bound_t1(r, p) - lower_bound(r, p)) <= 1e-12);
        }
    }
}

TEST_CASE("numeric sphere-packing optimizer reproduces the closed solution") {
    const SpherePackingResult res = sphere_packing_numeric(0.6, kA4);
    CHECK(std::abs(res.exponent - e_sp(0.6, kA4)) <= 1e-9);
    CHECK(std::abs(res.solution.lambda - 1.1183410722326916) <= 1e-12);
    CHECK(std::abs(res.solution.r_var - 4.5767263666837106) <= 1e-12);
    CHECK(std::abs(res.solution.s_var - 1.4232736333162894) <= 1e-12);
    CHECK(std::abs(res.solution.r1 - 1.3784834911510963) <= 1e-12);
    // Defining relations: multiplier quadratic and the constraint surface.
    const double w = -std::expm1(-1.2);
    const double lam = res.solution.lambda;
    CHECK(std::abs(w * lam * lam + kA4.a * w * lam - kA4.a) <= 1e-10);
    const double s = res.solution.s_var;
    const double r = res.solution.r_var;
    CHECK(std::abs(s - (r - kA4.a - s) * (r - kA4.a - s) / (4.0 * kA4.a) - res.solution.r1) <=
          1e-9);
    CHECK(std::abs(res.solution.r1 - r * std::exp(-1.2)) <= 1e-12);
}

TEST_CASE("numeric sphere-packing optimizer matches the closed exponent on a grid") {
    for (double a : {0.5, 2.0, 8.0}) {
        const ChannelParams p{a};
        const double c = capacity(p);
        for (int i = 1; i <= 12; ++i) {
            const double r = c * i / 13.0;
            CHECK(std::abs(sphere_packing_numeric(r, p).exponent - e_sp(r, p)) <= 1e-7);
        }
    }
}

TEST_CASE("min-max refined bound matches the piecewise form") {
    const ThresholdSet th = thresholds(kA4);
    CHECK(std::abs(theorem2_numeric(0.3, kA4) - 0.33717115377653130) <= 1e-6);
    for (int i = 1; i <= 10; ++i) {
        const double r = 0.05 + (th.r_crit - 0.05) * i / 10.0;
        CHECK(std::abs(theorem2_numeric(r, kA4) - upper_bound_t2(r, kA4)) <= 1e-5);
    }
    Theorem2Detail detail;
    (void)theorem2_numeric(0.3, kA4, &detail);
    CHECK(std::abs(detail.value - theorem2_numeric(0.3, kA4)) <= 1e-12);
    // In the curved-branch window the inner rate optimum sits at r_bar2.
    CHECK(std::abs(detail.u_opt - th.r_bar2) <= 1e-3);
    CHECK(detail.rho_opt >= 0.0);
    CHECK(detail.rho_opt <= 1.0);
}

TEST_CASE("refined min-max decouples from the bound above the critical rate") {
    // The coincidence with the piecewise form ends at r_crit: past it the
    // functional keeps shrinking and drops below the sphere-packing
    // exponent, so it must not be used as the bound there.
    for (double a : {3.0, 4.0, 10.0}) {
        const ChannelParams p{a};
        const double r = 0.98 * capacity(p);
        CHECK(theorem2_numeric(r, p) < e_sp(r, p));
        // The functional tends to zero from above as R -> C; allow rounding.
        CHECK(theorem2_numeric(r, p) > -1e-9);
    }
    // At snr 3 and rate 0.98 C the gap is concrete; the outer optimum sits at
    // u = R (value checked against an independent 40-digit evaluation of the
    // stationary inner maximum there).
    CHECK(std::abs(theorem2_numeric(0.679284, ChannelParams{3.0}) - 1.3936873141886241e-4) <=
          1e-9);
}

TEST_CASE("multiplier-curve helpers") {
    const ThresholdSet th = thresholds(kA4);
    // v1 = e^{-2 r_crit} and the curve value there.
    CHECK(std::abs(v1(kA4) - 0.38196601125010515) <= 1e-15);
    CHECK(std::abs(v1(kA4) - std::exp(-2.0 * th.r_crit)) <= 1e-15);
    CHECK(std::abs(c_of_v(v1(kA4), kA4) - 0.62257192377990688) <= 1e-14);
    CHECK(std::abs(c_of_v(v1(kA4), kA4) - (e_sp(th.r_crit, kA4) + th.r_crit)) <= 1e-12);
    CHECK(std::abs(v1(ChannelParams{1.0}) - 0.76393202250021030) <= 1e-15);
    // v(u) at u = R reduces to 1 - tau_R.
    const double t = t_of_rate(0.3);
    CHECK(std::abs(v_of_r(0.3, 0.3) - (1.0 - tau_of_t(t))) <= 1e-14);
    // f2 has its minimum value -2 * gap at the universal rate.
    CHECK(std::abs(f2(th.r_bar2) - (-0.13732045103485498)) <= 1e-13);
    CHECK(f2(th.r_bar2 - 0.05) > f2(th.r_bar2));
    CHECK(f2(th.r_bar2 + 0.05) > f2(th.r_bar2));
}

TEST_CASE("junction gap maximum sits at the separation snr") {
    // At a0 the refined bound degenerates: r_bar1 = r_bar2 = r_bar3, and the
    // junction gap r_crit - r_bar1 equals the universal constant
    // -(r_bar2 + ln(1 - tau_bar2)/2).
    const ThresholdSet th = thresholds(ChannelParams{2.2877222461837292});
    CHECK(std::abs(th.r_bar1 - th.r_bar2) <= 1e-7);
    CHECK(std::abs(th.r_bar3 - th.r_bar2) <= 1e-7);
    CHECK(std::abs((th.r_crit - th.r_bar1) - 0.068660225517427489) <= 1e-7);
}

TEST_CASE("curve sampler covers each bound family") {
    const BoundCurve curve = sample_curve(BoundKind::UpperT1, kA4, 0.0, capacity(kA4), 11);
    CHECK(curve.rates.size() == 11);
    CHECK(curve.values.size() == 11);
    CHECK(curve.rates.front() == 0.0);
    CHECK(std::abs(curve.rates.back() - capacity(kA4)) <= 1e-15);
    CHECK(curve.values.front() == 1.0);
    CHECK(std::abs(curve.values.back()) <= 1e-12);
    for (std::size_t i = 0; i < curve.rates.size(); ++i) {
        CHECK(std::abs(curve.values[i] - upper_bound_t1(curve.rates[i], kA4)) <= 1e-12);
    }
    const BoundCurve exact = sample_curve(BoundKind::Exact, kA4, thresholds(kA4).r_bar1,
                                          capacity(kA4), 9);
    for (std::size_t i = 0; i < exact.rates.size(); ++i) {
        CHECK(std::abs(exact.values[i] - lower_bound(exact.rates[i], kA4)) <= 1e-9);
    }
}

TEST_CASE("bound domain enforcement") {
    CHECK_THROWS_AS((void)upper_bound_t1(-0.01, kA4), std::invalid_argument);
    CHECK_THROWS_AS((void)upper_bound_t2(-0.01, kA4), std::invalid_argument);
    CHECK_THROWS_AS((void)lower_bound(-0.01, kA4), std::invalid_argument);
    CHECK_THROWS_AS((void)upper_bound_t1(capacity(kA4) + 0.01, kA4), std::invalid_argument);
    CHECK_THROWS_AS((void)theorem2_numeric(-0.5, kA4), std::invalid_argument);
    CHECK_THROWS_AS((void)sphere_packing_numeric(0.3, ChannelParams{-1.0}),
                    std::invalid_argument);
}
