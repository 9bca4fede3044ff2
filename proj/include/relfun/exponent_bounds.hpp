#pragma once

#include "relfun/types.hpp"

namespace relfun {

/// First upper bound on the reliability function:
///   A(1-tau_R)/4 + ln(1+2 t_R) - R            on (0, r_bar1],
///   E_sp(R_crit) + R_crit - R  (slope -1)     on (r_bar1, r_crit],
///   E_sp(R)                                   on (r_crit, C].
/// Continuous at both junctions; equals A/4 at R = 0 (its right limit).
[[nodiscard]] double upper_bound_t1(double r, const ChannelParams& p);

/// Refined upper bound. For A <= a0 identical to upper_bound_t1. For A > a0:
///   the tangent branch of upper_bound_t1                on (0, r_bar2],
///   A a e^{-2R}/4 - ln(2 - a e^{-2R})/2 - ln(a)/2       on (r_bar2, r_bar3],
///   E_sp(R_crit) + R_crit - R                           on (r_bar3, r_crit],
///   E_sp(R)                                             on (r_crit, C],
/// with a the universal branch constant. Strictly below upper_bound_t1 on
/// (r_bar2, r_bar1) when A > a0.
[[nodiscard]] double upper_bound_t2(double r, const ChannelParams& p);

/// Classical lower bound on the reliability function:
///   A (1 - sqrt(1 - e^{-2R}))/4               on [0, r_low],
///   E_sp(R_crit) + R_crit - R  (slope -1)     on (r_low, r_crit],
///   E_sp(R)                                   on (r_crit, C].
[[nodiscard]] double lower_bound(double r, const ChannelParams& p);

/// Numeric sphere-packing optimizer: maximizes the concave radius objective
///   F(x) = ln x - x - A + 2 sqrt(A w x),  w = 1 - e^{-2R},
/// whose optimum yields the exponent (s-1)/2 + R - ln(x)/2 with
/// s = x + A - 2 sqrt(A w x). Returns the closed-form stationary solution
///   lambda = sqrt(A/w)/g,  r_var = g^2,  s_var = r_var + A - 2A/lambda,
///   r1 = r_var e^{-2R},
/// and throws ConvergenceError if the optimizer fails to land on it.
[[nodiscard]] SpherePackingResult sphere_packing_numeric(double r, const ChannelParams& p);

/// Slope -1 extension from an anchor toward lower rates:
/// anchor_e + (anchor_r - r), for r <= anchor_r.
[[nodiscard]] double straight_line(double anchor_r, double anchor_e, double r);

/// Min-max evaluation of the refined bound from first principles:
///   min over u in [0, R] of max over rho in [tau_u, 1) of
///   f(u, rho) = A(1-rho) e^{2(u-R)}/4 + R - 2u + J(t_u, rho)
///               + ln((1+rho)/(2 e^{2(R-u)} + rho - 1))/2,
/// where the u = 0 candidate is the continuous limit of the open lower end.
/// Optional detail receives the optimizing (u, rho).
///
/// The value coincides with upper_bound_t2 exactly for 0 < R <= r_crit: each
/// closed-form piece is realized by an inner rate u with v(u) >= v1, a choice
/// that exists precisely while R <= r_crit. Above r_crit the functional keeps
/// decreasing below the sphere-packing exponent (the spectrum argument behind
/// it carries no information there), so it no longer tracks the bound.
[[nodiscard]] double theorem2_numeric(double r, const ChannelParams& p,
                                      Theorem2Detail* detail = nullptr);

/// C(v) = A v/4 - ln(v(2-v))/2 on (0, 1].
[[nodiscard]] double c_of_v(double v, const ChannelParams& p);

/// v(u) = (1 - tau_{t_u}) e^{2(u - R)} for inner rate u <= outer rate R.
[[nodiscard]] double v_of_r(double u, double outer_r);

/// v1 = 4/(A + 2 + sqrt(A^2 + 4)) = e^{-2 R_crit}, the minimizer of C(v).
[[nodiscard]] double v1(const ChannelParams& p);

/// f2(u) = 2u + ln(1 - tau_{t_u}); decreasing below r_bar2, increasing above.
[[nodiscard]] double f2(double u);

/// Samples one bound family over an inclusive rate grid. Exact curves are
/// restricted to the regions where the upper and lower bounds coincide
/// ([r_bar1, C], or [r_bar3, C] when A > a0). Tiny negative values from
/// rounding at R = C are clamped to zero.
[[nodiscard]] BoundCurve sample_curve(BoundKind kind, const ChannelParams& p, double rmin,
                                      double rmax, int points);

}  // namespace relfun
