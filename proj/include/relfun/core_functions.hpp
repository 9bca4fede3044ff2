#pragma once

#include "relfun/types.hpp"

namespace relfun {

/// Parametric rate R(t) = (1+t) ln(1+t) - t ln t, R(0) = 0.
/// Strictly increasing on t >= 0.
[[nodiscard]] double rate_of_t(double t);

/// Inverse of rate_of_t: the unique t >= 0 with R(t) = r, to 1e-12.
[[nodiscard]] double t_of_rate(double r);

/// Correlation threshold tau(t) = 2 sqrt(t(1+t)) / (1+2t), in [0, 1).
[[nodiscard]] double tau_of_t(double t);

/// Channel capacity C(A) = (1/2) ln(1+A) in nats per dimension.
[[nodiscard]] double capacity(const ChannelParams& p);

/// Critical rate R_crit(A) = (1/2) ln((2 + A + sqrt(A^2+4)) / 4).
[[nodiscard]] double r_crit(const ChannelParams& p);

/// Sphere-packing exponent
///   E_sp(R,A) = A/2 - sqrt(A w) g/2 - ln g + R,  w = 1 - e^{-2R},
///   g = (sqrt(A w) + sqrt(A w + 4)) / 2.
/// Defined on [0, C]; E_sp(0) = A/2, E_sp(C) = 0, strictly decreasing.
[[nodiscard]] double e_sp(double r, const ChannelParams& p);

/// All derived rate/correlation thresholds for a channel, plus the universal
/// constants shared by every channel. Root solver failures raise
/// ConvergenceError (distinct from invalid_argument on bad parameters).
[[nodiscard]] ThresholdSet thresholds(const ChannelParams& p);

/// Auxiliary derivative function whose unique positive root defines t_bar2:
///   D(t) = ln((1+t)/t) - 1/(2 sqrt(t(1+t))) - 1/(1+2t),  t > 0.
/// Negative for small t, positive at t = 1.
[[nodiscard]] double d_of_t(double t);

/// Number of sign changes of d_of_t on a uniform grid over [lo, hi];
/// 1 confirms the unique-root assumption behind t_bar2.
[[nodiscard]] int d_sign_changes(double lo = 1e-4, double hi = 1.0, int grid = 4000);

/// Spectrum transform
///   J(t, rho) = (1+2t) ln(2 t rho + q) - ln q - t ln(4 t (1+t)),
///   q = rho + sqrt((1+2t)^2 rho^2 - 4 t (1+t)),
/// defined for rho >= tau(t); J(0, rho) = 0. Tiny negative discriminants at
/// rho ~= tau(t) are clamped to zero; genuinely negative ones are rejected.
[[nodiscard]] double j_spectrum(double t, double rho);

/// Analytic partial dJ/drho = 4 t (1+t) / q.
[[nodiscard]] double j_partial_rho(double t, double rho);

/// Analytic partial dJ/dt = 2 ln(2 t rho + q) - ln(4 t (1+t)), t > 0.
[[nodiscard]] double j_partial_t(double t, double rho);

}  // namespace relfun
