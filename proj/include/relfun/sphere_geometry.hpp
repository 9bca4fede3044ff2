#pragma once

#include <cstdint>
#include <optional>

#include "relfun/types.hpp"

namespace relfun {

/// ln of the surface area of the sphere of given radius in R^n:
///   ln( n pi^{n/2} radius^{n-1} / Gamma(n/2 + 1) ).
[[nodiscard]] double sphere_area_log(int n, double radius);

/// ln of the closed-form cap area on the unit sphere in R^n,
///   Omega_n(theta) = pi^{(n-1)/2} sin^{n-1}(theta) / (Gamma((n+1)/2) cos theta),
/// an upper estimate of the true cap area, accurate for theta >= 1/n.
/// Rejects theta outside (0, pi/2): the closed form is singular at pi/2.
[[nodiscard]] double cap_area_log(const CapSpec& spec);

/// ln of the ring (annulus) area between angles theta - delta and theta:
///   D_n(theta) = |S^{n-2}| * integral of sin^{n-2}(u) du over [theta-delta, theta],
/// by adaptive quadrature of the normalized integrand. delta < 0 selects the
/// default width 1/n^2; the lower limit clamps at 0. theta = pi/2 is allowed.
[[nodiscard]] double ring_area_log(const CapSpec& spec);

/// True when the cap/ring closed-form accuracy regime theta >= 1/n holds.
[[nodiscard]] bool cap_accuracy_regime(const CapSpec& spec);

/// Residual squared radius of the two-constraint geometry, per dimension:
///   z(s, r, rho) = r - (A + r - s)^2 / (2 A (1 + rho)).
[[nodiscard]] double z_of(double s, double r, double rho, const ChannelParams& p);

/// The (s, r) pair minimizing (s-1)/2 - ln(z)/2 at fixed correlation:
///   s = A (1 - rho)/2 + 1,  r = A (1 + rho)/2 + 1   (then z = 1 exactly).
[[nodiscard]] std::pair<double, double> opt_sr(double rho, const ChannelParams& p);

/// Planar coordinates of codewords x_1 = (x1, x2, 0, ...), x_2 = (-x1, x2, 0, ...)
/// and the received point (0, y2, ...), all per dimension:
///   x1 = sqrt(A(1-rho)/2), x2 = sqrt(A(1+rho)/2),
///   y2 = (A + r - s)/sqrt(2A(1+rho)), r1 = r - y2^2 = z(s, r, rho).
[[nodiscard]] TripleGeometry triple_coordinates(const ChannelParams& p, double rho, double s,
                                                double r);

/// Cardinality bound floor(2 n^{3/2} (1 - mu)^{-n/2}) for point sets on the
/// unit sphere with pairwise cosine at most mu; saturates at INT64_MAX.
[[nodiscard]] std::int64_t lemma4_bound(int n, double mu);

/// Packing bound on the number of unit vectors with pairwise angle >= 2 phi
/// (cosine <= cos 2 phi), via the cap-density expression
///   M(phi) <= (n-1) sqrt(pi) Gamma((n-1)/2) sin(beta) tan(beta)
///             / (2 Gamma(n/2) [sin^{n-1}(beta) - f cos(beta)]),
/// beta = arcsin(sqrt(2) sin phi), f = (n-1) * integral of sin^{n-2} over [0, beta].
/// Requires 0 < phi < pi/4. May return +infinity when the denominator
/// underflows; that is still a valid (vacuous) upper bound.
[[nodiscard]] double rankin_bound(int n, double phi);

/// True when (n, phi) lies in the closed-form bracketing regime
/// tan^2(beta) < n + 1 (equivalently cos 2 phi > 1/(n+2)) used by the
/// quadrature-vs-bracket accuracy checks. rankin_bound itself is valid on all
/// of 0 < phi < pi/4; outside this regime only the bracket comparison lapses.
[[nodiscard]] bool rankin_regime(int n, double phi);

/// True iff A + r - s >= 2 sqrt(A r rho): the half-space/cone condition under
/// which a cap subcode collapses to at most 2n points. With opt_sr(rho) it
/// holds exactly when rho <= tau_bar1(A).
[[nodiscard]] bool lemma1_check(const ChannelParams& p, double rho, double s, double r);

/// Cardinality bound m + lemma4_bound(n, mu) with mu = 2 (slack + 1/m)/(1 - rho).
/// Returns nullopt when mu >= 1 (the bound is vacuous).
[[nodiscard]] std::optional<std::int64_t> lemma2_cardinality_bound(int n, double rho,
                                                                   double slack, int m);

/// lemma2_cardinality_bound minimized over m in [2, m_max]; nullopt when every
/// m in range is vacuous.
[[nodiscard]] std::optional<std::pair<int, std::int64_t>> lemma2_best_m(int n, double rho,
                                                                        double slack, int m_max);

}  // namespace relfun
