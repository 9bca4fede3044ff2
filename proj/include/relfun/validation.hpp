#pragma once

#include <vector>

#include "relfun/types.hpp"

namespace relfun {

/// Result of maximizing the gap R_crit(A) - R_bar1(A) over A.
///
/// The gap measures how far below the critical rate the tangent/affine
/// junction of the first upper bound sits; its maximum over all SNRs is a
/// universal constant (~= 0.06866 nats), attained at the same SNR where
/// R_bar1(A) = R_bar2.
struct GapMaximum {
    double a_argmax = 0.0;  ///< SNR attaining the maximum gap
    double max_gap = 0.0;   ///< max over A of r_crit(A) - r_bar1(A)
};

/// Maximize r_crit(A) - r_bar1(A) over A by golden-section search.
[[nodiscard]] GapMaximum max_junction_gap();

/// Run the full cross-validation suite over every module: closed-form
/// identities, threshold orderings, bound sandwiches, exactness regions,
/// derivative and convexity spot checks, geometry identities, and Monte
/// Carlo consistency checks.
///
/// `perturb` is a negative-control knob: the junction identity
/// E_sp(R_crit) + R_crit = A(1-tau_bar1)/4 + ln(1+2*t_bar1) is evaluated
/// with tau_bar1 and t_bar1 scaled by (1+perturb). With perturb = 0 the
/// identity holds to 1e-9; a perturbation of 1e-3 must make that check
/// fail, demonstrating the suite has teeth.
///
/// Every check reports its name, pass/fail, the worst residual (or margin)
/// observed, and the tolerance it was held to.
[[nodiscard]] std::vector<CheckResult> run_validation(double perturb = 0.0);

}  // namespace relfun
