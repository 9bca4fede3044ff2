#pragma once

#include "relfun/types.hpp"

namespace relfun {

/// Result of the cap-projection spectrum bound: the ambient correlation the
/// bound certifies and the lower bound on the spectrum exponent there.
struct T4Bound {
    Correlation rho = 0.0;
    double bound = 0.0;
};

/// Direct spectrum lower bound b(rho) >= R - J(t_R, rho) for rho >= tau_R.
/// Equals R - ln(1 + 2 t_R) at rho = tau_R and 0 at rho = 1.
[[nodiscard]] double b_lower_t3(double r, double rho);

/// Correlation lift from a cap subcode to the ambient sphere:
///   rho = 1 - (1 - rho') e^{2(inner_r - outer_r)}.
/// Identity when inner_r = outer_r; always >= rho'.
[[nodiscard]] double rho_from_cap(double rho_prime, double inner_r, double outer_r);

/// Cap-projection spectrum bound: a subcode of rate inner_r certifies, at
/// rho = rho_from_cap(rho', inner_r, outer_r),
///   b(rho) >= inner_r - J(t_inner, rho') + ln((1+rho)/(1+rho'))/2.
/// Reduces exactly to b_lower_t3 when inner_r = outer_r.
[[nodiscard]] T4Bound b_lower_t4(double outer_r, double inner_r, double rho_prime);

/// Envelope built from the direct bound: support [tau_R, 1].
[[nodiscard]] SpectrumEnvelope envelope_t3(double r);

/// Envelope built from the cap-projection bound with a fixed inner rate:
/// support [rho_from_cap(tau_inner, inner_r, outer_r), 1]; evaluation maps
/// each ambient rho back to the cap correlation.
[[nodiscard]] SpectrumEnvelope envelope_t4(double outer_r, double inner_r);

/// Maximizer of the additive-exponent objective A(1 - rho)/4 - env(rho) over
/// the envelope support (concave there), with ties broken toward the smallest
/// correlation. The value is the certified upper bound on the reliability
/// exponent implied by the envelope.
[[nodiscard]] AdditiveExponent rho0_argmax(const ChannelParams& p, const SpectrumEnvelope& env);

}  // namespace relfun
