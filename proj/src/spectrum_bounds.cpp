#include "relfun/spectrum_bounds.hpp"

#include <cmath>

#include "relfun/core_functions.hpp"
#include "relfun/optimize.hpp"

namespace relfun {

namespace {

constexpr double kRhoTol = 1e-12;

}  // namespace

double b_lower_t3(double r, double rho) {
    if (!(r >= 0.0)) throw std::invalid_argument("b_lower_t3: rate must be nonnegative");
    const double t = t_of_rate(r);
    if (rho < tau_of_t(t) - kRhoTol) {
        throw std::domain_error("b_lower_t3: rho below tau_R");
    }
    return r - j_spectrum(t, std::max(rho, tau_of_t(t)));
}

double rho_from_cap(double rho_prime, double inner_r, double outer_r) {
    if (inner_r > outer_r) {
        throw std::invalid_argument("rho_from_cap: inner rate must not exceed outer rate");
    }
    if (rho_prime < -1.0 || rho_prime > 1.0) {
        throw std::invalid_argument("rho_from_cap: rho' must lie in [-1, 1]");
    }
    return 1.0 - (1.0 - rho_prime) * std::exp(2.0 * (inner_r - outer_r));
}

T4Bound b_lower_t4(double outer_r, double inner_r, double rho_prime) {
    if (inner_r > outer_r) {
        throw std::invalid_argument("b_lower_t4: inner rate must not exceed outer rate");
    }
    if (!(inner_r >= 0.0)) throw std::invalid_argument("b_lower_t4: rates must be nonnegative");
    const double t = t_of_rate(inner_r);
    const double tau = tau_of_t(t);
    if (rho_prime < tau - kRhoTol) {
        throw std::domain_error("b_lower_t4: rho' below tau of the inner rate");
    }
    const double rho_p = std::max(rho_prime, tau);
    T4Bound result{};
    result.rho = rho_from_cap(rho_p, inner_r, outer_r);
    result.bound = inner_r - j_spectrum(t, rho_p) +
                   0.5 * std::log((1.0 + result.rho) / (1.0 + rho_p));
    return result;
}

SpectrumEnvelope envelope_t3(double r) {
    if (!(r >= 0.0)) throw std::invalid_argument("envelope_t3: rate must be nonnegative");
    SpectrumEnvelope env;
    env.rate = r;
    env.source = "t3";
    env.inner_rate = r;
    env.support_lo = tau_of_t(t_of_rate(r));
    env.support_hi = 1.0;
    env.eval = [r](double rho) { return b_lower_t3(r, rho); };
    return env;
}

SpectrumEnvelope envelope_t4(double outer_r, double inner_r) {
    if (inner_r > outer_r) {
        throw std::invalid_argument("envelope_t4: inner rate must not exceed outer rate");
    }
    if (!(inner_r >= 0.0)) throw std::invalid_argument("envelope_t4: rates must be nonnegative");
    const double tau = tau_of_t(t_of_rate(inner_r));
    SpectrumEnvelope env;
    env.rate = outer_r;
    env.source = "t4";
    env.inner_rate = inner_r;
    env.support_lo = rho_from_cap(tau, inner_r, outer_r);
    env.support_hi = 1.0;
    env.eval = [outer_r, inner_r](double rho) {
        // Invert the cap lift: rho' = 1 - (1 - rho) e^{2(outer - inner)}.
        const double rho_prime = 1.0 - (1.0 - rho) * std::exp(2.0 * (outer_r - inner_r));
        return b_lower_t4(outer_r, inner_r, rho_prime).bound;
    };
    return env;
}

AdditiveExponent rho0_argmax(const ChannelParams& p, const SpectrumEnvelope& env) {
    if (!(p.a > 0.0)) throw std::invalid_argument("rho0_argmax: A must be positive");
    if (!env.eval || !(env.support_lo <= env.support_hi)) {
        throw std::invalid_argument("rho0_argmax: envelope has empty support");
    }
    const auto objective = [&](double rho) {
        return 0.25 * p.a * (1.0 - rho) - env.eval(rho);
    };
    const double lo = env.support_lo;
    const double hi = std::min(env.support_hi, 1.0 - 1e-9);
    AdditiveExponent best{};
    if (hi <= lo) {  // degenerate support: single point
        best.rho0 = lo;
        best.value = objective(lo);
        return best;
    }
    const double rho_star = golden_max(objective, lo, hi, 1e-12);
    const double v_star = objective(rho_star);
    const double v_lo = objective(lo);
    // Smallest maximizing correlation wins ties.
    if (v_lo >= v_star - 1e-12 * (1.0 + std::fabs(v_star))) {
        best.rho0 = lo;
        best.value = v_lo;
    } else {
        best.rho0 = rho_star;
        best.value = v_star;
    }
    return best;
}

}  // namespace relfun
