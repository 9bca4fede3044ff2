#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "relfun/core_functions.hpp"
#include "relfun/spectrum_bounds.hpp"
#include "relfun/types.hpp"

using namespace relfun;

namespace {
const ChannelParams kA4{4.0};
const double kRb2 = 0.23393596719472468;   // universal rate
const double kTaub2 = 0.45403062001551475;  // universal correlation
}

TEST_CASE("direct spectrum bound: boundary values") {
    const double t = t_of_rate(0.3);
    const double tau = tau_of_t(t);
    // At rho = tau_R the bound is R - ln(1 + 2 t_R); at rho = 1 it vanishes.
    CHECK(std::abs(b_lower_t3(0.3, tau) - (0.3 - std::log1p(2.0 * t))) <= 1e-13);
    CHECK(std::abs(b_lower_t3(0.3, 1.0)) <= 1e-12);
    CHECK(std::abs(b_lower_t3(kRb2, kTaub2) - 0.11850949350629114) <= 1e-13);
    // Decreasing in rho: more correlation, less spectrum mass guaranteed.
    double prev = b_lower_t3(0.3, tau);
    for (int i = 1; i <= 20; ++i) {
        const double rho = tau + (1.0 - tau) * i / 20.0;
        const double cur = b_lower_t3(0.3, rho);
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
}

TEST_CASE("direct spectrum bound: domain enforcement") {
    const double tau = tau_of_t(t_of_rate(0.3));
    CHECK_THROWS_AS((void)b_lower_t3(0.3, 0.5 * tau), std::domain_error);
    CHECK_THROWS_AS((void)b_lower_t3(-0.1, 0.9), std::invalid_argument);
}

TEST_CASE("correlation lift from a cap subcode") {
    // Identity when inner and outer rates agree.
    CHECK(rho_from_cap(0.7, 0.3, 0.3) == doctest::Approx(0.7).epsilon(1e-15));
    // Frozen composite value.
    CHECK(std::abs(rho_from_cap(kTaub2, kRb2, 0.3) - 0.52160592001465529) <= 1e-13);
    // Formula: 1 - (1 - rho') e^{2(inner - outer)} and always >= rho'.
    const double lifted = rho_from_cap(0.4, 0.2, 0.5);
    CHECK(std::abs(lifted - (1.0 - 0.6 * std::exp(-0.6))) <= 1e-15);
    CHECK(lifted >= 0.4);
}

TEST_CASE("cap-projection bound reduces to the direct bound at equal rates") {
    for (double rho : {0.55, 0.7, 0.9, 0.99}) {
        const T4Bound t4 = b_lower_t4(0.3, 0.3, rho);
        CHECK(t4.rho == rho);
        CHECK(t4.bound == b_lower_t3(0.3, rho));
    }
}

TEST_CASE("cap-projection bound: frozen composite value") {
    const T4Bound t4 = b_lower_t4(0.3, kRb2, kTaub2);
    CHECK(std::abs(t4.rho - 0.52160592001465529) <= 1e-13);
    CHECK(std::abs(t4.bound - 0.14122292620881342) <= 1e-13);
    // Decomposition: inner_r - J(t_inner, rho') + ln((1+rho)/(1+rho'))/2.
    const double direct = kRb2 - std::log1p(2.0 * t_of_rate(kRb2));
    const double lift = 0.5 * std::log((1.0 + t4.rho) / (1.0 + kTaub2));
    CHECK(std::abs(t4.bound - (direct + lift)) <= 1e-13);
}

TEST_CASE("envelopes expose their support and boundary behavior") {
    const SpectrumEnvelope e3 = envelope_t3(0.3);
    CHECK(e3.source == "t3");
    CHECK(e3.rate == 0.3);
    CHECK(e3.inner_rate == 0.3);
    CHECK(std::abs(e3.support_lo - tau_of_t(t_of_rate(0.3))) <= 1e-13);
    CHECK(e3.support_hi == 1.0);
    CHECK(std::abs(e3.eval(1.0)) <= 1e-12);
    CHECK(std::abs(e3.eval(e3.support_lo) - b_lower_t3(0.3, e3.support_lo)) <= 1e-14);

    const SpectrumEnvelope e4 = envelope_t4(0.3, kRb2);
    CHECK(e4.source == "t4");
    CHECK(e4.rate == 0.3);
    CHECK(e4.inner_rate == kRb2);
    const double tau_inner = tau_of_t(t_of_rate(kRb2));
    CHECK(std::abs(e4.support_lo - rho_from_cap(tau_inner, kRb2, 0.3)) <= 1e-13);
    CHECK(std::abs(e4.eval(1.0)) <= 1e-12);
    // The envelope value never exceeds the certifying rate.
    for (int i = 0; i <= 10; ++i) {
        const double rho = e4.support_lo + (1.0 - e4.support_lo) * i / 10.0;
        CHECK(e4.eval(rho) <= 0.3 + 1e-12);
    }
}

TEST_CASE("additive-exponent maximizer: stationarity and consistency") {
    const SpectrumEnvelope env = envelope_t3(0.3);
    const AdditiveExponent best = rho0_argmax(kA4, env);
    CHECK(best.rho0 >= env.support_lo);
    CHECK(best.rho0 <= env.support_hi);
    // Reported value matches a direct evaluation of the objective.
    const double direct = kA4.a * (1.0 - best.rho0) / 4.0 - env.eval(best.rho0);
    CHECK(std::abs(best.value - direct) <= 1e-10);
    // No grid point beats the reported maximum.
    for (int i = 0; i <= 200; ++i) {
        const double rho = env.support_lo + (env.support_hi - env.support_lo) * i / 200.0;
        CHECK(kA4.a * (1.0 - rho) / 4.0 - env.eval(rho) <= best.value + 1e-8);
    }
    // Interior optimum of the concave objective: d/drho J(t_R, rho) = A/4.
    if (best.rho0 > env.support_lo + 1e-9 && best.rho0 < 1.0 - 1e-9) {
        CHECK(std::abs(j_partial_rho(t_of_rate(0.3), best.rho0) - kA4.a / 4.0) <= 1e-5);
    }
}

TEST_CASE("cap projection improves the additive exponent") {
    // For strong channels, projecting to a cap subcode at the universal rate
    // gives a strictly smaller certified exponent than the direct envelope.
    for (double a : {4.0, 10.0}) {
        const ChannelParams p{a};
        const ThresholdSet th = thresholds(p);
        const double r = 0.5 * (th.r_bar2 + th.r_bar3);
        const double direct = rho0_argmax(p, envelope_t3(r)).value;
        double best = direct;
        for (int i = 0; i <= 10; ++i) {
            const double inner = th.r_bar2 + (r - th.r_bar2) * i / 10.0;
            best = std::min(best, rho0_argmax(p, envelope_t4(r, inner)).value);
        }
        CHECK(best < direct);
    }
}
