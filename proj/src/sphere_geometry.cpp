#include "relfun/sphere_geometry.hpp"

#include <cmath>
#include <limits>

#include "relfun/quadrature.hpp"

namespace relfun {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void require_snr(const ChannelParams& p, const char* what) {
    if (!(p.a > 0.0) || !std::isfinite(p.a)) {
        throw std::invalid_argument(std::string(what) + ": A must be positive and finite");
    }
}

/// ln integral of (sin u / sin theta)^{n-2} du over [lo, theta], plus the
/// normalization (n-2) ln sin theta, i.e. ln of the raw sin-power integral
/// computed without underflow.
double sin_power_integral_log(int n, double lo, double theta) {
    const double sin_theta = std::sin(theta);
    const double norm = adaptive_simpson(
        [n, sin_theta](double u) { return std::pow(std::sin(u) / sin_theta, n - 2); }, lo, theta,
        1e-12);
    return (n - 2) * std::log(sin_theta) + std::log(norm);
}

}  // namespace

double sphere_area_log(int n, double radius) {
    if (n < 1) throw std::invalid_argument("sphere_area_log: n must be >= 1");
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw std::invalid_argument("sphere_area_log: radius must be positive");
    }
    return std::log(static_cast<double>(n)) + 0.5 * n * std::log(kPi) +
           (n - 1) * std::log(radius) - std::lgamma(0.5 * n + 1.0);
}

double cap_area_log(const CapSpec& spec) {
    if (spec.n < 2) throw std::invalid_argument("cap_area_log: n must be >= 2");
    if (!(spec.theta > 0.0) || spec.theta >= 0.5 * kPi) {
        throw std::invalid_argument(
            "cap_area_log: theta must lie in (0, pi/2); the closed form is singular at pi/2");
    }
    const int n = spec.n;
    return 0.5 * (n - 1) * std::log(kPi) + (n - 1) * std::log(std::sin(spec.theta)) -
           std::lgamma(0.5 * (n + 1)) - std::log(std::cos(spec.theta));
}

double ring_area_log(const CapSpec& spec) {
    if (spec.n < 2) throw std::invalid_argument("ring_area_log: n must be >= 2");
    if (!(spec.theta > 0.0) || spec.theta > 0.5 * kPi) {
        throw std::invalid_argument("ring_area_log: theta must lie in (0, pi/2]");
    }
    const int n = spec.n;
    const double delta = spec.delta < 0.0 ? 1.0 / (static_cast<double>(n) * n) : spec.delta;
    if (!(delta > 0.0)) throw std::invalid_argument("ring_area_log: delta must be positive");
    const double lo = std::max(0.0, spec.theta - delta);
    // |S^{n-2}| = (n-1) pi^{(n-1)/2} / Gamma((n+1)/2)
    const double prefactor_log = std::log(static_cast<double>(n - 1)) +
                                 0.5 * (n - 1) * std::log(kPi) - std::lgamma(0.5 * (n + 1));
    return prefactor_log + sin_power_integral_log(n, lo, spec.theta);
}

bool cap_accuracy_regime(const CapSpec& spec) {
    return spec.n >= 2 && spec.theta >= 1.0 / spec.n;
}

double z_of(double s, double r, double rho, const ChannelParams& p) {
    require_snr(p, "z_of");
    if (!(rho > -1.0)) throw std::invalid_argument("z_of: rho must exceed -1");
    const double d = p.a + r - s;
    return r - d * d / (2.0 * p.a * (1.0 + rho));
}

std::pair<double, double> opt_sr(double rho, const ChannelParams& p) {
    require_snr(p, "opt_sr");
    if (!(rho > -1.0) || rho > 1.0) {
        throw std::invalid_argument("opt_sr: rho must lie in (-1, 1]");
    }
    return {0.5 * p.a * (1.0 - rho) + 1.0, 0.5 * p.a * (1.0 + rho) + 1.0};
}

TripleGeometry triple_coordinates(const ChannelParams& p, double rho, double s, double r) {
    require_snr(p, "triple_coordinates");
    if (!(rho > -1.0) || !(rho < 1.0)) {
        throw std::invalid_argument("triple_coordinates: rho must lie in (-1, 1)");
    }
    const double a = p.a;
    const double rad1 = 0.5 * a * (1.0 - rho);
    const double rad2 = 0.5 * a * (1.0 + rho);
    if (rad1 < 0.0 || rad2 < 0.0) {
        throw std::invalid_argument("triple_coordinates: negative radicand from rho outside [-1,1]");
    }
    TripleGeometry g{};
    g.x1 = std::sqrt(rad1);
    g.x2 = std::sqrt(rad2);
    g.y2 = (a + r - s) / std::sqrt(2.0 * a * (1.0 + rho));
    g.r1 = z_of(s, r, rho, p);
    return g;
}

std::int64_t lemma4_bound(int n, double mu) {
    if (n < 1) throw std::invalid_argument("lemma4_bound: n must be >= 1");
    if (!(mu >= 0.0) || !(mu < 1.0)) {
        throw std::invalid_argument("lemma4_bound: mu must lie in [0, 1)");
    }
    const double nd = static_cast<double>(n);
    const double log_bound = std::log(2.0) + 1.5 * std::log(nd) - 0.5 * nd * std::log1p(-mu);
    if (log_bound >= 62.0 * std::log(2.0)) return std::numeric_limits<std::int64_t>::max();
    const double bound = 2.0 * std::pow(nd, 1.5) * std::pow(1.0 - mu, -0.5 * nd);
    return static_cast<std::int64_t>(std::floor(bound));
}

double rankin_bound(int n, double phi) {
    if (n < 2) throw std::invalid_argument("rankin_bound: n must be >= 2");
    if (!(phi > 0.0) || !(phi < 0.25 * kPi)) {
        throw std::domain_error("rankin_bound: phi must lie in (0, pi/4)");
    }
    const double sin_beta = std::sqrt(2.0) * std::sin(phi);
    const double beta = std::asin(sin_beta);
    const double cos_beta = std::cos(beta);
    // psi = f cos(beta) / sin^{n-1}(beta) with the integrand normalized by
    // sin^{n-2}(beta) so it never underflows; psi < 1 always.
    const double integral_norm = adaptive_simpson(
        [n, sin_beta](double z) { return std::pow(std::sin(z) / sin_beta, n - 2); }, 0.0, beta,
        1e-12);
    const double psi = (n - 1) * (cos_beta / sin_beta) * integral_norm;
    const double log_m = std::log(static_cast<double>(n - 1)) + 0.5 * std::log(kPi) +
                         std::lgamma(0.5 * (n - 1)) - std::log(2.0) - std::lgamma(0.5 * n) +
                         std::log(sin_beta) + std::log(sin_beta / cos_beta) -
                         (n - 1) * std::log(sin_beta) - std::log1p(-psi);
    return log_m > 700.0 ? std::numeric_limits<double>::infinity() : std::exp(log_m);
}

bool rankin_regime(int n, double phi) {
    if (n < 2 || !(phi > 0.0) || !(phi < 0.25 * kPi)) return false;
    const double sin_beta = std::sqrt(2.0) * std::sin(phi);
    const double tan2 = sin_beta * sin_beta / (1.0 - sin_beta * sin_beta);
    return tan2 < n + 1.0;
}

bool lemma1_check(const ChannelParams& p, double rho, double s, double r) {
    require_snr(p, "lemma1_check");
    if (!(rho >= 0.0) || rho > 1.0) {
        throw std::invalid_argument("lemma1_check: rho must lie in [0, 1]");
    }
    if (r < 0.0) throw std::invalid_argument("lemma1_check: r must be nonnegative");
    return p.a + r - s >= 2.0 * std::sqrt(p.a * r * rho);
}

std::optional<std::int64_t> lemma2_cardinality_bound(int n, double rho, double slack, int m) {
    if (n < 1) throw std::invalid_argument("lemma2_cardinality_bound: n must be >= 1");
    if (!(rho < 1.0)) throw std::invalid_argument("lemma2_cardinality_bound: rho must be < 1");
    if (m < 2) throw std::invalid_argument("lemma2_cardinality_bound: m must be >= 2");
    if (!(slack >= 0.0)) throw std::invalid_argument("lemma2_cardinality_bound: slack must be >= 0");
    const double mu = 2.0 * (slack + 1.0 / m) / (1.0 - rho);
    if (mu >= 1.0) return std::nullopt;
    const std::int64_t tail = lemma4_bound(n, std::max(0.0, mu));
    if (tail > std::numeric_limits<std::int64_t>::max() - m) {
        return std::numeric_limits<std::int64_t>::max();
    }
    return m + tail;
}

std::optional<std::pair<int, std::int64_t>> lemma2_best_m(int n, double rho, double slack,
                                                          int m_max) {
    if (m_max < 2) throw std::invalid_argument("lemma2_best_m: m_max must be >= 2");
    std::optional<std::pair<int, std::int64_t>> best;
    for (int m = 2; m <= m_max; ++m) {
        const auto bound = lemma2_cardinality_bound(n, rho, slack, m);
        if (bound && (!best || *bound < best->second)) best = {m, *bound};
    }
    return best;
}

}  // namespace relfun
