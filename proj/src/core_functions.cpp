#include "relfun/core_functions.hpp"

#include <cmath>
#include <limits>

#include "relfun/rootfind.hpp"

namespace relfun {

namespace {

void require_finite_positive(double a, const char* what) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw std::invalid_argument(std::string(what) + " must be positive and finite");
    }
}

/// g(R,A) = (sqrt(A w) + sqrt(A w + 4)) / 2 with w = 1 - e^{-2R}.
double g_of(double r, double a) {
    const double aw = a * -std::expm1(-2.0 * r);
    return 0.5 * (std::sqrt(aw) + std::sqrt(aw + 4.0));
}

/// D'(t) = -1/(t(1+t)) + (1+2t)/(4 (t(1+t))^{3/2}) + 2/(1+2t)^2.
double d_prime(double t) {
    const double u = t * (1.0 + t);
    return -1.0 / u + (1.0 + 2.0 * t) / (4.0 * u * std::sqrt(u)) +
           2.0 / ((1.0 + 2.0 * t) * (1.0 + 2.0 * t));
}

struct UniversalConstants {
    double t_bar2, r_bar2, tau_bar2, a_const, a0;
};

/// Channel-independent constants: the root t_bar2 of D, its rate and
/// correlation, the branch constant a = (1 - tau_bar2) e^{2 r_bar2}, and the
/// crossover power a0 where r_bar1(A) = r_bar2.
const UniversalConstants& universal() {
    static const UniversalConstants u = [] {
        UniversalConstants c{};
        c.t_bar2 = newton_bracketed(
            [](double t) { return std::pair{d_of_t(t), d_prime(t)}; }, 0.06, 1e-4, 1.0, 1e-15);
        c.r_bar2 = rate_of_t(c.t_bar2);
        c.tau_bar2 = tau_of_t(c.t_bar2);
        c.a_const = (1.0 - c.tau_bar2) * std::exp(2.0 * c.r_bar2);
        c.a0 = bisect(
            [&c](double a) {
                const double t1 = (std::sqrt(2.0 + std::sqrt(4.0 + a * a)) - 2.0) / 4.0;
                return rate_of_t(t1) - c.r_bar2;
            },
            0.1, 10.0, 1e-14);
        return c;
    }();
    return u;
}

}  // namespace

double rate_of_t(double t) {
    if (t < 0.0 || !std::isfinite(t)) {
        throw std::invalid_argument("rate_of_t: t must be nonnegative and finite");
    }
    if (t == 0.0) return 0.0;
    return (1.0 + t) * std::log1p(t) - t * std::log(t);
}

double t_of_rate(double r) {
    if (r < 0.0 || !std::isfinite(r)) {
        throw std::invalid_argument("t_of_rate: rate must be nonnegative and finite");
    }
    if (r == 0.0) return 0.0;
    double hi = std::exp(r);
    int grow = 0;
    while (rate_of_t(hi) < r) {
        hi *= 2.0;
        if (++grow > 80) throw ConvergenceError("t_of_rate: bracket growth failed");
    }
    // R'(t) = ln((1+t)/t) > 0, so R - r is increasing through its root.
    return newton_bracketed(
        [r](double t) {
            return std::pair{rate_of_t(t) - r, std::log((1.0 + t) / t)};
        },
        0.5 * hi, 0.0, hi, 1e-16);
}

double tau_of_t(double t) {
    if (t < 0.0 || !std::isfinite(t)) {
        throw std::invalid_argument("tau_of_t: t must be nonnegative and finite");
    }
    if (t == 0.0) return 0.0;
    return 2.0 * std::sqrt(t * (1.0 + t)) / (1.0 + 2.0 * t);
}

double capacity(const ChannelParams& p) {
    require_finite_positive(p.a, "capacity: A");
    return 0.5 * std::log1p(p.a);
}

double r_crit(const ChannelParams& p) {
    require_finite_positive(p.a, "r_crit: A");
    const double a = p.a;
    return 0.5 * std::log(0.25 * (2.0 + a + std::sqrt(a * a + 4.0)));
}

double e_sp(double r, const ChannelParams& p) {
    require_finite_positive(p.a, "e_sp: A");
    const double c = capacity(p);
    if (r < 0.0 || r > c * (1.0 + 1e-12) + 1e-15) {
        throw std::invalid_argument("e_sp: rate must lie in [0, capacity]");
    }
    r = std::min(r, c);
    const double a = p.a;
    const double aw = a * -std::expm1(-2.0 * r);
    const double g = g_of(r, a);
    const double value = 0.5 * a - 0.5 * std::sqrt(aw) * g - std::log(g) + r;
    return value < 0.0 ? 0.0 : value;  // exact zero at r = C up to rounding
}

ThresholdSet thresholds(const ChannelParams& p) {
    require_finite_positive(p.a, "thresholds: A");
    const double a = p.a;
    const UniversalConstants& u = universal();
    ThresholdSet s{};
    s.capacity = capacity(p);
    s.r_crit = r_crit(p);
    const double root = std::sqrt(4.0 + a * a);
    s.t_bar1 = (std::sqrt(2.0 + root) - 2.0) / 4.0;
    s.tau_bar1 = a / (2.0 + root);
    s.r_bar1 = rate_of_t(s.t_bar1);
    s.t_bar2 = u.t_bar2;
    s.r_bar2 = u.r_bar2;
    s.tau_bar2 = u.tau_bar2;
    s.a_const = u.a_const;
    s.a0 = u.a0;
    s.r_bar3 = s.r_crit + u.r_bar2 + 0.5 * std::log1p(-u.tau_bar2);
    s.r_low = 0.5 * std::log(0.25 * (2.0 + root));
    return s;
}

double d_of_t(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("d_of_t: t must be positive (singular at 0)");
    }
    const double u = t * (1.0 + t);
    return std::log((1.0 + t) / t) - 0.5 / std::sqrt(u) - 1.0 / (1.0 + 2.0 * t);
}

int d_sign_changes(double lo, double hi, int grid) {
    if (!(lo > 0.0) || !(hi > lo) || grid < 2) {
        throw std::invalid_argument("d_sign_changes: need 0 < lo < hi and grid >= 2");
    }
    int changes = 0;
    double prev = d_of_t(lo);
    for (int i = 1; i < grid; ++i) {
        const double t = lo + (hi - lo) * static_cast<double>(i) / (grid - 1);
        const double cur = d_of_t(t);
        if ((prev < 0.0 && cur >= 0.0) || (prev >= 0.0 && cur < 0.0)) ++changes;
        prev = cur;
    }
    return changes;
}

namespace {

/// q(t, rho) = rho + sqrt((1+2t)^2 rho^2 - 4 t (1+t)), with a relative clamp
/// for discriminants that are negative only by rounding at rho ~= tau(t).
double q_of(double t, double rho) {
    const double b = (1.0 + 2.0 * t) * rho;
    double disc = b * b - 4.0 * t * (1.0 + t);
    if (disc < 0.0) {
        const double scale = b * b + 4.0 * t * (1.0 + t);
        if (disc >= -1e-12 * scale) {
            disc = 0.0;
        } else {
            throw std::domain_error("j_spectrum: rho below tau(t)");
        }
    }
    return rho + std::sqrt(disc);
}

}  // namespace

double j_spectrum(double t, double rho) {
    if (t < 0.0 || !std::isfinite(t)) {
        throw std::invalid_argument("j_spectrum: t must be nonnegative and finite");
    }
    if (t == 0.0) return 0.0;
    if (rho < 0.0) throw std::domain_error("j_spectrum: rho below tau(t)");
    const double q = q_of(t, rho);
    return (1.0 + 2.0 * t) * std::log(2.0 * t * rho + q) - std::log(q) -
           t * std::log(4.0 * t * (1.0 + t));
}

double j_partial_rho(double t, double rho) {
    if (t < 0.0 || !std::isfinite(t)) {
        throw std::invalid_argument("j_partial_rho: t must be nonnegative and finite");
    }
    if (t == 0.0) return 0.0;
    if (rho < 0.0) throw std::domain_error("j_partial_rho: rho below tau(t)");
    return 4.0 * t * (1.0 + t) / q_of(t, rho);
}

double j_partial_t(double t, double rho) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("j_partial_t: t must be positive");
    }
    if (rho < 0.0) throw std::domain_error("j_partial_t: rho below tau(t)");
    const double q = q_of(t, rho);
    return 2.0 * std::log(2.0 * t * rho + q) - std::log(4.0 * t * (1.0 + t));
}

}  // namespace relfun
