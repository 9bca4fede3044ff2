#include "relfun/code_lab.hpp"

#include <cmath>
#include <limits>

#include "relfun/rng.hpp"

namespace relfun {

namespace {

void require_code_params(int n, int m, const ChannelParams& p) {
    if (n < 1) throw std::invalid_argument("gen_code: n must be >= 1");
    if (m < 1) throw std::invalid_argument("gen_code: M must be >= 1");
    if (!(p.a > 0.0) || !std::isfinite(p.a)) {
        throw std::invalid_argument("gen_code: A must be positive and finite");
    }
}

/// Rows of the lower-triangular Cholesky factor of the (m-1)x(m-1) Gram
/// matrix with unit diagonal and off-diagonal -1/(m-1), plus the negated row
/// sum, give m unit vectors with pairwise inner product exactly -1/(m-1).
std::vector<double> simplex_unit_vectors(int m) {
    const int k = m - 1;  // ambient dimension of the simplex
    std::vector<double> l(static_cast<std::size_t>(k) * k, 0.0);
    const double off = (m == 1) ? 0.0 : -1.0 / (m - 1);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = (i == j) ? 1.0 : off;
            for (int t = 0; t < j; ++t) {
                sum -= l[static_cast<std::size_t>(i) * k + t] * l[static_cast<std::size_t>(j) * k + t];
            }
            l[static_cast<std::size_t>(i) * k + j] =
                (i == j) ? std::sqrt(sum) : sum / l[static_cast<std::size_t>(j) * k + j];
        }
    }
    std::vector<double> points(static_cast<std::size_t>(m) * k, 0.0);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const double value = l[static_cast<std::size_t>(i) * k + j];
            points[static_cast<std::size_t>(i) * k + j] = value;
            points[static_cast<std::size_t>(k) * k + j] -= value;  // last point = -sum
        }
    }
    return points;
}

}  // namespace

SphericalCode gen_code(CodeKind kind, int n, int m, const ChannelParams& p, std::uint64_t seed,
                       double pair_rho) {
    require_code_params(n, m, p);
    const double radius = std::sqrt(p.a * n);
    SphericalCode code;
    code.n = n;
    code.m = m;
    code.a = p.a;
    code.kind = kind;
    code.points.assign(static_cast<std::size_t>(m) * n, 0.0);
    switch (kind) {
        case CodeKind::RandomUniform: {
            for (int i = 0; i < m; ++i) {
                double* row = code.points.data() + static_cast<std::size_t>(i) * n;
                double norm2 = 0.0;
                for (int j = 0; j < n; ++j) {
                    row[j] = rng::normal(seed, rng::kStreamGenerate, static_cast<std::uint64_t>(i),
                                         static_cast<std::uint64_t>(j));
                    norm2 += row[j] * row[j];
                }
                const double scale = radius / std::sqrt(norm2);
                for (int j = 0; j < n; ++j) row[j] *= scale;
            }
            break;
        }
        case CodeKind::Simplex: {
            if (m > n + 1) {
                throw std::invalid_argument("gen_code: simplex needs M <= n + 1");
            }
            if (m == 1) {
                code.points[0] = radius;
                break;
            }
            const std::vector<double> unit = simplex_unit_vectors(m);
            const int k = m - 1;
            for (int i = 0; i < m; ++i) {
                for (int j = 0; j < k; ++j) {
                    code.points[static_cast<std::size_t>(i) * n + j] =
                        radius * unit[static_cast<std::size_t>(i) * k + j];
                }
            }
            break;
        }
        case CodeKind::Biorthogonal: {
            if (m != 2 * n) {
                throw std::invalid_argument("gen_code: biorthogonal needs M = 2n");
            }
            for (int j = 0; j < n; ++j) {
                code.points[static_cast<std::size_t>(2 * j) * n + j] = radius;
                code.points[static_cast<std::size_t>(2 * j + 1) * n + j] = -radius;
            }
            break;
        }
        case CodeKind::Pair: {
            if (m != 2) throw std::invalid_argument("gen_code: pair needs M = 2");
            if (n < 2) throw std::invalid_argument("gen_code: pair needs n >= 2");
            if (!(pair_rho >= -1.0) || !(pair_rho <= 1.0)) {
                throw std::invalid_argument("gen_code: pair correlation must lie in [-1, 1]");
            }
            code.points[0] = radius;
            code.points[static_cast<std::size_t>(n)] = radius * pair_rho;
            code.points[static_cast<std::size_t>(n) + 1] =
                radius * std::sqrt(std::max(0.0, 1.0 - pair_rho * pair_rho));
            break;
        }
    }
    return code;
}

SpectrumHistogram spectrum_histogram(const SphericalCode& code, double bin_width) {
    if (code.m < 1 || code.n < 1) {
        throw std::invalid_argument("spectrum_histogram: empty code");
    }
    const double width =
        bin_width > 0.0 ? bin_width : 1.0 / std::sqrt(code.a * code.n);
    SpectrumHistogram hist;
    hist.bin_width = width;
    hist.rho_min = -1.0;
    hist.n = code.n;
    hist.m = code.m;
    const std::size_t bins = static_cast<std::size_t>(std::ceil(2.0 / width)) + 1;
    hist.counts.assign(bins, 0);
    const double an = code.a * code.n;
    for (int i = 0; i < code.m; ++i) {
        for (int j = 0; j < code.m; ++j) {
            if (i == j) continue;
            double dot = 0.0;
            const double* xi = code.row(i);
            const double* xj = code.row(j);
            for (int t = 0; t < code.n; ++t) dot += xi[t] * xj[t];
            const double rho = dot / an;
            // Clamp before the cast: rounding can push rho a hair outside
            // [-1, 1], and a negative value must not wrap through size_t.
            const double offset = std::max(0.0, (rho + 1.0) / width);
            auto bin = static_cast<std::size_t>(std::floor(offset));
            if (bin >= bins) bin = bins - 1;
            ++hist.counts[bin];
        }
    }
    hist.mass.resize(bins);
    hist.exponent.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        hist.mass[b] = static_cast<double>(hist.counts[b]) / code.m;
        if (hist.counts[b] > 0) {
            hist.exponent[b] = std::log(hist.mass[b]) / code.n;
        }
    }
    return hist;
}

DecodeResult decode_index(const SphericalCode& code, const std::vector<double>& y) {
    if (static_cast<int>(y.size()) != code.n) {
        throw std::invalid_argument("decode_index: received vector has wrong dimension");
    }
    DecodeResult result{};
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < code.m; ++i) {
        const double* x = code.row(i);
        double dist2 = 0.0;
        for (int t = 0; t < code.n; ++t) {
            const double d = y[t] - x[t];
            dist2 += d * d;
        }
        if (dist2 < best) {
            best = dist2;
            result.index = i;
            result.unique = true;
        } else if (dist2 == best) {
            result.unique = false;
        }
    }
    return result;
}

DecodingEstimate ml_decode_error_mc(const SphericalCode& code, std::int64_t trials,
                                    std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("ml_decode_error_mc: trials must be >= 1");
    std::int64_t errors = 0;
    std::vector<double> y(code.n);
    for (std::int64_t trial = 0; trial < trials; ++trial) {
        const auto msg = static_cast<int>(rng::below(seed, rng::kStreamMessage,
                                                     static_cast<std::uint64_t>(trial), 0,
                                                     static_cast<std::uint64_t>(code.m)));
        const double* x = code.row(msg);
        for (int j = 0; j < code.n; ++j) {
            y[j] = x[j] + rng::normal(seed, rng::kStreamNoise, static_cast<std::uint64_t>(trial),
                                      static_cast<std::uint64_t>(j));
        }
        const DecodeResult decoded = decode_index(code, y);
        if (decoded.index != msg || !decoded.unique) ++errors;
    }
    DecodingEstimate est;
    est.trials = trials;
    est.seed = seed;
    est.p_e_hat = static_cast<double>(errors) / static_cast<double>(trials);
    est.half_width =
        1.96 * std::sqrt(est.p_e_hat * (1.0 - est.p_e_hat) / static_cast<double>(trials));
    return est;
}

std::vector<EmpiricalPoint> empirical_exponent(CodeKind kind, const ChannelParams& p,
                                               double rate_target,
                                               const std::vector<int>& n_list,
                                               std::int64_t trials, std::uint64_t seed) {
    if (!(rate_target >= 0.0)) {
        throw std::invalid_argument("empirical_exponent: rate target must be nonnegative");
    }
    std::vector<EmpiricalPoint> points;
    points.reserve(n_list.size());
    for (const int n : n_list) {
        int m = 0;
        switch (kind) {
            case CodeKind::Pair:
                m = 2;
                break;
            case CodeKind::Biorthogonal:
                m = 2 * n;
                break;
            default:
                m = static_cast<int>(
                    std::llround(std::exp(rate_target * static_cast<double>(n))));
                m = std::max(1, m);
                break;
        }
        if (kind == CodeKind::Simplex && m > n + 1) {
            throw std::invalid_argument(
                "empirical_exponent: simplex cannot reach the rate target at this n");
        }
        EmpiricalPoint point;
        point.n = n;
        point.m = m;
        if (m == 1) {
            point.estimate.trials = trials;
            point.estimate.seed = seed;
            points.push_back(std::move(point));
            continue;  // a single codeword never errs; exponent is absent
        }
        const SphericalCode code = gen_code(kind, n, m, p, seed);
        point.estimate = ml_decode_error_mc(code, trials, seed);
        const double pe = point.estimate.p_e_hat;
        const double hw = point.estimate.half_width;
        if (pe > 0.0) {
            point.exponent = -std::log(pe) / n;
            point.exponent_lo = -std::log(std::min(1.0, pe + hw)) / n;
            if (pe - hw > 0.0) point.exponent_hi = -std::log(pe - hw) / n;
        } else {
            // No observed errors: rule-of-three one-sided 95% bound
            // p_e <= 3/trials, hence exponent >= -ln(3/trials)/n.
            point.exponent_lo = -std::log(3.0 / static_cast<double>(trials)) / n;
        }
        points.push_back(std::move(point));
    }
    return points;
}

double q_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace relfun
