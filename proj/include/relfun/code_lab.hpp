#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "relfun/types.hpp"

namespace relfun {

/// Build a spherical code of M points with squared norm A*n in R^n.
///   RandomUniform: normalized independent standard normal vectors.
///   Simplex: M <= n+1 points with pairwise correlation -1/(M-1).
///   Biorthogonal: M = 2n points, +/- the scaled coordinate axes.
///   Pair: M = 2 points at correlation pair_rho (needs n >= 2).
/// Deterministic given the seed.
[[nodiscard]] SphericalCode gen_code(CodeKind kind, int n, int m, const ChannelParams& p,
                                     std::uint64_t seed, double pair_rho = 0.0);

/// Exact pairwise-correlation histogram: ordered pairs (i != j) of
/// rho_ij = (x_i, x_j)/(A n) binned into [lo, lo + width) intervals covering
/// [-1, 1], counts normalized by 1/M (total mass M-1). bin_width <= 0 selects
/// the default 1/sqrt(A n). The per-bin exponent ln(mass)/n is absent for
/// empty bins.
[[nodiscard]] SpectrumHistogram spectrum_histogram(const SphericalCode& code,
                                                   double bin_width = 0.0);

/// Minimum-distance decoding of one received vector; ties resolve to the
/// lowest index and are reported as non-unique.
struct DecodeResult {
    int index = 0;
    bool unique = true;
};
[[nodiscard]] DecodeResult decode_index(const SphericalCode& code, const std::vector<double>& y);

/// Monte-Carlo maximum-likelihood decoding error estimate: uniform messages,
/// independent standard normal noise per coordinate, minimum-distance
/// decoding; a trial is an error unless the true index is the unique
/// minimizer. Every noise coordinate is a pure function of
/// (seed, trial, coordinate), so results are reproducible and order-free.
[[nodiscard]] DecodingEstimate ml_decode_error_mc(const SphericalCode& code, std::int64_t trials,
                                                  std::uint64_t seed);

/// Empirical reliability exponent -ln(p_e)/n for a family of block lengths.
struct EmpiricalPoint {
    int n = 0;
    int m = 0;
    std::optional<double> exponent;     ///< absent when no errors were observed
    double exponent_lo = 0.0;           ///< one-sided lower confidence value
    std::optional<double> exponent_hi;  ///< absent when the interval is unbounded
    DecodingEstimate estimate;
};
[[nodiscard]] std::vector<EmpiricalPoint> empirical_exponent(CodeKind kind,
                                                             const ChannelParams& p,
                                                             double rate_target,
                                                             const std::vector<int>& n_list,
                                                             std::int64_t trials,
                                                             std::uint64_t seed);

/// Gaussian upper-tail probability Q(x) = P(N(0,1) > x).
[[nodiscard]] double q_tail(double x);

}  // namespace relfun
