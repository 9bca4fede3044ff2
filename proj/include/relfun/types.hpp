#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace relfun {

/// Rate in nats per channel use.
using Rate = double;
/// Internal curve parameter t >= 0 for the rate parametrization R(t).
using ParamT = double;
/// Normalized inner product between unit-energy codewords, in [-1, 1].
using Correlation = double;

/// Channel description: average signal-to-noise ratio per dimension (A > 0).
struct ChannelParams {
    double a = 1.0;
};

/// Thrown when an iterative solver fails to reach its tolerance.
class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Per-channel derived rate thresholds plus the universal constants of the
/// refined upper bound (which do not depend on the channel).
struct ThresholdSet {
    double capacity = 0.0;  ///< C = (1/2) ln(1 + A)
    double r_crit = 0.0;    ///< critical rate (sphere-packing slope -1 point)
    double r_bar1 = 0.0;    ///< end of the tangent branch of the first upper bound
    double r_bar3 = 0.0;    ///< end of the curved branch of the refined upper bound
    double r_low = 0.0;     ///< end of the curved branch of the lower bound
    double tau_bar1 = 0.0;  ///< correlation threshold paired with r_bar1
    double t_bar1 = 0.0;    ///< parameter value paired with r_bar1
    // Universal constants (independent of A):
    double t_bar2 = 0.0;    ///< unique root of the auxiliary derivative function
    double r_bar2 = 0.0;    ///< rate at t_bar2
    double tau_bar2 = 0.0;  ///< correlation at t_bar2
    double a_const = 0.0;   ///< (1 - tau_bar2) e^{2 r_bar2}
    double a0 = 0.0;        ///< SNR above which the refined bound separates
};

/// Which analytic bound a curve sample came from.
enum class BoundKind {
    SpherePackingClosed,
    SpherePackingNumeric,
    UpperT1,
    UpperT2,
    LowerClassical,
    StraightLine,
    Exact,
};

/// A sampled exponent curve over a rate grid.
struct BoundCurve {
    ChannelParams channel;
    BoundKind kind = BoundKind::Exact;
    std::vector<Rate> rates;
    std::vector<double> values;
};

/// Solution of the sphere-packing Lagrange conditions.
struct SpherePackingSolution {
    double lambda = 0.0;  ///< multiplier root of the defining quadratic
    double r_var = 0.0;   ///< optimal squared-radius variable
    double s_var = 0.0;   ///< companion variable s = r + A - 2A/lambda
    double r1 = 0.0;      ///< reduced radius r_var e^{-2R}
};

/// Numeric sphere-packing result: optimizer output plus the closed solution.
struct SpherePackingResult {
    SpherePackingSolution solution;
    double exponent = 0.0;
};

/// Details of the refined-bound min-max evaluation.
struct Theorem2Detail {
    double value = 0.0;
    double u_opt = 0.0;    ///< minimizing inner rate (0 means the limit candidate)
    double rho_opt = 0.0;  ///< maximizing correlation at u_opt
};

/// A lower envelope for the normalized pairwise-correlation spectrum exponent.
struct SpectrumEnvelope {
    Rate rate = 0.0;          ///< code rate the envelope certifies
    std::string source;       ///< "t3" or "t4"
    Rate inner_rate = 0.0;    ///< cap-subcode rate for "t4"; equals rate for "t3"
    double support_lo = 0.0;  ///< smallest correlation covered
    double support_hi = 1.0;  ///< largest correlation covered
    std::function<double(double)> eval;  ///< envelope value at a correlation
};

/// Argmax data for the additive error-exponent term built from an envelope.
struct AdditiveExponent {
    Correlation rho0 = 0.0;
    double value = 0.0;
};

/// Spherical cap / ring specification on the unit sphere in R^n.
struct CapSpec {
    int n = 3;             ///< ambient dimension
    double theta = 0.0;    ///< half-angle of the cap
    double delta = -1.0;   ///< ring width; negative means "use default 1/n^2"
};

/// Per-dimension coordinates of the two-codeword/received-point geometry
/// after rotating the plane spanned by the codewords onto the first two axes.
struct TripleGeometry {
    double x1 = 0.0;  ///< codeword half-difference component
    double x2 = 0.0;  ///< codeword half-sum component
    double y2 = 0.0;  ///< received-point component along the half-sum axis
    double r1 = 0.0;  ///< residual squared radius r - y2^2 outside the plane
};

/// How a spherical code was generated.
enum class CodeKind {
    RandomUniform,
    Simplex,
    Biorthogonal,
    Pair,
};

/// A code of M points on the sphere of squared radius A*n in R^n.
struct SphericalCode {
    int n = 0;
    int m = 0;
    double a = 1.0;
    CodeKind kind = CodeKind::RandomUniform;
    std::vector<double> points;  ///< row-major, m rows of n coordinates

    [[nodiscard]] const double* row(int i) const { return points.data() + static_cast<std::size_t>(i) * n; }
};

/// Histogram of pairwise correlations of a code.
struct SpectrumHistogram {
    double bin_width = 0.0;
    double rho_min = 0.0;  ///< left edge of the first bin
    std::vector<std::int64_t> counts;   ///< ordered pairs per bin
    std::vector<double> mass;           ///< counts / M
    std::vector<std::optional<double>> exponent;  ///< (1/n) ln(mass), absent for empty bins
    int n = 0;
    int m = 0;

    [[nodiscard]] double bin_lo(std::size_t i) const { return rho_min + static_cast<double>(i) * bin_width; }
    [[nodiscard]] double bin_hi(std::size_t i) const { return rho_min + static_cast<double>(i + 1) * bin_width; }
};

/// Monte-Carlo maximum-likelihood decoding estimate.
struct DecodingEstimate {
    double p_e_hat = 0.0;
    std::int64_t trials = 0;
    double half_width = 0.0;  ///< 95% normal-approximation confidence half width
    std::uint64_t seed = 0;
};

/// One validation check outcome.
struct CheckResult {
    std::string name;
    bool pass = false;
    double residual = 0.0;
    double tolerance = 0.0;
};

/// Parsed command-line configuration shared by the CLI subcommands.
struct RunConfig {
    double snr = 4.0;
    double rmin = 0.0;
    double rmax = -1.0;  ///< negative: default to capacity
    int rpoints = 201;
    std::string out;
    std::string format = "csv";  ///< csv | json | svg (curve)
    std::uint64_t seed = 1;
    std::int64_t trials = 100000;
    double perturb = 0.0;
    int n = 16;
    int m = 2;
    std::string code_kind = "pair";
    std::vector<double> rho_list;
};

}  // namespace relfun
