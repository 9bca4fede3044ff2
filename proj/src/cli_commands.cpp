#include "relfun/cli_commands.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relfun/code_lab.hpp"
#include "relfun/core_functions.hpp"
#include "relfun/exponent_bounds.hpp"
#include "relfun/types.hpp"
#include "relfun/validation.hpp"

namespace relfun {

namespace {

/// to_chars-based formatter: locale-proof, deterministic across runs.
std::string format_g(double v, int precision) {
    std::array<char, 48> buf{};
    const auto res =
        std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, precision);
    return std::string(buf.data(), res.ptr);
}

/// Routes output either to the fallback stream or to a freshly truncated file.
class OutputSink {
  public:
    OutputSink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::out | std::ios::trunc);
            ok_ = file_.is_open();
            stream_ = &file_;
        }
    }
    [[nodiscard]] bool ok() const { return ok_; }
    [[nodiscard]] std::ostream& stream() { return *stream_; }

  private:
    std::ofstream file_;
    std::ostream* stream_;
    bool ok_ = true;
};

// ---------------------------------------------------------------------------
// constants
// ---------------------------------------------------------------------------

int cmd_constants(const RunConfig& cfg, const std::string& format, std::ostream& out) {
    const ChannelParams p{cfg.snr};
    const ThresholdSet th = thresholds(p);
    const std::array<std::pair<const char*, double>, 13> rows{{
        {"snr", p.a},
        {"capacity", th.capacity},
        {"r_crit", th.r_crit},
        {"r_bar1", th.r_bar1},
        {"r_bar2", th.r_bar2},
        {"tau_bar2", th.tau_bar2},
        {"r_bar3", th.r_bar3},
        {"r_low", th.r_low},
        {"a0", th.a0},
        {"a_const", th.a_const},
        {"tau_bar1", th.tau_bar1},
        {"t_bar1", th.t_bar1},
        {"t_bar2", th.t_bar2},
    }};
    if (format == "json") {
        nlohmann::json j;
        for (const auto& [key, value] : rows) j[key] = value;
        out << j.dump(2) << "\n";
    } else {
        for (const auto& [key, value] : rows) {
            out << std::left << std::setw(10) << key << " " << format_sig12(value) << "\n";
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// curve
// ---------------------------------------------------------------------------

struct CurveRow {
    double r = 0.0;
    double t1 = 0.0;   ///< tangent-line upper bound
    double t2 = 0.0;   ///< refined (min-max) upper bound
    double low = 0.0;  ///< achievability lower bound
    double esp = 0.0;  ///< sphere-packing exponent
};

std::vector<CurveRow> compute_curve(const ChannelParams& p, double rmin, double rmax, int n_points) {
    if (n_points < 2) throw std::invalid_argument("curve: --rpoints must be at least 2");
    const double c = capacity(p);
    if (rmax < 0.0) rmax = c;
    if (!(rmin >= 0.0) || !(rmax > rmin)) {
        throw std::invalid_argument("curve: need 0 <= rmin < rmax");
    }
    if (rmax > c + 1e-9 * (1.0 + c)) {
        throw std::invalid_argument("curve: rmax exceeds the channel capacity");
    }
    rmax = std::min(rmax, c);
    std::vector<CurveRow> rows;
    rows.reserve(static_cast<std::size_t>(n_points));
    const double step = (rmax - rmin) / static_cast<double>(n_points - 1);
    for (int i = 0; i < n_points; ++i) {
        const double r = (i == n_points - 1) ? rmax : rmin + step * static_cast<double>(i);
        rows.push_back({r, upper_bound_t1(r, p), upper_bound_t2(r, p), lower_bound(r, p), e_sp(r, p)});
    }
    return rows;
}

void write_curve_csv(const std::vector<CurveRow>& rows, std::ostream& os) {
    os << "R,upper_t1,upper_t2,lower,e_sp\n";
    for (const auto& row : rows) {
        os << format_sig12(row.r) << ',' << format_sig12(row.t1) << ',' << format_sig12(row.t2)
           << ',' << format_sig12(row.low) << ',' << format_sig12(row.esp) << '\n';
    }
}

void write_curve_json(const ChannelParams& p, const std::vector<CurveRow>& rows, std::ostream& os) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& row : rows) {
        points.push_back({{"r", row.r},
                          {"upper_t1", row.t1},
                          {"upper_t2", row.t2},
                          {"lower", row.low},
                          {"e_sp", row.esp}});
    }
    const nlohmann::json j{{"snr", p.a}, {"points", std::move(points)}};
    os << j.dump(2) << "\n";
}

void write_curve_svg(const ChannelParams& p, const std::vector<CurveRow>& rows, std::ostream& os) {
    constexpr double kLeft = 70.0;
    constexpr double kRight = 878.0;
    constexpr double kTop = 44.0;
    constexpr double kBottom = 546.0;
    const double rmin = rows.front().r;
    const double rmax = rows.back().r;
    double ymax = 0.0;
    for (const auto& row : rows) ymax = std::max({ymax, row.t1, row.esp});
    if (!(ymax > 0.0)) ymax = 1.0;
    ymax *= 1.04;

    const auto sx = [&](double r) { return kLeft + (r - rmin) / (rmax - rmin) * (kRight - kLeft); };
    const auto sy = [&](double v) {
        return kBottom - std::clamp(v, 0.0, ymax) / ymax * (kBottom - kTop);
    };
    const auto text = [&](double x, double y, const char* anchor, int size, const std::string& s,
                          const char* extra = "") {
        os << "  <text x=\"" << format_g(x, 6) << "\" y=\"" << format_g(y, 6) << "\" text-anchor=\""
           << anchor << "\" font-family=\"sans-serif\" font-size=\"" << size
           << "\" fill=\"#222\"" << extra << ">" << s << "</text>\n";
    };
    const auto polyline = [&](auto value, const char* color, const char* dash) {
        os << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"";
        if (dash != nullptr) os << " stroke-dasharray=\"" << dash << "\"";
        os << " points=\"";
        for (const auto& row : rows) {
            os << format_g(sx(row.r), 6) << ',' << format_g(sy(value(row)), 6) << ' ';
        }
        os << "\"/>\n";
    };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\"600\" "
          "viewBox=\"0 0 900 600\">\n";
    os << "  <rect x=\"0\" y=\"0\" width=\"900\" height=\"600\" fill=\"white\"/>\n";
    text(450.0, 26.0, "middle", 16, "Error-exponent bounds at snr " + format_g(p.a, 6));

    // Axes with ticks and numeric labels.
    os << "  <line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\""
       << kBottom << "\" stroke=\"#222\" stroke-width=\"1\"/>\n";
    os << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
       << kBottom << "\" stroke=\"#222\" stroke-width=\"1\"/>\n";
    for (int k = 0; k <= 5; ++k) {
        const double r = rmin + (rmax - rmin) * k / 5.0;
        const double x = sx(r);
        os << "  <line x1=\"" << format_g(x, 6) << "\" y1=\"" << kBottom << "\" x2=\""
           << format_g(x, 6) << "\" y2=\"" << kBottom + 6.0 << "\" stroke=\"#222\"/>\n";
        text(x, kBottom + 22.0, "middle", 12, format_g(r, 4));
        const double v = ymax * k / 5.0;
        const double y = sy(v);
        os << "  <line x1=\"" << kLeft - 6.0 << "\" y1=\"" << format_g(y, 6) << "\" x2=\"" << kLeft
           << "\" y2=\"" << format_g(y, 6) << "\" stroke=\"#222\"/>\n";
        text(kLeft - 10.0, y + 4.0, "end", 12, format_g(v, 4));
    }
    text(0.5 * (kLeft + kRight), 584.0, "middle", 13, "rate (nats per dimension)");
    text(18.0, 0.5 * (kTop + kBottom), "middle", 13, "error exponent (nats per dimension)",
         " transform=\"rotate(-90 18 295)\"");

    // Vertical markers at the analytic thresholds inside the plotted window.
    const ThresholdSet th = thresholds(p);
    const std::array<std::pair<double, const char*>, 5> marks{{{th.r_bar2, "r_bar2"},
                                                               {th.r_bar3, "r_bar3"},
                                                               {th.r_bar1, "r_bar1"},
                                                               {th.r_crit, "r_crit"},
                                                               {th.capacity, "C"}}};
    int stagger = 0;
    for (const auto& [r, label] : marks) {
        if (r < rmin - 1e-12 || r > rmax + 1e-12) continue;
        const double x = sx(r);
        os << "  <line x1=\"" << format_g(x, 6) << "\" y1=\"" << kTop << "\" x2=\"" << format_g(x, 6)
           << "\" y2=\"" << kBottom << "\" stroke=\"#999\" stroke-width=\"1\" "
              "stroke-dasharray=\"4,4\"/>\n";
        text(x + 3.0, kTop + 14.0 + 14.0 * (stagger % 3), "start", 11, label);
        ++stagger;
    }

    polyline([](const CurveRow& row) { return row.t1; }, "#c0392b", nullptr);
    polyline([](const CurveRow& row) { return row.t2; }, "#2265a5", nullptr);
    polyline([](const CurveRow& row) { return row.low; }, "#2f8f46", nullptr);
    polyline([](const CurveRow& row) { return row.esp; }, "#777777", "3,4");

    // Legend (top right).
    const std::array<std::pair<const char*, const char*>, 4> legend{{
        {"#c0392b", "upper bound (tangent)"},
        {"#2265a5", "upper bound (min-max)"},
        {"#2f8f46", "lower bound"},
        {"#777777", "sphere packing"},
    }};
    double ly = kTop + 16.0;
    for (const auto& [color, label] : legend) {
        os << "  <line x1=\"640\" y1=\"" << format_g(ly - 4.0, 6) << "\" x2=\"672\" y2=\""
           << format_g(ly - 4.0, 6) << "\" stroke=\"" << color << "\" stroke-width=\"3\"/>\n";
        text(678.0, ly, "start", 12, label);
        ly += 18.0;
    }
    os << "</svg>\n";
}

int cmd_curve(const RunConfig& cfg, const std::string& format, std::ostream& out,
              std::ostream& err) {
    const ChannelParams p{cfg.snr};
    const std::vector<CurveRow> rows = compute_curve(p, cfg.rmin, cfg.rmax, cfg.rpoints);
    OutputSink sink(cfg.out, out);
    if (!sink.ok()) {
        err << "error: cannot open output file: " << cfg.out << "\n";
        return 1;
    }
    if (format == "json") {
        write_curve_json(p, rows, sink.stream());
    } else if (format == "svg") {
        write_curve_svg(p, rows, sink.stream());
    } else {
        write_curve_csv(rows, sink.stream());
    }
    return 0;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
    const std::vector<CheckResult> checks = run_validation(cfg.perturb);
    std::size_t name_width = 0;
    for (const auto& c : checks) name_width = std::max(name_width, c.name.size());
    int failures = 0;
    for (const auto& c : checks) {
        if (!c.pass) ++failures;
        out << (c.pass ? "[PASS] " : "[FAIL] ") << std::left
            << std::setw(static_cast<int>(name_width) + 2) << c.name << " residual "
            << std::setw(13) << format_g(c.residual, 4) << " tolerance " << format_g(c.tolerance, 4)
            << "\n";
    }
    const GapMaximum gm = max_junction_gap();
    out << "largest junction gap r_crit - r_bar1: " << format_sig12(gm.max_gap) << " at snr "
        << format_sig12(gm.a_argmax) << "\n";
    out << checks.size() << " checks, " << failures << " failed\n";
    return failures == 0 ? 0 : 2;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int cmd_simulate(const RunConfig& cfg, const std::string& format, std::ostream& out,
                 std::ostream& err) {
    const ChannelParams p{cfg.snr};
    std::vector<double> rhos = cfg.rho_list;
    if (rhos.empty()) rhos = {0.75, 0.5, 0.0};

    struct Row {
        double rho, d_over_n, p_e_hat, half_width, q_oracle;
    };
    std::vector<Row> table;
    table.reserve(rhos.size());
    for (const double rho : rhos) {
        const SphericalCode code = gen_code(CodeKind::Pair, cfg.n, 2, p, cfg.seed, rho);
        const DecodingEstimate est = ml_decode_error_mc(code, cfg.trials, cfg.seed);
        const double d_over_n = 2.0 * p.a * (1.0 - rho);
        // Exact pairwise error probability: Q(distance / 2) at unit noise.
        const double q = q_tail(std::sqrt(d_over_n * static_cast<double>(cfg.n)) / 2.0);
        table.push_back({rho, d_over_n, est.p_e_hat, est.half_width, q});
    }

    OutputSink sink(cfg.out, out);
    if (!sink.ok()) {
        err << "error: cannot open output file: " << cfg.out << "\n";
        return 1;
    }
    if (format == "json") {
        nlohmann::json points = nlohmann::json::array();
        for (const auto& row : table) {
            points.push_back({{"rho", row.rho},
                              {"d_over_n", row.d_over_n},
                              {"p_e_hat", row.p_e_hat},
                              {"half_width", row.half_width},
                              {"q_oracle", row.q_oracle}});
        }
        const nlohmann::json j{{"snr", p.a},
                               {"n", cfg.n},
                               {"trials", cfg.trials},
                               {"seed", cfg.seed},
                               {"points", std::move(points)}};
        sink.stream() << j.dump(2) << "\n";
    } else {
        sink.stream() << "rho,d_over_n,p_e_hat,half_width,q_oracle\n";
        for (const auto& row : table) {
            sink.stream() << format_sig12(row.rho) << ',' << format_sig12(row.d_over_n) << ','
                          << format_sig12(row.p_e_hat) << ',' << format_sig12(row.half_width) << ','
                          << format_sig12(row.q_oracle) << '\n';
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

CodeKind parse_kind(const std::string& name) {
    if (name == "random") return CodeKind::RandomUniform;
    if (name == "simplex") return CodeKind::Simplex;
    if (name == "biorthogonal") return CodeKind::Biorthogonal;
    if (name == "pair") return CodeKind::Pair;
    throw std::invalid_argument("spectrum: unknown code kind: " + name);
}

int cmd_spectrum(const RunConfig& cfg, const std::string& format, double pair_rho,
                 double bin_width, std::ostream& out, std::ostream& err) {
    const ChannelParams p{cfg.snr};
    const CodeKind kind = parse_kind(cfg.code_kind);
    const SphericalCode code = gen_code(kind, cfg.n, cfg.m, p, cfg.seed, pair_rho);
    const SpectrumHistogram hist = spectrum_histogram(code, bin_width);

    OutputSink sink(cfg.out, out);
    if (!sink.ok()) {
        err << "error: cannot open output file: " << cfg.out << "\n";
        return 1;
    }
    if (format == "json") {
        nlohmann::json bins = nlohmann::json::array();
        for (std::size_t i = 0; i < hist.counts.size(); ++i) {
            if (hist.counts[i] == 0) continue;
            nlohmann::json bin{{"bin_lo", hist.bin_lo(i)},
                               {"bin_hi", hist.bin_hi(i)},
                               {"count", hist.counts[i]},
                               {"mass", hist.mass[i]}};
            if (hist.exponent[i].has_value()) bin["exponent"] = *hist.exponent[i];
            bins.push_back(std::move(bin));
        }
        const nlohmann::json j{{"kind", cfg.code_kind}, {"n", hist.n},
                               {"m", hist.m},          {"snr", p.a},
                               {"bin_width", hist.bin_width}, {"bins", std::move(bins)}};
        sink.stream() << j.dump(2) << "\n";
    } else {
        sink.stream() << "bin_lo,bin_hi,count,mass,exponent\n";
        for (std::size_t i = 0; i < hist.counts.size(); ++i) {
            if (hist.counts[i] == 0) continue;
            sink.stream() << format_sig12(hist.bin_lo(i)) << ',' << format_sig12(hist.bin_hi(i))
                          << ',' << hist.counts[i] << ',' << format_sig12(hist.mass[i]) << ','
                          << (hist.exponent[i].has_value() ? format_sig12(*hist.exponent[i]) : "")
                          << '\n';
        }
    }
    return 0;
}

}  // namespace

std::string format_sig12(double v) {
    return format_g(v, 12);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    std::string const_format = "text";
    std::string curve_format = "csv";
    std::string table_format = "csv";
    double pair_rho = 0.0;
    double bin_width = 0.0;

    CLI::App app{"Bounds on the reliability function of the power-constrained Gaussian channel"};
    app.name("relfun");
    app.require_subcommand(1);

    const auto add_snr = [&cfg](CLI::App* sub) {
        sub->add_option("--snr", cfg.snr, "signal-to-noise ratio A (power per dimension)")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    };

    CLI::App* c_constants =
        app.add_subcommand("constants", "print capacity, critical rate, and bound thresholds");
    add_snr(c_constants);
    c_constants->add_option("--format", const_format, "text | json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    CLI::App* c_curve =
        app.add_subcommand("curve", "sample every exponent bound over a rate grid");
    add_snr(c_curve);
    c_curve->add_option("--rmin", cfg.rmin, "left end of the rate grid")->capture_default_str();
    c_curve->add_option("--rmax", cfg.rmax, "right end of the rate grid (default: capacity)");
    c_curve->add_option("--rpoints", cfg.rpoints, "number of grid points")->capture_default_str();
    c_curve->add_option("--out", cfg.out, "output file (default: stdout)");
    c_curve->add_option("--format", curve_format, "csv | json | svg")
        ->check(CLI::IsMember({"csv", "json", "svg"}))
        ->capture_default_str();

    CLI::App* c_validate =
        app.add_subcommand("validate", "run the internal cross-check suite and report residuals");
    c_validate->add_option("--perturb", cfg.perturb,
                           "relative perturbation injected into the junction identity "
                           "(negative control; nonzero values must fail)")
        ->capture_default_str();

    CLI::App* c_simulate = app.add_subcommand(
        "simulate", "Monte Carlo maximum-likelihood decoding of two-codeword codes");
    add_snr(c_simulate);
    c_simulate->add_option("--n", cfg.n, "dimension")->check(CLI::Range(2, 1 << 20))
        ->capture_default_str();
    c_simulate->add_option("--trials", cfg.trials, "Monte Carlo trials per point")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_simulate->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    c_simulate->add_option("--rho", cfg.rho_list,
                           "codeword correlation, repeatable (default: 0.75 0.5 0)");
    c_simulate->add_option("--out", cfg.out, "output file (default: stdout)");
    c_simulate->add_option("--format", table_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    CLI::App* c_spectrum = app.add_subcommand(
        "spectrum", "exact pairwise-correlation spectrum of a generated spherical code");
    add_snr(c_spectrum);
    c_spectrum->add_option("--kind", cfg.code_kind, "random | simplex | biorthogonal | pair")
        ->check(CLI::IsMember({"random", "simplex", "biorthogonal", "pair"}))
        ->capture_default_str();
    c_spectrum->add_option("--n", cfg.n, "dimension")->check(CLI::Range(2, 1 << 20))
        ->capture_default_str();
    c_spectrum->add_option("--m", cfg.m, "number of codewords")->check(CLI::Range(2, 1 << 24))
        ->capture_default_str();
    c_spectrum->add_option("--rho", pair_rho, "correlation for the pair kind")
        ->capture_default_str();
    c_spectrum->add_option("--bin-width", bin_width,
                           "histogram bin width (default: 1/sqrt(A n))");
    c_spectrum->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    c_spectrum->add_option("--out", cfg.out, "output file (default: stdout)");
    c_spectrum->add_option("--format", table_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("relfun");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(c_constants)) return cmd_constants(cfg, const_format, out);
        if (app.got_subcommand(c_curve)) return cmd_curve(cfg, curve_format, out, err);
        if (app.got_subcommand(c_validate)) return cmd_validate(cfg, out);
        if (app.got_subcommand(c_simulate)) return cmd_simulate(cfg, table_format, out, err);
        if (app.got_subcommand(c_spectrum)) {
            return cmd_spectrum(cfg, table_format, pair_rho, bin_width, out, err);
        }
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace relfun
