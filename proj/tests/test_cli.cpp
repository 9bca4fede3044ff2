#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "relfun/cli_commands.hpp"

using namespace relfun;

namespace {

struct CliRun {
    int exit_code = 0;
    std::string out;
    std::string err;
};

CliRun run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<double> split_csv_row(const std::string& row) {
    std::vector<double> values;
    std::istringstream in(row);
    std::string cell;
    while (std::getline(in, cell, ',')) values.push_back(std::stod(cell));
    return values;
}

}  // namespace

TEST_CASE("number formatting: twelve significant digits, locale-free") {
    CHECK(format_sig12(0.48121182505960345) == "0.48121182506");
    CHECK(format_sig12(2.0) == "2");
    CHECK(format_sig12(0.0023388674905236329) == "0.00233886749052");
    CHECK(format_sig12(-1.0 / 3.0) == "-0.333333333333");
}

TEST_CASE("constants: text output carries the snr-4 threshold family") {
    const CliRun res = run({"constants", "--snr", "4"});
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("capacity   0.804718956217") != std::string::npos);
    CHECK(res.out.find("r_crit     0.48121182506") != std::string::npos);
    CHECK(res.out.find("r_bar1     0.416209639193") != std::string::npos);
    CHECK(res.out.find("r_bar2     0.233935967195") != std::string::npos);
    CHECK(res.out.find("tau_bar2   0.454030620016") != std::string::npos);
    CHECK(res.out.find("r_bar3     0.412551599542") != std::string::npos);
    CHECK(res.out.find("a0         2.28772224618") != std::string::npos);
}

TEST_CASE("constants: json output parses and matches") {
    const CliRun res = run({"constants", "--snr", "4", "--format", "json"});
    CHECK(res.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(res.out);
    CHECK(std::abs(j.at("capacity").get<double>() - 0.80471895621705019) <= 1e-14);
    CHECK(std::abs(j.at("r_crit").get<double>() - 0.48121182505960345) <= 1e-14);
    CHECK(std::abs(j.at("t_bar2").get<double>() - 0.06117599455619116) <= 1e-12);
    CHECK(std::abs(j.at("a_const").get<double>() - 0.87169084713681751) <= 1e-12);
}

TEST_CASE("constants: invalid snr is a usage error") {
    CHECK(run({"constants", "--snr", "-1"}).exit_code == 1);
    CHECK(run({"constants", "--snr", "0"}).exit_code == 1);
    CHECK(run({"constants", "--snr", "pickle"}).exit_code == 1);
}

TEST_CASE("top level: help succeeds, missing subcommand fails") {
    const CliRun help = run({"--help"});
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("constants") != std::string::npos);
    CHECK(run({}).exit_code == 1);
    CHECK(run({"frobnicate"}).exit_code == 1);
}

TEST_CASE("curve: csv header, grid size, and endpoint rows") {
    const CliRun res = run({"curve", "--snr", "4"});
    CHECK(res.exit_code == 0);
    const auto lines = lines_of(res.out);
    REQUIRE(lines.size() == 202);  // header + default 201 points
    CHECK(lines[0] == "R,upper_t1,upper_t2,lower,e_sp");
    const auto first = split_csv_row(lines[1]);
    REQUIRE(first.size() == 5);
    CHECK(first[0] == 0.0);
    CHECK(first[1] == 1.0);
    CHECK(first[2] == 1.0);
    CHECK(first[3] == 1.0);
    CHECK(first[4] == 2.0);
    const auto last = split_csv_row(lines.back());
    CHECK(std::abs(last[0] - 0.80471895621705019) <= 1e-11);
    CHECK(std::abs(last[1]) <= 1e-11);
    CHECK(std::abs(last[2]) <= 1e-11);
    CHECK(std::abs(last[3]) <= 1e-11);
    CHECK(std::abs(last[4]) <= 1e-11);
}

TEST_CASE("curve: deterministic byte-for-byte") {
    const CliRun a = run({"curve", "--snr", "2.5", "--rpoints", "64"});
    const CliRun b = run({"curve", "--snr", "2.5", "--rpoints", "64"});
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("curve: svg output is a self-contained plot") {
    const CliRun res = run({"curve", "--snr", "4", "--format", "svg"});
    CHECK(res.exit_code == 0);
    CHECK(res.out.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\"", 0) == 0);
    CHECK(res.out.find("width=\"900\" height=\"600\"") != std::string::npos);
    std::size_t polylines = 0;
    for (std::size_t pos = res.out.find("<polyline"); pos != std::string::npos;
         pos = res.out.find("<polyline", pos + 1)) {
        ++polylines;
    }
    CHECK(polylines == 4);
    // One dashed marker per threshold: r_bar2, r_bar3, r_bar1, r_crit, C.
    for (const char* label : {">r_bar2<", ">r_bar3<", ">r_bar1<", ">r_crit<", ">C<"}) {
        CHECK(res.out.find(label) != std::string::npos);
    }
    std::size_t url_refs = 0;
    for (std::size_t pos = res.out.find("http"); pos != std::string::npos;
         pos = res.out.find("http", pos + 1)) {
        ++url_refs;
    }
    CHECK(url_refs == 1);  // only the xmlns declaration; no external resources
    CHECK(res.out.find("</svg>") != std::string::npos);
}

TEST_CASE("curve: json output parses with aligned columns") {
    const CliRun res = run({"curve", "--snr", "4", "--rpoints", "5", "--format", "json"});
    CHECK(res.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(res.out);
    CHECK(j.at("snr").get<double>() == 4.0);
    REQUIRE(j.at("points").size() == 5);
    CHECK(j.at("points")[0].at("upper_t1").get<double>() == 1.0);
    CHECK(j.at("points")[0].at("e_sp").get<double>() == 2.0);
}

TEST_CASE("curve: usage errors") {
    CHECK(run({"curve", "--snr", "4", "--rpoints", "1"}).exit_code == 1);
    CHECK(run({"curve", "--snr", "4", "--rmax", "5"}).exit_code == 1);      // beyond capacity
    CHECK(run({"curve", "--snr", "4", "--rmin", "-0.2"}).exit_code == 1);
    CHECK(run({"curve", "--snr", "4", "--rmin", "0.5", "--rmax", "0.2"}).exit_code == 1);
    CHECK(run({"curve", "--snr", "4", "--format", "yaml"}).exit_code == 1);
    const CliRun bad_path = run({"curve", "--snr", "4", "--out", "/nonexistent-dir/x.csv"});
    CHECK(bad_path.exit_code == 1);
    CHECK(bad_path.err.find("cannot open") != std::string::npos);
}

TEST_CASE("curve: writes the requested output file") {
    const std::string path = "cli_curve_test_output.csv";
    const CliRun res = run({"curve", "--snr", "4", "--rpoints", "8", "--out", path});
    CHECK(res.exit_code == 0);
    CHECK(res.out.empty());
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "R,upper_t1,upper_t2,lower,e_sp");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 8);
    in.close();
    std::remove(path.c_str());
}

TEST_CASE("validate: clean run passes, perturbation is caught") {
    const CliRun clean = run({"validate"});
    CHECK(clean.exit_code == 0);
    CHECK(clean.out.find("[FAIL]") == std::string::npos);
    CHECK(clean.out.find("[PASS] core/junction-identity") != std::string::npos);
    CHECK(clean.out.find(", 0 failed") != std::string::npos);
    CHECK(clean.out.find("largest junction gap r_crit - r_bar1: 0.0686602255") !=
          std::string::npos);

    const CliRun skewed = run({"validate", "--perturb", "1e-3"});
    CHECK(skewed.exit_code == 2);
    CHECK(skewed.out.find("[FAIL] core/junction-identity") != std::string::npos);
}

TEST_CASE("simulate: csv output against the pairwise tail oracle") {
    const CliRun res = run({"simulate", "--snr", "1", "--n", "16", "--trials", "4000",
                            "--seed", "5", "--rho", "0.5", "--rho", "0"});
    CHECK(res.exit_code == 0);
    const auto lines = lines_of(res.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "rho,d_over_n,p_e_hat,half_width,q_oracle");
    const auto row1 = split_csv_row(lines[1]);
    REQUIRE(row1.size() == 5);
    CHECK(row1[0] == 0.5);
    CHECK(row1[1] == 1.0);  // 2 A (1 - rho)
    CHECK(std::abs(row1[4] - 0.022750131948179207) <= 1e-13);
    CHECK(std::abs(row1[2] - row1[4]) <= 4.0 * std::sqrt(row1[4] * (1 - row1[4]) / 4000.0));
    const auto row2 = split_csv_row(lines[2]);
    CHECK(row2[0] == 0.0);
    CHECK(row2[1] == 2.0);
    CHECK(std::abs(row2[4] - 0.0023388674905236329) <= 1e-14);
}

TEST_CASE("simulate: default correlation sweep and determinism") {
    const CliRun a = run({"simulate", "--snr", "1", "--n", "8", "--trials", "500", "--seed", "2"});
    CHECK(a.exit_code == 0);
    const auto lines = lines_of(a.out);
    REQUIRE(lines.size() == 4);  // header + rho in {0.75, 0.5, 0}
    CHECK(split_csv_row(lines[1])[0] == 0.75);
    CHECK(split_csv_row(lines[2])[0] == 0.5);
    CHECK(split_csv_row(lines[3])[0] == 0.0);
    const CliRun b = run({"simulate", "--snr", "1", "--n", "8", "--trials", "500", "--seed", "2"});
    CHECK(a.out == b.out);
    const CliRun c = run({"simulate", "--snr", "1", "--n", "8", "--trials", "500", "--seed", "3"});
    CHECK(a.out != c.out);
}

TEST_CASE("simulate: usage errors") {
    CHECK(run({"simulate", "--trials", "-5"}).exit_code == 1);
    CHECK(run({"simulate", "--n", "1"}).exit_code == 1);
    CHECK(run({"simulate", "--rho", "1.5"}).exit_code == 1);  // generator rejects it
}

TEST_CASE("spectrum: simplex concentrates on one csv row") {
    const CliRun res = run({"spectrum", "--snr", "4", "--kind", "simplex", "--n", "8",
                            "--m", "9"});
    CHECK(res.exit_code == 0);
    const auto lines = lines_of(res.out);
    REQUIRE(lines.size() == 2);  // header + the single occupied bin
    CHECK(lines[0] == "bin_lo,bin_hi,count,mass,exponent");
    const auto row = split_csv_row(lines[1]);
    REQUIRE(row.size() == 5);
    CHECK(row[0] <= -1.0 / 8.0);
    CHECK(row[1] > -1.0 / 8.0);
    CHECK(row[2] == 72.0);
    CHECK(row[3] == 8.0);
    CHECK(std::abs(row[4] - std::log(8.0) / 8.0) <= 1e-11);
}

TEST_CASE("spectrum: json bins carry the same content") {
    const CliRun res = run({"spectrum", "--snr", "4", "--kind", "biorthogonal", "--n", "16",
                            "--m", "32", "--format", "json"});
    CHECK(res.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(res.out);
    CHECK(j.at("n").get<int>() == 16);
    CHECK(j.at("m").get<int>() == 32);
    std::int64_t total = 0;
    for (const auto& bin : j.at("bins")) total += bin.at("count").get<std::int64_t>();
    CHECK(total == 32 * 31);
}

TEST_CASE("spectrum: deterministic for random codes, errors for bad shapes") {
    const CliRun a = run({"spectrum", "--kind", "random", "--n", "12", "--m", "40",
                          "--seed", "6"});
    const CliRun b = run({"spectrum", "--kind", "random", "--n", "12", "--m", "40",
                          "--seed", "6"});
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(run({"spectrum", "--kind", "unicorn"}).exit_code == 1);
    CHECK(run({"spectrum", "--kind", "pair", "--m", "3"}).exit_code == 1);
    CHECK(run({"spectrum", "--kind", "simplex", "--n", "8", "--m", "10"}).exit_code == 1);
}

TEST_CASE("csv cells never use locale-dependent separators") {
    const CliRun res = run({"curve", "--snr", "4", "--rpoints", "33"});
    CHECK(res.exit_code == 0);
    CHECK(res.out.find(';') == std::string::npos);
    CHECK(res.out.find(' ') == std::string::npos);
    for (const auto& line : lines_of(res.out)) {
        CHECK(std::count(line.begin(), line.end(), ',') == 4);
    }
}
