#include "polarsim/output.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace polarsim;

namespace {

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<std::string> cells(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else cur += ch;
    }
    out.push_back(cur);
    return out;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

RunConfig small_config(const char* model, double mass)
{
    RunConfig c = parse_config_text(std::string(R"({"model": ")") + model + R"(", "mass": )" +
                                     std::to_string(mass) + R"(, "t_end": 0.5, "z_max": 8, "n_cells": 40})");
    return c;
}

} // namespace

TEST_CASE("format_number writes 17 significant digits")
{
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(-1.0 / 3.0) == "-0.33333333333333331");
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int k = 0; k < 1000; ++k) {
        const double x = u(rng) * std::pow(10.0, static_cast<int>(k % 40) - 20);
        CHECK(std::stod(format_number(x)) == x);
    }
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("series csv layout")
{
    DiagnosticsRecord a;
    a.t = 0.1;
    a.mass = 1.0;
    a.J_alpha = 2.0;
    DiagnosticsRecord b = a;
    b.rel_entropy = 0.25;
    b.lyapunov = 0.5;
    b.dissipation = 0.75;
    std::ostringstream out;
    write_series_csv(out, {a, b});
    const auto ls = lines(out.str());
    REQUIRE(ls.size() == 3);
    CHECK(ls[0] == "t,mass,trace,J,I,J_alpha,entropy,rel_entropy,lyapunov,dissipation,max_density,"
                   "boundary_mass_fraction");
    const auto ra = cells(ls[1]);
    const auto rb = cells(ls[2]);
    REQUIRE(ra.size() == 12);
    REQUIRE(rb.size() == 12);
    CHECK(ra[0] == "0.10000000000000001");
    CHECK(ra[5] == "2");
    CHECK(ra[7].empty());
    CHECK(ra[8].empty());
    CHECK(ra[9].empty());
    CHECK(rb[7] == "0.25");
    CHECK(rb[8] == "0.5");
    CHECK(rb[9] == "0.75");
}

TEST_CASE("run outputs")
{
    const auto result = run(small_config("bks1d", 0.8));
    const auto dir = std::filesystem::temp_directory_path() / "polarsim_test_output";
    std::filesystem::remove_all(dir);
    write_run_outputs(dir, result);

    const auto series = lines(slurp(dir / "series.csv"));
    CHECK(series.size() == result.records.size() + 1);
    CHECK(series[0] == series_header);
    for (std::size_t k = 1; k < series.size(); ++k) CHECK(cells(series[k]).size() == 12);

    const auto field = lines(slurp(dir / "terminal_field.csv"));
    CHECK(field[0] == "z,value");
    CHECK(field.size() == 41);
    CHECK(std::stod(cells(field[1])[0]) == doctest::Approx(0.1));

    const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(report["model"] == "bks1d");
    CHECK(report["blowup"]["detected"] == false);
    CHECK(report["blowup"]["t_detect"].is_null());
    CHECK(report["config"]["mass"] == 0.8);
    CHECK(report["monitors"]["violations"] == 0);
    CHECK(report["t_final"].get<double>() == doctest::Approx(0.5));

    const std::string first = slurp(dir / "series.csv") + slurp(dir / "report.json") + slurp(dir / "terminal_field.csv");
    write_run_outputs(dir, run(small_config("bks1d", 0.8)));
    CHECK(slurp(dir / "series.csv") + slurp(dir / "report.json") + slurp(dir / "terminal_field.csv") == first);
    std::filesystem::remove_all(dir);
}

TEST_CASE("2D terminal field layout")
{
    const auto c = parse_config_text(
        R"({"model": "transversal2d", "mass": 0.5, "t_end": 0.05, "ny": 8, "nz": 6, "y_min": -2, "y_max": 2, "z_max": 3})");
    const auto r = run(c);
    std::ostringstream out;
    write_terminal_csv(out, r);
    const auto ls = lines(out.str());
    CHECK(ls[0] == "y,z,value");
    CHECK(ls.size() == 49);
    CHECK(cells(ls[1]).size() == 3);
    CHECK(nlohmann::json::parse(report_json(r))["model"] == "transversal2d");
}

TEST_CASE("sweep csv and bisection json")
{
    SweepRow row;
    row.value = 1.5;
    row.detected = true;
    row.t_detect = 0.25;
    row.criterion = true;
    std::ostringstream out;
    write_sweep_csv(out, SweepParam::mass, {row});
    const auto ls = lines(out.str());
    CHECK(ls[0] == "mass,blowup,t_detect,criterion,t,mass,trace,J,I,max_density");
    CHECK(cells(ls[1])[0] == "1.5");
    CHECK(cells(ls[1])[1] == "1");
    CHECK(cells(ls[1])[2] == "0.25");
    CHECK(cells(ls[1])[3] == "1");

    BisectionResult b;
    b.estimate = 1.125;
    b.lo = 1.0;
    b.hi = 1.25;
    b.batches = 2;
    b.probes = {{0.5, false, 0.0}, {1.5, true, 0.4}};
    const auto j = nlohmann::json::parse(bisection_json(b, 0.5));
    CHECK(j["estimate"] == 1.125);
    CHECK(j["bracket"][1] == 1.25);
    CHECK(j["batches"] == 2);
    CHECK(j["probes"][0]["t_detect"].is_null());
    CHECK(j["probes"][1]["blowup"] == true);
}
