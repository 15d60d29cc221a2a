#include "polarsim/errors.hpp"
#include "polarsim/output.hpp"
#include "polarsim/runner.hpp"

#include <doctest.h>

#include <sstream>
#include <string>

using namespace polarsim;

namespace {

RunConfig bks_step(double mass)
{
    auto c = parse_config_text(R"({"model": "bks1d", "mass": 1, "t_end": 10, "initial": {"kind": "step", "width": 1}})");
    return with_param(c, SweepParam::mass, mass);
}

std::string series_text(const RunResult& r)
{
    std::ostringstream out;
    write_series_csv(out, r.records);
    write_terminal_csv(out, r);
    return out.str();
}

std::string sweep_text(SweepParam p, const std::vector<SweepRow>& rows)
{
    std::ostringstream out;
    write_sweep_csv(out, p, rows);
    return out.str();
}

} // namespace

TEST_CASE("run dispatches every model")
{
    for (const char* text : {
             R"({"model": "bks1d", "mass": 0.8, "t_end": 0.5, "n_cells": 60})",
             R"({"model": "rescaled1d", "mass": 0.6, "t_end": 0.5, "n_cells": 60})",
             R"({"model": "exchange1d", "mass": 2, "t_end": 0.5, "n_cells": 60})",
             R"({"model": "interval1d", "mass": 0.8, "L": 3, "t_end": 0.5, "n_cells": 60})",
             R"({"model": "range1d", "mass": 0.8, "alpha": 1, "t_end": 0.5, "n_cells": 60})",
             R"({"model": "transversal2d", "mass": 0.8, "t_end": 0.05, "ny": 16, "nz": 8})",
             R"({"model": "potential2d", "mass": 0.8, "t_end": 0.05, "ny": 16, "nz": 8})",
         }) {
        const auto r = run(parse_config_text(text));
        const std::string label = text;
        CAPTURE(label);
        REQUIRE(r.records.size() >= 2);
        for (std::size_t k = 1; k < r.records.size(); ++k) CHECK(r.records[k].t > r.records[k - 1].t);
        const double bound = r.terminal_mu.value_or(0.0);
        CHECK(r.records.back().mass + bound == doctest::Approx(r.config.mass).epsilon(1e-9));
        CHECK(r.monitors.violations == 0);
        CHECK((r.terminal_1d.has_value() != r.terminal_2d.has_value()));
        if (r.terminal_1d) CHECK(r.terminal_1d->mass() == doctest::Approx(r.records.back().mass).epsilon(1e-12));
        if (r.terminal_2d) CHECK(r.terminal_2d->mass() == doctest::Approx(r.records.back().mass).epsilon(1e-12));
        CHECK(r.steps > 0);
    }
}

TEST_CASE("run outcomes")
{
    const auto big = run(bks_step(1.5));
    CHECK(big.blowup.detected);
    CHECK(big.blowup.t_detect > 0.0);
    CHECK(big.criterion == true);
    CHECK_FALSE(run(bks_step(0.9)).blowup.detected);

    auto ex = parse_config_text(R"({"model": "exchange1d", "mass": 1.5, "t_end": 20, "initial": {"kind": "step", "width": 1}})");
    const auto er = run(ex);
    CHECK_FALSE(er.blowup.detected);
    CHECK(er.terminal_mu.has_value());
}

TEST_CASE("run is deterministic")
{
    for (const char* text : {
             R"({"model": "bks1d", "mass": 1.5, "t_end": 2, "n_cells": 100})",
             R"({"model": "potential2d", "mass": 1.2, "t_end": 0.05, "ny": 96, "nz": 48})",
         }) {
        const auto c = parse_config_text(text);
        CHECK(series_text(run(c)) == series_text(run(c)));
    }
}

TEST_CASE("sweep parameters")
{
    CHECK(parse_sweep_param("mass") == SweepParam::mass);
    CHECK(parse_sweep_param("alpha") == SweepParam::alpha);
    CHECK(parse_sweep_param("L") == SweepParam::L);
    CHECK(parse_sweep_param("gamma") == SweepParam::gamma);
    CHECK(parse_sweep_param("C_2d") == SweepParam::C_2d);
    CHECK(parse_sweep_param("J0-scale") == SweepParam::j0_scale);
    try {
        parse_sweep_param("sigma");
        FAIL("unknown parameter accepted");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "param");
    }
    const auto base = bks_step(1.0);
    CHECK(with_param(base, SweepParam::mass, 2.0).mass == 2.0);
    CHECK(with_param(base, SweepParam::j0_scale, 1.5).j0_scale == 1.5);
    CHECK_THROWS_AS(with_param(base, SweepParam::gamma, 1.0), ConfigError);
    CHECK_THROWS_AS(with_param(base, SweepParam::mass, -1.0), ConfigError);
}

TEST_CASE("sweep")
{
    SUBCASE("mass sweep separates at the critical mass")
    {
        const std::vector<double> masses = {0.5, 0.9, 1.0, 1.1, 1.5};
        const auto rows = sweep(bks_step(1.0), SweepParam::mass, masses);
        REQUIRE(rows.size() == masses.size());
        for (std::size_t k = 0; k < rows.size(); ++k) CHECK(rows[k].value == masses[k]);
        CHECK_FALSE(rows[0].detected);
        CHECK_FALSE(rows[1].detected);
        CHECK_FALSE(rows[2].detected);
        CHECK(rows[4].detected);
    }
    SUBCASE("concurrent and serial sweeps agree")
    {
        const std::vector<double> masses = {0.7, 1.3, 0.95, 2.0, 1.05, 0.5};
        const auto base = bks_step(1.0);
        CHECK(sweep_text(SweepParam::mass, sweep(base, SweepParam::mass, masses, 1)) ==
              sweep_text(SweepParam::mass, sweep(base, SweepParam::mass, masses, 4)));
    }
    SUBCASE("interval criterion flips where 4 J0 = L M")
    {
        // step of width 1 and mass 2: J0 = 1, so the flag flips at L = 2
        const auto base = parse_config_text(
            R"({"model": "interval1d", "mass": 2, "L": 4, "t_end": 0.05, "n_cells": 100, "initial": {"kind": "step", "width": 1}})");
        const auto rows = sweep(base, SweepParam::L, {1.5, 1.9, 2.1, 3.0});
        CHECK(rows[0].criterion == false);
        CHECK(rows[1].criterion == false);
        CHECK(rows[2].criterion == true);
        CHECK(rows[3].criterion == true);
    }
    SUBCASE("empty values give an empty table")
    {
        CHECK(sweep(bks_step(1.0), SweepParam::mass, {}).empty());
    }
}

TEST_CASE("bisect_critical_mass")
{
    const auto base = bks_step(1.0);
    SUBCASE("locates the critical mass")
    {
        const auto b = bisect_critical_mass(base, 0.5, 2.0, 0.02);
        CHECK(b.hi - b.lo <= 0.02);
        CHECK(b.estimate == doctest::Approx(0.5 * (b.lo + b.hi)));
        CHECK(b.estimate >= 0.95);
        CHECK(b.estimate <= 1.10);
        for (const auto& p : b.probes) CHECK(p.detected == (p.mass >= b.hi));
    }
    SUBCASE("tol 0.5 needs at most two batches")
    {
        const auto b = bisect_critical_mass(base, 0.5, 2.0, 0.5);
        CHECK(b.batches <= 2);
        CHECK(b.hi - b.lo <= 0.5);
    }
    SUBCASE("serial and concurrent bisection agree")
    {
        const auto a = bisect_critical_mass(base, 0.5, 2.0, 0.05, 1);
        const auto b = bisect_critical_mass(base, 0.5, 2.0, 0.05, 3);
        CHECK(bisection_json(a, 0.05) == bisection_json(b, 0.05));
    }
    SUBCASE("bracket errors report both outcomes")
    {
        try {
            bisect_critical_mass(base, 2.0, 3.0, 0.1);
            FAIL("bracket accepted");
        } catch (const BracketError& e) {
            CHECK(e.lo_blows_up());
            CHECK(e.hi_blows_up());
        }
        try {
            bisect_critical_mass(base, 0.3, 0.6, 0.1);
            FAIL("bracket accepted");
        } catch (const BracketError& e) {
            CHECK_FALSE(e.lo_blows_up());
            CHECK_FALSE(e.hi_blows_up());
        }
        CHECK_THROWS_AS(bisect_critical_mass(base, 0.5, 2.0, 0.0), ConfigError);
        CHECK_THROWS_AS(bisect_critical_mass(base, 2.0, 0.5, 0.1), ConfigError);
    }
}
