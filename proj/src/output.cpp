#include "polarsim/output.hpp"

#include "polarsim/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>

namespace polarsim {

namespace {

using nlohmann::json;

std::string cell(const std::optional<double>& v)
{
    return v ? format_number(*v) : std::string();
}

json number_or_null(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

std::ofstream open_for_writing(const std::filesystem::path& p)
{
    std::ofstream out(p);
    if (!out) throw Error("cannot write " + p.string());
    return out;
}

} // namespace

std::string format_number(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_series_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records)
{
    out << series_header << '\n';
    for (const auto& r : records) {
        out << format_number(r.t) << ',' << format_number(r.mass) << ',' << format_number(r.trace) << ','
            << format_number(r.J) << ',' << format_number(r.I) << ',' << cell(r.J_alpha) << ','
            << format_number(r.entropy) << ',' << cell(r.rel_entropy) << ',' << cell(r.lyapunov) << ','
            << cell(r.dissipation) << ',' << format_number(r.max_density) << ','
            << format_number(r.boundary_mass_fraction) << '\n';
    }
}

void write_terminal_csv(std::ostream& out, const RunResult& result)
{
    if (result.terminal_2d) {
        const Field2D& f = *result.terminal_2d;
        out << "y,z,value\n";
        for (int i = 0; i < f.grid.nz; ++i)
            for (int j = 0; j < f.grid.ny; ++j)
                out << format_number(f.grid.y_center(j)) << ',' << format_number(f.grid.z_center(i)) << ','
                    << format_number(f.at(i, j)) << '\n';
        return;
    }
    if (!result.terminal_1d) throw Error("run result has no terminal field");
    const DensityField& f = *result.terminal_1d;
    out << "z,value\n";
    for (int i = 0; i < f.grid.n_cells; ++i)
        out << format_number(f.grid.center(i)) << ',' << format_number(f.values[i]) << '\n';
}

std::string report_json(const RunResult& r)
{
    json j;
    j["model"] = to_string(r.config.model);
    j["blowup"] = {
        {"detected", r.blowup.detected},
        {"t_detect", r.blowup.detected ? json(r.blowup.t_detect) : json(nullptr)},
        {"criterion", to_string(r.blowup.criterion)},
        {"analytic_bound", number_or_null(r.blowup.analytic_bound)},
    };
    j["sufficient_criterion"] = r.criterion ? json(*r.criterion) : json(nullptr);
    j["steps"] = r.steps;
    j["t_final"] = r.records.empty() ? json(nullptr) : json(r.records.back().t);
    j["terminal_mu"] = number_or_null(r.terminal_mu);
    if (!r.terminal_2d) {
        const MonitorSummary& m = r.monitors;
        auto residual = [](double v) { return v < 1e299 ? json(v) : json(nullptr); };
        j["monitors"] = {
            {"violations", m.violations},
            {"min_trace_residual", residual(m.min_trace_residual)},
            {"min_carleman_residual", residual(m.min_carleman_residual)},
            {"min_csiszar_kullback_residual", residual(m.min_csiszar_kullback_residual)},
            {"min_exchange_dissipation_term", residual(m.min_exchange_dissipation_term)},
        };
    }
    j["notes"] = r.notes;
    j["config"] = json::parse(config_echo(r.config));
    return j.dump(2) + "\n";
}

void write_sweep_csv(std::ostream& out, SweepParam p, const std::vector<SweepRow>& rows)
{
    out << to_string(p) << ",blowup,t_detect,criterion,t,mass,trace,J,I,max_density\n";
    for (const auto& row : rows) {
        const auto& r = row.terminal;
        out << format_number(row.value) << ',' << (row.detected ? 1 : 0) << ','
            << (row.detected ? format_number(row.t_detect) : std::string()) << ','
            << (row.criterion ? (*row.criterion ? "1" : "0") : "") << ',' << format_number(r.t) << ','
            << format_number(r.mass) << ',' << format_number(r.trace) << ',' << format_number(r.J) << ','
            << format_number(r.I) << ',' << format_number(r.max_density) << '\n';
    }
}

std::string bisection_json(const BisectionResult& b, double tol)
{
    json probes = json::array();
    for (const auto& p : b.probes)
        probes.push_back({{"mass", p.mass},
                          {"blowup", p.detected},
                          {"t_detect", p.detected ? json(p.t_detect) : json(nullptr)}});
    json j = {{"estimate", b.estimate}, {"bracket", {b.lo, b.hi}}, {"tol", tol},
              {"batches", b.batches},   {"probes", probes}};
    return j.dump(2) + "\n";
}

void write_run_outputs(const std::filesystem::path& dir, const RunResult& result)
{
    std::filesystem::create_directories(dir);
    {
        auto out = open_for_writing(dir / "series.csv");
        write_series_csv(out, result.records);
    }
    {
        auto out = open_for_writing(dir / "report.json");
        out << report_json(result);
    }
    auto out = open_for_writing(dir / "terminal_field.csv");
    write_terminal_csv(out, result);
}

} // namespace polarsim
