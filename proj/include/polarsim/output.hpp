#pragma once

#include "polarsim/runner.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace polarsim {

inline constexpr const char* series_header =
    "t,mass,trace,J,I,J_alpha,entropy,rel_entropy,lyapunov,dissipation,max_density,boundary_mass_fraction";

/// Shortest text with 17 significant digits ("%.17g").
std::string format_number(double x);

/// Header plus one row per record; empty cells for absent optional entries.
void write_series_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records);

/// "z,value" rows for 1D results, "y,z,value" rows for 2D results.
void write_terminal_csv(std::ostream& out, const RunResult& result);

/// Blow-up report, criterion flag, monitor summary and the resolved config.
std::string report_json(const RunResult& result);

void write_sweep_csv(std::ostream& out, SweepParam p, const std::vector<SweepRow>& rows);

std::string bisection_json(const BisectionResult& result, double tol);

/// Writes series.csv, report.json and terminal_field.csv into dir (created if needed).
void write_run_outputs(const std::filesystem::path& dir, const RunResult& result);

} // namespace polarsim
