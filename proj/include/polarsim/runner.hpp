#pragma once

#include "polarsim/config.hpp"
#include "polarsim/diagnostics.hpp"
#include "polarsim/run_support.hpp"
#include "polarsim/solver2d.hpp"

#include <optional>
#include <string>
#include <vector>

namespace polarsim {

struct RunResult {
    RunConfig config;
    std::vector<DiagnosticsRecord> records;
    BlowUpReport blowup;
    MonitorSummary monitors;
    long steps = 0;

    std::optional<DensityField> terminal_1d;
    std::optional<Field2D> terminal_2d;
    std::optional<double> terminal_mu;
    /// Model-specific sufficient blow-up criterion evaluated on the initial data.
    std::optional<bool> criterion;
    std::vector<std::string> notes;
    /// Only for 2D runs: L2 norm and y-marginal at every record.
    std::vector<double> l2_norms;
    std::vector<std::vector<double>> marginals;
};

/// Runs one configuration. Solver errors are rethrown as Error with the model
/// and mass prepended.
RunResult run(const RunConfig& config);

enum class SweepParam { mass, alpha, L, gamma, C_2d, j0_scale };

/// Accepts mass, alpha, L, gamma, C_2d and J0-scale. Throws ConfigError("param").
SweepParam parse_sweep_param(const std::string& name);
std::string to_string(SweepParam p);

/// Copy of base with one parameter replaced; validated.
RunConfig with_param(const RunConfig& base, SweepParam p, double value);

struct SweepRow {
    double value = 0.0;
    bool detected = false;
    double t_detect = 0.0;
    std::optional<bool> criterion;
    DiagnosticsRecord terminal;
};

/// One run per value, executed concurrently; rows follow the order of values.
std::vector<SweepRow> sweep(const RunConfig& base, SweepParam p, const std::vector<double>& values,
                            unsigned max_threads = 0);

struct MassProbe {
    double mass = 0.0;
    bool detected = false;
    double t_detect = 0.0;
};

struct BisectionResult {
    double estimate = 0.0;
    double lo = 0.0;   // largest mass seen without blow-up
    double hi = 0.0;   // smallest mass seen with blow-up
    int batches = 0;
    std::vector<MassProbe> probes;
};

/// Bisection on the blow-up flag over the mass. The first batch checks the
/// bracket; every further batch runs three interior masses concurrently and
/// shrinks the bracket four-fold. Throws BracketError when the endpoints do
/// not straddle the transition.
BisectionResult bisect_critical_mass(const RunConfig& base, double m_lo, double m_hi, double tol,
                                     unsigned max_threads = 0);

} // namespace polarsim
