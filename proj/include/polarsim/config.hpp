#pragma once

#include "polarsim/core.hpp"
#include "polarsim/run_support.hpp"

#include <optional>
#include <string>

namespace polarsim {

enum class ModelKind { bks1d, rescaled1d, exchange1d, interval1d, range1d, transversal2d, potential2d };

ModelKind parse_model_kind(const std::string& name);
std::string to_string(ModelKind kind);
bool is_2d(ModelKind kind);

/// Validated run description. Optional members hold user overrides; the
/// effective_* accessors apply the documented defaults for the current mass.
struct RunConfig {
    ModelKind model = ModelKind::bks1d;

    // physics
    double mass = 1.0;
    double gamma = 1.0;      // exchange1d
    double mu0 = 0.0;        // exchange1d: initial boundary concentration
    double alpha = 1.0;      // range1d: interaction decay rate
    double L = 0.0;          // interval1d: length, required
    double C_2d = 0.0;       // 2D criterion constant; 0 leaves the flag unset
    double j0_scale = 1.0;   // stretches the initial profile in z

    // grid
    std::optional<double> z_max;   // half-line truncation (y_max for rescaled1d)
    int n_cells = 400;
    double y_min = -8.0;
    double y_max = 8.0;
    int ny = 128;
    int nz = 128;

    InitialCondition initial;  // target_mass mirrors mass
    double y_center = 0.0;     // 2D initial data
    double y_sigma = 1.0;

    // time and detectors
    double t_end = 1.0;
    double cfl = 0.45;
    double dt_floor = 1e-12;
    std::optional<double> output_every;
    std::optional<double> density_cap;
    std::optional<double> trace_cap;

    long long seed = 0;

    double effective_z_max() const;
    double effective_output_every() const;
    double effective_density_cap() const;
    /// Controls with every default resolved except trace_cap, which stays 0
    /// (grid-dependent default) unless given.
    RunControls controls() const;
};

/// Reads a JSON config. Throws ConfigError naming the offending key.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& json_text);

/// Checks cross-field constraints; parse_config calls it. Throws ConfigError.
void validate(const RunConfig& config);

/// JSON text of the config with every default resolved.
std::string config_echo(const RunConfig& config);

} // namespace polarsim
