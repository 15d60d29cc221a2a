#pragma once

#include "polarsim/core.hpp"
#include "polarsim/diagnostics.hpp"
#include "polarsim/run_support.hpp"

namespace polarsim {

/// Free density n plus the boundary concentration mu; the budget m + mu is conserved.
struct ExchangeState {
    DensityField field;
    double mu = 0.0;
    double gamma = 1.0;
    long step_count = 0;

    double t() const { return field.time; }
    double budget() const { return field.mass() + mu; }
};

/// One explicit step of
///   d_t n = d_z(d_z n + mu n),  d_z n(0) + mu n(0) = d mu/dt = n(0) - gamma mu.
/// The wall flux and the mu update use the same increment, so m + mu is
/// preserved to round-off. Throws InvalidArgument when dt exceeds the
/// positivity limit or 1/gamma.
ExchangeState step_exchange(const ExchangeState& s, double dt);

/// Largest admissible step: min(cfl dz^2/(2 + mu dz), 1/gamma).
double stable_dt_exchange(const ExchangeState& s, double cfl = 0.45);

struct ExchangeEquilibrium {
    double nu = 0.0;   // boundary concentration, M - gamma
    double mass = 0.0; // free mass, gamma
    ReferenceProfile profile;
};

/// Polarised steady state: mu = nu = M - gamma, n = gamma nu exp(-nu z).
/// Throws NoEquilibrium when M <= gamma.
ExchangeEquilibrium equilibrium_exchange(double M, double gamma, const Grid1D& grid);

struct ExchangeRunConfig {
    InitialCondition initial;  // target_mass is the total budget M
    double mu0 = 0.0;          // initial boundary concentration, part of M
    double gamma = 1.0;
    double z_max = 30.0;
    int n_cells = 300;
    RunControls controls;
};

/// Integrates to t_end; never declares blow-up since the drift stays below M.
/// Records carry the Lyapunov functional and its dissipation when gamma = 1 and M > 1.
Trajectory1D run_exchange(const ExchangeRunConfig& config);

} // namespace polarsim
