#pragma once

#include "polarsim/core.hpp"
#include "polarsim/run_support.hpp"

#include <span>

namespace polarsim {

/// Density of the boundary Keller-Segel equation on the truncated half-line.
struct Bks1dState {
    DensityField field;
    long step_count = 0;

    double t() const { return field.time; }
};

/// Wall value n(t, 0) by one-sided quadratic extrapolation, clipped at 0.
double trace_value(const DensityField& f);

/// cfl * dz^2 / (2 + a dz).
double stable_dt(const DensityField& f, double a, double cfl = 0.45);

/// One explicit conservative step of  d_t n = d_z(d_z n + n(t,0) n)  with
/// no-flux walls. Throws InvalidArgument if dt exceeds the positivity limit.
Bks1dState step_bks(const Bks1dState& s, double dt);

/// J0^2 / ((M - 1) M^2), the time by which non-increasing data must blow up.
double blowup_time_bound(double M, double J0);

bool is_non_increasing(std::span<const double> values);

struct BksRunConfig {
    InitialCondition initial;
    double z_max = 30.0;
    int n_cells = 300;
    RunControls controls;
};

/// Integrates to t_end or until a blow-up detector fires.
Trajectory1D run_bks(const BksRunConfig& config);

} // namespace polarsim
