#pragma once

#include "polarsim/core.hpp"
#include "polarsim/diagnostics.hpp"
#include "polarsim/run_support.hpp"

namespace polarsim {

/// P(alpha) = int_0^inf exp(-y - y^2/(2 alpha^2)) dy, the mass of G_alpha.
double mass_map_P(double alpha);

/// The unique alpha with P(alpha) = M, for 0 < M < 1.
double solve_alpha(double M);

/// G_alpha(y) = alpha exp(-alpha y - y^2/2) as cell averages.
ReferenceProfile profile_G(double alpha, const Grid1D& grid);

/// Density in the self-similar frame tau = log sqrt(1+2t), y = z / sqrt(1+2t).
/// field.time holds tau.
struct RescaledState {
    DensityField field;
    double alpha = 0.0;
    long step_count = 0;

    double tau() const { return field.time; }
};

/// cfl * dy^2 / (2 + (y_max + trace) dy).
double stable_dtau(const DensityField& u, double cfl = 0.45);

/// One explicit step of  d_tau u = d_y(d_y u + (y + u(tau,0)) u)  with no-flux walls.
RescaledState step_rescaled(const RescaledState& s, double dtau);

/// Maps n(t, .) to u(tau, .). The target grid keeps the cell count and has
/// y_max = z_max / sqrt(1+2t), so cell averages map exactly.
DensityField frame_transform(const DensityField& n);

/// Inverse of frame_transform for a field at rescaled time tau.
DensityField frame_inverse(const DensityField& u);

struct RescaledRunConfig {
    InitialCondition initial;  // profile in the y variable
    double y_max = 8.0;
    int n_cells = 400;
    RunControls controls;      // times are rescaled times tau
};

/// Subcritical run in the rescaled frame; records carry H, L and D.
Trajectory1D run_rescaled(const RescaledRunConfig& config);

} // namespace polarsim
