#pragma once

#include "polarsim/core.hpp"
#include "polarsim/diagnostics.hpp"
#include "polarsim/run_support.hpp"

#include <optional>
#include <vector>

namespace polarsim {

/// Cell averages of n(t, y, z) on a box (y_min, y_max) x (0, z_max); z is the slow index.
struct Field2D {
    Grid2D grid;
    std::vector<double> values;
    double time = 0.0;

    double mass() const;
    double max_value() const;
    double at(int i, int j) const { return values[grid.index(i, j)]; }
};

Field2D make_field_2d(const Grid2D& grid, std::vector<double> values, double time = 0.0);

/// Face-normal velocity samples.
///   uy: nz rows of ny+1 y-faces, index i * (ny+1) + jf
///   uz: nz+1 z-faces of ny columns, index if * ny + j
struct Velocity2D {
    int ny = 0;
    int nz = 0;
    std::vector<double> uy;
    std::vector<double> uz;

    double y_speed(int i, int jf) const { return uy[static_cast<std::size_t>(i) * (ny + 1) + jf]; }
    double z_speed(int iff, int j) const { return uz[static_cast<std::size_t>(iff) * ny + j]; }
};

enum class VelocityKind { transversal, potential };

/// Product initial data: Gaussian in y times a 1D profile in z, scaled to total mass.
struct InitialCondition2D {
    InitialCondition z_profile;   // its target_mass is ignored
    double y_center = 0.0;
    double y_sigma = 1.0;
    double target_mass = 1.0;
};

Field2D project_initial_2d(const InitialCondition2D& ic, const Grid2D& grid);

/// Per-column wall value (3 n_0 - n_1)/2 clipped at 0. Needs nz >= 3.
std::vector<double> trace_row(const Field2D& f);

/// u = -trace(y) e_z at every z-face; y-faces carry no speed.
Velocity2D velocity_transversal(const std::vector<double>& tr, const Grid2D& grid);

/// u(y, z) = -sum_j (y - y_j, z) / ((y - y_j)^2 + z^2) tr_j dy sampled at face
/// centers. Faces on the box edges get zero normal speed. Rows are assembled
/// concurrently; each entry is summed in a fixed order.
Velocity2D velocity_potential(const std::vector<double>& tr, const Grid2D& grid);

/// Discrete divergence per cell, z-major like the field.
std::vector<double> velocity_divergence(const Velocity2D& u, const Grid2D& grid);

/// Largest dt for which the explicit update keeps every cell nonnegative.
double positivity_limit_2d(const Grid2D& grid, const Velocity2D& u);

/// cfl / (2/dy^2 + 2/dz^2 + max|u_y|/dy + max|u_z|/dz).
double stable_dt_2d(const Grid2D& grid, const Velocity2D& u, double cfl = 0.45);

/// Conservative step of d_t n = div(grad n - u n) with zero normal flux on the
/// box edges. Throws InvalidArgument when dt exceeds the positivity limit.
Field2D step_2d(const Field2D& f, const Velocity2D& u, double dt);

/// nu(y) = sum_i n(y, z_i) dz.
std::vector<double> marginal_y(const Field2D& f);

/// 1/2 sum (y^2 + z^2) n dy dz.
double second_moment_2d(const Field2D& f);

/// (sum n^p dy dz)^(1/p), p >= 1.
double lp_norm(const Field2D& f, double p);

/// I0 <= C M^3.
bool blowup_criterion_2d(double I0, double M, double C);

struct Run2DConfig {
    VelocityKind kind = VelocityKind::transversal;
    InitialCondition2D initial;
    double y_min = -8.0;
    double y_max = 8.0;
    double z_max = 8.0;
    int ny = 128;
    int nz = 128;
    double C_2d = 0.0;        // criterion constant; <= 0 leaves the flag unset
    RunControls controls;     // default trace_cap: trace_runaway_fraction * M / (dy dz)
};

struct Trajectory2D {
    /// trace holds the largest wall value of the row; J = int z n; I = 1/2 int |x|^2 n.
    std::vector<DiagnosticsRecord> records;
    std::vector<double> l2_norms;
    std::vector<std::vector<double>> marginals;
    BlowUpReport blowup;
    std::optional<bool> criterion;
    Field2D terminal;
    long steps = 0;
};

Trajectory2D run_2d(const Run2DConfig& config);

} // namespace polarsim
