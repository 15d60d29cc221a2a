#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace polarsim {

/// Uniform cell-centered mesh on the truncated half-line (0, z_max).
struct Grid1D {
    double z_max = 0.0;
    int n_cells = 0;
    double dz = 0.0;

    double center(int i) const { return (i + 0.5) * dz; }
    /// Coordinate of face i, i.e. the left edge of cell i (face n_cells is z_max).
    double face(int i) const { return i * dz; }
    std::vector<double> centers() const;
};

/// Uniform cell-centered mesh on (y_min, y_max) x (0, z_max). Row-major with z
/// as the slow index: value(i, j) lives at z_center(i), y_center(j).
struct Grid2D {
    double y_min = 0.0;
    double y_max = 0.0;
    double z_max = 0.0;
    int ny = 0;
    int nz = 0;
    double dy = 0.0;
    double dz = 0.0;

    double y_center(int j) const { return y_min + (j + 0.5) * dy; }
    double z_center(int i) const { return (i + 0.5) * dz; }
    double y_face(int j) const { return y_min + j * dy; }
    double z_face(int i) const { return i * dz; }
    std::size_t size() const { return static_cast<std::size_t>(ny) * nz; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * ny + j; }
};

Grid1D make_grid_1d(double z_max, int n_cells);
Grid2D make_grid_2d(double y_min, double y_max, double z_max, int ny, int nz);

/// Nonnegative cell averages of the density on a 1D grid.
struct DensityField {
    Grid1D grid;
    std::vector<double> values;
    double time = 0.0;

    double mass() const;
    double max_value() const;
};

/// Builds a field after checking the cell count and nonnegativity.
DensityField make_density_field(const Grid1D& grid, std::vector<double> values, double time = 0.0);

enum class InitialKind { exponential, half_gaussian, step, table };

struct InitialCondition {
    InitialKind kind = InitialKind::exponential;
    double alpha = 1.0;  // exponential rate
    double sigma = 1.0;  // half_gaussian width
    double shift = 0.0;  // half_gaussian center
    double width = 1.0;  // step width
    std::string path;    // table file
    double target_mass = 1.0;
};

InitialKind parse_initial_kind(const std::string& name);
std::string to_string(InitialKind kind);

/// Reads a two-column "z value" table ('#' starts a comment).
std::vector<std::pair<double, double>> read_profile_table(const std::string& path);

/// Piecewise-linear interpolation of a table at the given abscissae, constant
/// extension outside the tabulated range.
std::vector<double> interpolate_table(std::span<const std::pair<double, double>> table,
                                      std::span<const double> at);

/// Cell averages of the chosen profile rescaled to the target mass.
DensityField project_initial(const InitialCondition& ic, const Grid1D& grid);

/// Cell averages of a smooth profile by 5-point Gauss-Legendre per cell.
std::vector<double> cell_averages(const Grid1D& grid, const std::function<double(double)>& profile);

/// Multiplies every value so the discrete mass equals `mass`.
void rescale_to_mass(std::span<double> values, double dz, double mass);

/// Weight for midpoint-rule moments.
struct Weight {
    enum class Kind { one, z, half_z2, exp_alpha, custom };
    Kind kind = Kind::one;
    double alpha = 0.0;
    std::vector<double> samples;

    static Weight one() { return {}; }
    static Weight z() { return {Kind::z, 0.0, {}}; }
    static Weight half_z2() { return {Kind::half_z2, 0.0, {}}; }
    static Weight exp_alpha(double a) { return {Kind::exp_alpha, a, {}}; }
    static Weight custom(std::vector<double> s) { return {Kind::custom, 0.0, std::move(s)}; }
};

/// Midpoint sum  sum_i w(z_i) n_i dz.
double weighted_integral(const DensityField& f, const Weight& w);

} // namespace polarsim
