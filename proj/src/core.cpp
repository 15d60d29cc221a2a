#include "polarsim/core.hpp"

#include "polarsim/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace polarsim {

std::vector<double> Grid1D::centers() const
{
    std::vector<double> z(n_cells);
    for (int i = 0; i < n_cells; ++i) z[i] = center(i);
    return z;
}

Grid1D make_grid_1d(double z_max, int n_cells)
{
    if (!(z_max > 0.0) || !std::isfinite(z_max))
        throw InvalidArgument("make_grid_1d: z_max must be positive, got " + std::to_string(z_max));
    if (n_cells < 4)
        throw InvalidArgument("make_grid_1d: need at least 4 cells, got " + std::to_string(n_cells));
    return Grid1D{z_max, n_cells, z_max / n_cells};
}

Grid2D make_grid_2d(double y_min, double y_max, double z_max, int ny, int nz)
{
    if (!(y_max > y_min) || !(z_max > 0.0))
        throw InvalidArgument("make_grid_2d: empty box");
    if (ny < 4 || nz < 4)
        throw InvalidArgument("make_grid_2d: need at least 4 cells per direction");
    return Grid2D{y_min, y_max, z_max, ny, nz, (y_max - y_min) / ny, z_max / nz};
}

double DensityField::mass() const
{
    double s = 0.0;
    for (double v : values) s += v;
    return s * grid.dz;
}

double DensityField::max_value() const
{
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

DensityField make_density_field(const Grid1D& grid, std::vector<double> values, double time)
{
    if (static_cast<int>(values.size()) != grid.n_cells)
        throw InvalidArgument("density field: value count does not match grid");
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw InvalidArgument("density field: values must be finite and nonnegative");
    }
    return DensityField{grid, std::move(values), time};
}

InitialKind parse_initial_kind(const std::string& name)
{
    if (name == "exponential") return InitialKind::exponential;
    if (name == "half_gaussian") return InitialKind::half_gaussian;
    if (name == "step") return InitialKind::step;
    if (name == "table") return InitialKind::table;
    throw InvalidArgument("unknown initial condition kind '" + name + "'");
}

std::string to_string(InitialKind kind)
{
    switch (kind) {
    case InitialKind::exponential: return "exponential";
    case InitialKind::half_gaussian: return "half_gaussian";
    case InitialKind::step: return "step";
    case InitialKind::table: return "table";
    }
    return "unknown";
}

std::vector<std::pair<double, double>> read_profile_table(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot read table file '" + path + "'");

    std::vector<std::pair<double, double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double z = 0.0;
        double v = 0.0;
        if (!(ls >> z)) continue;
        if (!(ls >> v))
            throw InputError(path + ":" + std::to_string(line_no) + ": expected two columns");
        if (v < 0.0 || !std::isfinite(v))
            throw InputError(path + ":" + std::to_string(line_no) + ": negative or non-finite value");
        rows.emplace_back(z, v);
    }
    if (rows.size() < 2) throw InputError("table file '" + path + "' needs at least two rows");
    std::sort(rows.begin(), rows.end());
    return rows;
}

std::vector<double> interpolate_table(std::span<const std::pair<double, double>> table,
                                      std::span<const double> at)
{
    std::vector<double> out(at.size());
    for (std::size_t k = 0; k < at.size(); ++k) {
        const double z = at[k];
        if (z <= table.front().first) {
            out[k] = table.front().second;
            continue;
        }
        if (z >= table.back().first) {
            out[k] = table.back().second;
            continue;
        }
        auto hi = std::upper_bound(table.begin(), table.end(), z,
                                   [](double x, const auto& row) { return x < row.first; });
        auto lo = hi - 1;
        const double span = hi->first - lo->first;
        const double w = span > 0.0 ? (z - lo->first) / span : 0.0;
        out[k] = (1.0 - w) * lo->second + w * hi->second;
    }
    return out;
}

std::vector<double> cell_averages(const Grid1D& grid, const std::function<double(double)>& profile)
{
    // 5-point Gauss-Legendre on [-1, 1]
    static constexpr std::array<double, 5> nodes = {
        0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640, 0.9061798459386640};
    static constexpr std::array<double, 5> weights = {
        0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891,
        0.2369268850561891};

    std::vector<double> out(grid.n_cells);
    const double half = 0.5 * grid.dz;
    for (int i = 0; i < grid.n_cells; ++i) {
        const double c = grid.center(i);
        double s = 0.0;
        for (std::size_t q = 0; q < nodes.size(); ++q) s += weights[q] * profile(c + half * nodes[q]);
        out[i] = 0.5 * s;
    }
    return out;
}

void rescale_to_mass(std::span<double> values, double dz, double mass)
{
    double s = 0.0;
    for (double v : values) s += v;
    if (!(s > 0.0)) throw InvalidArgument("cannot rescale a field with zero mass");
    const double factor = mass / (s * dz);
    for (double& v : values) v *= factor;
}

DensityField project_initial(const InitialCondition& ic, const Grid1D& grid)
{
    if (!(ic.target_mass > 0.0)) throw InvalidArgument("initial condition: target mass must be positive");

    std::vector<double> values;
    switch (ic.kind) {
    case InitialKind::exponential: {
        if (!(ic.alpha > 0.0)) throw InvalidArgument("exponential initial data needs alpha > 0");
        const double a = ic.alpha;
        values = cell_averages(grid, [a](double z) { return a * std::exp(-a * z); });
        break;
    }
    case InitialKind::half_gaussian: {
        if (!(ic.sigma > 0.0)) throw InvalidArgument("half_gaussian initial data needs sigma > 0");
        const double s = ic.sigma;
        const double c = ic.shift;
        values = cell_averages(grid, [s, c](double z) {
            const double x = (z - c) / s;
            return std::exp(-0.5 * x * x);
        });
        break;
    }
    case InitialKind::step: {
        if (!(ic.width > 0.0)) throw InvalidArgument("step initial data needs width > 0");
        values.resize(grid.n_cells);
        for (int i = 0; i < grid.n_cells; ++i) {
            const double lo = grid.face(i);
            const double hi = grid.face(i + 1);
            values[i] = std::clamp(ic.width - lo, 0.0, hi - lo) / grid.dz;
        }
        break;
    }
    case InitialKind::table: {
        const auto table = read_profile_table(ic.path);
        const auto z = grid.centers();
        values = interpolate_table(table, z);
        break;
    }
    }
    rescale_to_mass(values, grid.dz, ic.target_mass);
    return DensityField{grid, std::move(values), 0.0};
}

double weighted_integral(const DensityField& f, const Weight& w)
{
    const Grid1D& g = f.grid;
    if (w.kind == Weight::Kind::exp_alpha) {
        const double top = w.alpha * g.center(g.n_cells - 1);
        if (top > std::log(std::numeric_limits<double>::max()) - 1.0) {
            std::ostringstream msg;
            msg << "exp(alpha z) overflows for alpha=" << w.alpha << " on z_max=" << g.z_max;
            throw NumericOverflow(msg.str());
        }
    }
    if (w.kind == Weight::Kind::custom && static_cast<int>(w.samples.size()) != g.n_cells)
        throw InvalidArgument("custom weight: sample count does not match grid");

    double s = 0.0;
    for (int i = 0; i < g.n_cells; ++i) {
        const double z = g.center(i);
        double wi = 1.0;
        switch (w.kind) {
        case Weight::Kind::one: wi = 1.0; break;
        case Weight::Kind::z: wi = z; break;
        case Weight::Kind::half_z2: wi = 0.5 * z * z; break;
        case Weight::Kind::exp_alpha: wi = std::exp(w.alpha * z); break;
        case Weight::Kind::custom: wi = w.samples[i]; break;
        }
        s += wi * f.values[i];
    }
    return s * g.dz;
}

} // namespace polarsim
