#include "polarsim/solver2d.hpp"

#include "polarsim/errors.hpp"
#include "polarsim/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

namespace polarsim {

double Field2D::mass() const
{
    double s = 0.0;
    for (double v : values) s += v;
    return s * grid.dy * grid.dz;
}

double Field2D::max_value() const
{
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

Field2D make_field_2d(const Grid2D& grid, std::vector<double> values, double time)
{
    if (values.size() != grid.size()) throw InvalidArgument("make_field_2d: value count does not match the grid");
    for (double v : values)
        if (!(v >= 0.0)) throw InvalidArgument("make_field_2d: values must be nonnegative");
    return Field2D{grid, std::move(values), time};
}

Field2D project_initial_2d(const InitialCondition2D& ic, const Grid2D& grid)
{
    if (!(ic.target_mass > 0.0)) throw InvalidArgument("2D initial condition: target mass must be positive");
    if (!(ic.y_sigma > 0.0)) throw InvalidArgument("2D initial condition: y_sigma must be positive");
    const Grid1D gy = make_grid_1d(grid.y_max - grid.y_min, grid.ny);
    const double y0 = ic.y_center - grid.y_min;
    const double s = ic.y_sigma;
    const std::vector<double> py = cell_averages(gy, [y0, s](double y) {
        const double x = (y - y0) / s;
        return std::exp(-0.5 * x * x);
    });
    const DensityField pz = project_initial(ic.z_profile, make_grid_1d(grid.z_max, grid.nz));

    std::vector<double> v(grid.size());
    for (int i = 0; i < grid.nz; ++i)
        for (int j = 0; j < grid.ny; ++j) v[grid.index(i, j)] = pz.values[i] * py[j];
    Field2D f{grid, std::move(v), 0.0};
    const double m = f.mass();
    if (!(m > 0.0)) throw InvalidArgument("2D initial condition has no mass on the grid");
    for (double& x : f.values) x *= ic.target_mass / m;
    return f;
}

std::vector<double> trace_row(const Field2D& f)
{
    if (f.grid.nz < 3) throw InvalidArgument("trace_row needs at least 3 rows");
    std::vector<double> tr(f.grid.ny);
    for (int j = 0; j < f.grid.ny; ++j) tr[j] = extrapolate_wall(f.at(0, j), f.at(1, j));
    return tr;
}

namespace {

Velocity2D zero_velocity(const Grid2D& g)
{
    Velocity2D u;
    u.ny = g.ny;
    u.nz = g.nz;
    u.uy.assign(static_cast<std::size_t>(g.nz) * (g.ny + 1), 0.0);
    u.uz.assign(static_cast<std::size_t>(g.nz + 1) * g.ny, 0.0);
    return u;
}

void check_row(const std::vector<double>& tr, const Grid2D& g)
{
    if (static_cast<int>(tr.size()) != g.ny) throw InvalidArgument("trace row length does not match ny");
    for (double v : tr)
        if (!(v >= 0.0)) throw InvalidArgument("trace row must be nonnegative");
}

// Runs task(k) for k in [0, count) on a few threads with a static partition.
void parallel_for(int count, long work_per_item, const std::function<void(int)>& task)
{
    const long total = work_per_item * count;
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int workers = total < 200000 ? 1 : static_cast<int>(std::min<unsigned>(hw, 8u));
    if (workers == 1) {
        for (int k = 0; k < count; ++k) task(k);
        return;
    }
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([w, workers, count, &task] {
            for (int k = w; k < count; k += workers) task(k);
        });
}

double max_abs(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

Velocity2D velocity_transversal(const std::vector<double>& tr, const Grid2D& grid)
{
    check_row(tr, grid);
    Velocity2D u = zero_velocity(grid);
    for (int iff = 0; iff <= grid.nz; ++iff)
        for (int j = 0; j < grid.ny; ++j) u.uz[static_cast<std::size_t>(iff) * grid.ny + j] = -tr[j];
    return u;
}

Velocity2D velocity_potential(const std::vector<double>& tr, const Grid2D& grid)
{
    check_row(tr, grid);
    Velocity2D u = zero_velocity(grid);
    const int ny = grid.ny;
    const double dy = grid.dy;

    // the kernel depends on the source offset only, so each row tabulates it once
    auto assemble_uy = [&](int i) {
        const double z = grid.z_center(i);
        std::vector<double> k(2 * ny);
        for (int d = -(ny - 1); d <= ny; ++d) {
            const double s = (d - 0.5) * dy;
            k[d + ny - 1] = s / (s * s + z * z) * dy;
        }
        double* row = &u.uy[static_cast<std::size_t>(i) * (ny + 1)];
        for (int jf = 1; jf < ny; ++jf) {
            double acc = 0.0;
            for (int jp = 0; jp < ny; ++jp) acc += k[jf - jp + ny - 1] * tr[jp];
            row[jf] = -acc;
        }
    };
    auto assemble_uz = [&](int iff) {
        const double z = grid.z_face(iff);
        std::vector<double> k(2 * ny - 1);
        for (int d = -(ny - 1); d <= ny - 1; ++d) {
            const double s = d * dy;
            k[d + ny - 1] = z / (s * s + z * z) * dy;
        }
        double* row = &u.uz[static_cast<std::size_t>(iff) * ny];
        for (int j = 0; j < ny; ++j) {
            double acc = 0.0;
            for (int jp = 0; jp < ny; ++jp) acc += k[j - jp + ny - 1] * tr[jp];
            row[j] = -acc;
        }
    };
    const long per_row = static_cast<long>(ny) * ny;
    parallel_for(grid.nz, per_row, assemble_uy);
    // z = 0 and z = z_max faces keep zero normal speed
    parallel_for(grid.nz - 1, per_row, [&](int k) { assemble_uz(k + 1); });
    return u;
}

std::vector<double> velocity_divergence(const Velocity2D& u, const Grid2D& grid)
{
    std::vector<double> div(grid.size());
    for (int i = 0; i < grid.nz; ++i)
        for (int j = 0; j < grid.ny; ++j)
            div[grid.index(i, j)] = (u.y_speed(i, j + 1) - u.y_speed(i, j)) / grid.dy +
                                    (u.z_speed(i + 1, j) - u.z_speed(i, j)) / grid.dz;
    return div;
}

double positivity_limit_2d(const Grid2D& g, const Velocity2D& u)
{
    const double hy2 = g.dy * g.dy;
    const double hz2 = g.dz * g.dz;
    double worst = 0.0;
    for (int i = 0; i < g.nz; ++i)
        for (int j = 0; j < g.ny; ++j) {
            // drift a = -u; the outgoing weight of a face is B(a h) on its low side, B(-a h) on its high side
            double c = 0.0;
            if (j > 0) c += bernoulli(u.y_speed(i, j) * g.dy) / hy2;
            if (j + 1 < g.ny) c += bernoulli(-u.y_speed(i, j + 1) * g.dy) / hy2;
            if (i > 0) c += bernoulli(u.z_speed(i, j) * g.dz) / hz2;
            if (i + 1 < g.nz) c += bernoulli(-u.z_speed(i + 1, j) * g.dz) / hz2;
            worst = std::max(worst, c);
        }
    return worst > 0.0 ? 1.0 / worst : std::numeric_limits<double>::infinity();
}

double stable_dt_2d(const Grid2D& g, const Velocity2D& u, double cfl)
{
    const double rate =
        2.0 / (g.dy * g.dy) + 2.0 / (g.dz * g.dz) + max_abs(u.uy) / g.dy + max_abs(u.uz) / g.dz;
    return cfl / rate;
}

Field2D step_2d(const Field2D& f, const Velocity2D& u, double dt)
{
    const Grid2D& g = f.grid;
    if (u.ny != g.ny || u.nz != g.nz) throw InvalidArgument("step_2d: velocity and field grids differ");
    const double limit = positivity_limit_2d(g, u);
    if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "step_2d: dt=" << dt << " violates the positivity limit " << limit;
        throw InvalidArgument(msg.str());
    }

    Field2D next = f;
    auto& out = next.values;
    const auto& n = f.values;
    for (int i = 0; i < g.nz; ++i)
        for (int jf = 1; jf < g.ny; ++jf) {
            const std::size_t l = g.index(i, jf - 1);
            const std::size_t r = g.index(i, jf);
            const double flux = fitted_flux(n[l], n[r], -u.y_speed(i, jf), g.dy) * dt / g.dy;
            out[l] += flux;
            out[r] -= flux;
        }
    for (int iff = 1; iff < g.nz; ++iff)
        for (int j = 0; j < g.ny; ++j) {
            const std::size_t l = g.index(iff - 1, j);
            const std::size_t r = g.index(iff, j);
            const double flux = fitted_flux(n[l], n[r], -u.z_speed(iff, j), g.dz) * dt / g.dz;
            out[l] += flux;
            out[r] -= flux;
        }
    for (double& v : out)
        if (v < 0.0) v = 0.0;
    next.time += dt;
    return next;
}

std::vector<double> marginal_y(const Field2D& f)
{
    std::vector<double> nu(f.grid.ny, 0.0);
    for (int i = 0; i < f.grid.nz; ++i)
        for (int j = 0; j < f.grid.ny; ++j) nu[j] += f.at(i, j);
    for (double& v : nu) v *= f.grid.dz;
    return nu;
}

double second_moment_2d(const Field2D& f)
{
    const Grid2D& g = f.grid;
    double s = 0.0;
    for (int i = 0; i < g.nz; ++i) {
        const double z = g.z_center(i);
        for (int j = 0; j < g.ny; ++j) {
            const double y = g.y_center(j);
            s += 0.5 * (y * y + z * z) * f.at(i, j);
        }
    }
    return s * g.dy * g.dz;
}

double lp_norm(const Field2D& f, double p)
{
    if (!(p >= 1.0)) throw InvalidArgument("lp_norm needs p >= 1");
    double s = 0.0;
    for (double v : f.values) s += std::pow(v, p);
    return std::pow(s * f.grid.dy * f.grid.dz, 1.0 / p);
}

bool blowup_criterion_2d(double I0, double M, double C)
{
    return I0 <= C * M * M * M;
}

namespace {

DiagnosticsRecord record_2d(const Field2D& f, const std::vector<double>& tr)
{
    const Grid2D& g = f.grid;
    DiagnosticsRecord r;
    r.t = f.time;
    r.mass = f.mass();
    r.trace = tr.empty() ? 0.0 : *std::max_element(tr.begin(), tr.end());
    double J = 0.0;
    double ent = 0.0;
    double frame = 0.0;
    const int z_edge = g.nz - std::max(1, g.nz / 10);
    const int y_band = std::max(1, g.ny / 20);
    for (int i = 0; i < g.nz; ++i)
        for (int j = 0; j < g.ny; ++j) {
            const double v = f.at(i, j);
            J += g.z_center(i) * v;
            if (v > vacuum_threshold) ent += v * std::log(v);
            if (i >= z_edge || j < y_band || j >= g.ny - y_band) frame += v;
        }
    const double cell = g.dy * g.dz;
    r.J = J * cell;
    r.I = second_moment_2d(f);
    r.entropy = ent * cell;
    r.max_density = f.max_value();
    r.boundary_mass_fraction = r.mass > 0.0 ? frame * cell / r.mass : 0.0;
    return r;
}

} // namespace

Trajectory2D run_2d(const Run2DConfig& config)
{
    const Grid2D grid = make_grid_2d(config.y_min, config.y_max, config.z_max, config.ny, config.nz);
    Field2D f = project_initial_2d(config.initial, grid);
    const RunControls& rc = config.controls;
    const double M = config.initial.target_mass;
    const double area = (config.y_max - config.y_min) * config.z_max;
    const double density_cap = rc.density_cap > 0.0 ? rc.density_cap : 1e6 * M / area;
    const double trace_cap = rc.trace_cap > 0.0 ? rc.trace_cap : trace_runaway_fraction * M / (grid.dy * grid.dz);

    auto velocity = [&](const std::vector<double>& tr) {
        return config.kind == VelocityKind::transversal ? velocity_transversal(tr, grid)
                                                        : velocity_potential(tr, grid);
    };

    Trajectory2D out;
    if (config.C_2d > 0.0) out.criterion = blowup_criterion_2d(second_moment_2d(f), M, config.C_2d);
    auto emit = [&](const std::vector<double>& tr) {
        out.records.push_back(record_2d(f, tr));
        out.l2_norms.push_back(lp_norm(f, 2.0));
        out.marginals.push_back(marginal_y(f));
    };

    OutputClock clock(rc.t_end, rc.output_every);
    std::vector<double> tr = trace_row(f);
    emit(tr);
    while (f.time < rc.t_end) {
        const Velocity2D u = velocity(tr);
        const double dt_stable = stable_dt_2d(grid, u, rc.cfl);
        if (dt_stable < rc.dt_floor) {
            out.blowup = {true, f.time, BlowUpCriterion::dt_floor, std::nullopt};
            break;
        }
        const double gap = clock.next() - f.time;
        const bool lands = dt_stable >= gap;
        const double target = lands ? clock.next() : f.time + dt_stable;
        f = step_2d(f, u, lands ? gap : dt_stable);
        f.time = target;
        ++out.steps;

        tr = trace_row(f);
        BlowUpCriterion hit = BlowUpCriterion::none;
        if (f.max_value() > density_cap) hit = BlowUpCriterion::density_cap;
        else if (*std::max_element(tr.begin(), tr.end()) > trace_cap) hit = BlowUpCriterion::trace_runaway;
        if (hit != BlowUpCriterion::none) {
            out.blowup = {true, f.time, hit, std::nullopt};
            break;
        }
        if (clock.due(f.time)) emit(tr);
    }
    if (out.blowup.detected && out.records.back().t < f.time) emit(trace_row(f));
    out.terminal = std::move(f);
    return out;
}

} // namespace polarsim
