#include "polarsim/rescaled1d.hpp"

#include "drive1d.hpp"
#include "polarsim/errors.hpp"
#include "polarsim/scheme.hpp"
#include "polarsim/solver1d.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>

namespace polarsim {

double mass_map_P(double alpha)
{
    if (!(alpha > 0.0)) throw InvalidArgument("mass_map_P: alpha must be positive");
    // integrate in y = alpha s for alpha >= 1 and in s for alpha < 1 so the
    // integrand stays O(1); it drops below 1e-16 once alpha s + s^2/2 exceeds 16 ln 10
    using quad = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double cutoff = 16.0 * std::log(10.0);
    const double s_end = std::sqrt(alpha * alpha + 2.0 * cutoff) - alpha;
    if (alpha >= 1.0) {
        const double inv2a2 = 0.5 / (alpha * alpha);
        auto integrand = [inv2a2](double y) { return std::exp(-y - y * y * inv2a2); };
        return quad::integrate(integrand, 0.0, alpha * s_end, 20, 1e-14);
    }
    auto integrand = [alpha](double s) { return std::exp(-alpha * s - 0.5 * s * s); };
    return alpha * quad::integrate(integrand, 0.0, s_end, 20, 1e-14);
}

double solve_alpha(double M)
{
    if (!(M > 0.0) || !(M < 1.0)) throw InvalidArgument("solve_alpha: needs 0 < M < 1");
    double lo = 1.0;
    double hi = 1.0;
    while (mass_map_P(hi) < M) hi *= 2.0;
    while (mass_map_P(lo) > M) lo *= 0.5;
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double p = mass_map_P(mid);
        if (std::abs(p - M) <= 1e-13 || hi - lo <= 1e-15 * hi) break;
        (p < M ? lo : hi) = mid;
    }
    return mid;
}

ReferenceProfile profile_G(double alpha, const Grid1D& grid)
{
    return profile_rescaled_G(alpha, grid);
}

double stable_dtau(const DensityField& u, double cfl)
{
    return stable_dt(u.grid.dz, u.grid.z_max + trace_value(u), cfl);
}

namespace {

void advance_rescaled(DensityField& u, double dtau)
{
    const double tr = trace_value(u);
    std::vector<double> speeds(u.values.size() - 1);
    for (std::size_t i = 0; i < speeds.size(); ++i) speeds[i] = u.grid.face(static_cast<int>(i) + 1) + tr;
    advance_conservative(u.values, speeds, u.grid.dz, dtau);
}

class RescaledModel {
public:
    RescaledModel(double alpha, double mass, const Grid1D& grid)
        : alpha_(alpha), mass_(mass), reference_(profile_G(alpha, grid))
    {
    }

    double trace(const DensityField& u) const { return trace_value(u); }
    double stable_step(const DensityField& u, double cfl) const { return stable_dtau(u, cfl); }
    void advance(DensityField& u, double dtau) const { advance_rescaled(u, dtau); }

    DiagnosticsRecord record(const DensityField& u, double tr, MonitorSummary& monitors) const
    {
        DiagnosticsRecord r = base_record(u, tr);
        const RescaledLyapunov lyap = lyapunov_rescaled(u, alpha_, mass_);
        r.rel_entropy = lyap.H;
        r.lyapunov = lyap.L;
        r.dissipation = dissipation_rescaled(u, tr, mass_);
        monitors.audit_field(u, tr);
        monitors.audit_reference(u, reference_);
        return r;
    }

private:
    double alpha_;
    double mass_;
    ReferenceProfile reference_;
};

} // namespace

RescaledState step_rescaled(const RescaledState& s, double dtau)
{
    const double limit = stable_dtau(s.field, 1.0);
    if (!(dtau > 0.0) || dtau > limit * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "step_rescaled: dtau=" << dtau << " violates the positivity limit " << limit;
        throw InvalidArgument(msg.str());
    }
    RescaledState next = s;
    advance_rescaled(next.field, dtau);
    next.field.time += dtau;
    ++next.step_count;
    return next;
}

DensityField frame_transform(const DensityField& n)
{
    if (n.time < 0.0) throw InvalidArgument("frame_transform: t must be nonnegative");
    const double s = std::sqrt(1.0 + 2.0 * n.time);
    DensityField u;
    u.grid = make_grid_1d(n.grid.z_max / s, n.grid.n_cells);
    u.values = n.values;
    for (double& v : u.values) v *= s;
    u.time = std::log(s);
    return u;
}

DensityField frame_inverse(const DensityField& u)
{
    const double s = std::exp(u.time);
    DensityField n;
    n.grid = make_grid_1d(u.grid.z_max * s, u.grid.n_cells);
    n.values = u.values;
    for (double& v : n.values) v /= s;
    n.time = 0.5 * (s * s - 1.0);
    return n;
}

Trajectory1D run_rescaled(const RescaledRunConfig& config)
{
    const double M = config.initial.target_mass;
    if (!(M < 1.0)) throw InvalidArgument("run_rescaled: the self-similar frame needs M < 1");
    const Grid1D grid = make_grid_1d(config.y_max, config.n_cells);
    DensityField u = project_initial(config.initial, grid);
    const double alpha = solve_alpha(M);
    RescaledModel model(alpha, M, grid);
    const auto limits = detail::resolve_limits(config.controls, M, grid, true);
    return detail::drive_1d(model, std::move(u), config.controls, limits);
}

} // namespace polarsim
