#include "polarsim/solver1d.hpp"

#include "drive1d.hpp"
#include "polarsim/diagnostics.hpp"
#include "polarsim/errors.hpp"
#include "polarsim/scheme.hpp"

#include <cmath>
#include <optional>
#include <sstream>

namespace polarsim {

double trace_value(const DensityField& f)
{
    if (f.values.size() < 3) throw InvalidArgument("trace_value needs at least 3 cells");
    return self_consistent_wall_value(f.values[0], f.grid.dz);
}

double stable_dt(const DensityField& f, double a, double cfl)
{
    if (a < 0.0) throw InvalidArgument("stable_dt: advection speed must be nonnegative");
    return polarsim::stable_dt(f.grid.dz, a, cfl);
}

namespace {

void advance_bks(DensityField& f, double trace, double dt)
{
    const std::vector<double> speeds(f.values.size() - 1, trace);
    advance_conservative(f.values, speeds, f.grid.dz, dt);
}

class BksModel {
public:
    BksModel(double mass, std::optional<ReferenceProfile> reference)
        : mass_(mass), reference_(std::move(reference))
    {
    }

    double trace(const DensityField& f) const { return trace_value(f); }

    double stable_step(const DensityField& f, double cfl) const
    {
        return stable_dt(f, trace_value(f), cfl);
    }

    void advance(DensityField& f, double dt) const { advance_bks(f, trace_value(f), dt); }

    DiagnosticsRecord record(const DensityField& f, double tr, MonitorSummary& monitors) const
    {
        DiagnosticsRecord r = base_record(f, tr);
        r.dissipation = fisher_dissipation(f) + wall_fisher_segment(f, tr) - tr * tr;
        monitors.audit_field(f, tr);
        if (reference_) {
            r.rel_entropy = relative_entropy(f, *reference_);
            monitors.audit_reference(f, *reference_);
        }
        return r;
    }

    double mass() const { return mass_; }

private:
    double mass_;
    std::optional<ReferenceProfile> reference_;
};

} // namespace

Bks1dState step_bks(const Bks1dState& s, double dt)
{
    const double tr = trace_value(s.field);
    const double limit = stable_dt(s.field, tr, 1.0);
    if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "step_bks: dt=" << dt << " violates the positivity limit " << limit;
        throw InvalidArgument(msg.str());
    }
    Bks1dState next = s;
    advance_bks(next.field, tr, dt);
    next.field.time += dt;
    ++next.step_count;
    return next;
}

double blowup_time_bound(double M, double J0)
{
    if (!(M > 1.0)) throw InvalidArgument("blowup_time_bound: needs M > 1");
    if (!(J0 > 0.0)) throw InvalidArgument("blowup_time_bound: needs J0 > 0");
    return J0 * J0 / ((M - 1.0) * M * M);
}

bool is_non_increasing(std::span<const double> values)
{
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        if (values[i + 1] > values[i] * (1.0 + 1e-12)) return false;
    return true;
}

Trajectory1D run_bks(const BksRunConfig& config)
{
    const Grid1D grid = make_grid_1d(config.z_max, config.n_cells);
    DensityField field = project_initial(config.initial, grid);
    const double M = config.initial.target_mass;
    const double J0 = weighted_integral(field, Weight::z());

    // critical mass: the attractor is h_alpha with 1/alpha = J0
    std::optional<ReferenceProfile> reference;
    if (std::abs(M - 1.0) <= 1e-12) {
        ReferenceProfile h = profile_exp_halfline(1.0 / J0, grid);
        if (std::abs(h.mass() - M) <= 1e-6 * M) reference = std::move(h);
    }

    BksModel model(M, std::move(reference));
    const auto limits = detail::resolve_limits(config.controls, M, grid, true);
    const bool monotone = is_non_increasing(field.values);
    Trajectory1D out = detail::drive_1d(model, std::move(field), config.controls, limits);
    if (M > 1.0 && monotone) out.blowup.analytic_bound = blowup_time_bound(M, J0);
    return out;
}

} // namespace polarsim
