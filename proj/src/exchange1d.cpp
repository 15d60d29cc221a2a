#include "polarsim/exchange1d.hpp"

#include "drive1d.hpp"
#include "polarsim/errors.hpp"
#include "polarsim/scheme.hpp"
#include "polarsim/solver1d.hpp"

#include <cmath>
#include <optional>
#include <sstream>

namespace polarsim {

namespace {

// Advances n and mu together; returns the new mu.
double advance_exchange(DensityField& n, double mu, double gamma, double dt)
{
    const double tr = fitted_wall_value(n.values[0], mu, n.grid.dz);
    const double rate = tr - gamma * mu;
    const std::vector<double> speeds(n.values.size() - 1, mu);
    advance_conservative(n.values, speeds, n.grid.dz, dt, rate, 0.0);
    return mu + dt * rate;
}

class ExchangeModel {
public:
    ExchangeModel(double mu, double gamma, double budget, std::optional<ReferenceProfile> reference)
        : mu_(mu), gamma_(gamma), budget_(budget), reference_(std::move(reference))
    {
    }

    double trace(const DensityField& n) const { return fitted_wall_value(n.values[0], mu_, n.grid.dz); }

    double stable_step(const DensityField& n, double cfl) const
    {
        return std::min(stable_dt(n.grid.dz, mu_, cfl), cfl / gamma_);
    }

    void advance(DensityField& n, double dt)
    {
        mu_ = advance_exchange(n, mu_, gamma_, dt);
        max_mu_ = std::max(max_mu_, mu_);
    }

    DiagnosticsRecord record(const DensityField& n, double tr, MonitorSummary& monitors) const
    {
        DiagnosticsRecord r = base_record(n, tr);
        monitors.audit_field(n, tr);
        if (reference_ && mu_ > 0.0) {
            r.lyapunov = lyapunov_exchange(n, mu_, budget_);
            const ExchangeDissipation d = dissipation_exchange(n, tr, mu_, budget_);
            r.dissipation = d.total();
            monitors.audit_exchange(d);
            ReferenceProfile scaled = *reference_;
            const double scale = n.mass() / reference_->mass();
            for (double& v : scaled.values) v *= scale;
            r.rel_entropy = relative_entropy(n, scaled);
            monitors.audit_reference(n, *reference_);
        }
        return r;
    }

    double mu() const { return mu_; }
    double max_mu() const { return max_mu_; }

private:
    double mu_;
    double gamma_;
    double budget_;
    double max_mu_ = 0.0;
    std::optional<ReferenceProfile> reference_;
};

} // namespace

double stable_dt_exchange(const ExchangeState& s, double cfl)
{
    return std::min(stable_dt(s.field.grid.dz, s.mu, cfl), 1.0 / s.gamma);
}

ExchangeState step_exchange(const ExchangeState& s, double dt)
{
    if (!(s.gamma > 0.0)) throw InvalidArgument("step_exchange: gamma must be positive");
    const double limit = stable_dt_exchange(s, 1.0);
    if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "step_exchange: dt=" << dt << " exceeds the admissible step " << limit;
        throw InvalidArgument(msg.str());
    }
    ExchangeState next = s;
    next.mu = advance_exchange(next.field, s.mu, s.gamma, dt);
    next.field.time += dt;
    ++next.step_count;
    return next;
}

ExchangeEquilibrium equilibrium_exchange(double M, double gamma, const Grid1D& grid)
{
    if (!(gamma > 0.0)) throw InvalidArgument("equilibrium_exchange: gamma must be positive");
    if (!(M > gamma)) {
        std::ostringstream msg;
        msg << "no polarised equilibrium for M=" << M << " <= gamma=" << gamma;
        throw NoEquilibrium(msg.str());
    }
    ExchangeEquilibrium eq;
    eq.nu = M - gamma;
    eq.mass = gamma;
    eq.profile = profile_exchange(eq.nu, gamma, grid);
    return eq;
}

Trajectory1D run_exchange(const ExchangeRunConfig& config)
{
    const double M = config.initial.target_mass;
    if (!(config.mu0 >= 0.0) || !(config.mu0 < M))
        throw InvalidArgument("run_exchange: need 0 <= mu0 < M");
    if (!(config.gamma > 0.0)) throw InvalidArgument("run_exchange: gamma must be positive");

    const Grid1D grid = make_grid_1d(config.z_max, config.n_cells);
    InitialCondition ic = config.initial;
    ic.target_mass = M - config.mu0;
    DensityField n = project_initial(ic, grid);

    // the Lyapunov structure is established for unit detachment rate
    std::optional<ReferenceProfile> reference;
    if (config.gamma == 1.0 && M > 1.0) {
        ReferenceProfile h = profile_exchange(M - 1.0, 1.0, grid);
        if (std::abs(h.mass() - 1.0) <= 1e-6) reference = std::move(h);
    }

    ExchangeModel model(config.mu0, config.gamma, M, std::move(reference));
    const auto limits = detail::resolve_limits(config.controls, M, grid, false);
    Trajectory1D out = detail::drive_1d(model, std::move(n), config.controls, limits);
    out.terminal_mu = model.mu();
    if (model.max_mu() > M * (1.0 + 1e-12))
        throw Error("run_exchange: boundary concentration exceeded the total budget");
    return out;
}

} // namespace polarsim
