#include "polarsim/variants1d.hpp"

#include "drive1d.hpp"
#include "polarsim/errors.hpp"
#include "polarsim/scheme.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>

namespace polarsim {

namespace {

// Wall drift a of the interval model solving a = n0 B(-a h) - n_last B(a h):
// both wall values are read off exponential profiles with the common decay
// rate a. Returns nullopt when a wall cell alone holds unit mass (no root).
std::optional<double> interval_drift(const DensityField& f)
{
    const auto& v = f.values;
    if (v.size() < 3) throw InvalidArgument("interval traces need at least 3 cells");
    const double h = f.grid.dz;
    const double n0 = v.front();
    const double nl = v.back();
    if (n0 == nl) return 0.0;
    if ((n0 > nl && n0 * h >= 1.0) || (nl > n0 && nl * h >= 1.0)) return std::nullopt;
    auto g = [=](double a) { return a * (n0 * h - 1.0) + (n0 - nl) * bernoulli(a * h); };
    const double dir = n0 > nl ? 1.0 : -1.0;
    double lo = 0.0;
    double hi = dir * std::max(1.0, std::abs(n0 - nl));
    while (g(hi) * dir > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) return std::nullopt;
    }
    if (g(hi) == 0.0) return hi;
    std::uintmax_t iters = 200;
    auto tol = [](double x, double y) { return std::abs(x - y) <= 1e-15 * std::max(std::abs(x), std::abs(y)); };
    const auto r = boost::math::tools::toms748_solve(g, std::min(lo, hi), std::max(lo, hi), tol, iters);
    return 0.5 * (r.first + r.second);
}

} // namespace

double left_trace_interval(const DensityField& f)
{
    const auto a = interval_drift(f);
    if (!a) return f.values.front() >= f.values.back() ? std::numeric_limits<double>::infinity() : 0.0;
    return fitted_wall_value(f.values.front(), *a, f.grid.dz);
}

double right_trace_value(const DensityField& f)
{
    const auto a = interval_drift(f);
    if (!a) return f.values.back() > f.values.front() ? std::numeric_limits<double>::infinity() : 0.0;
    return fitted_wall_value(f.values.back(), -*a, f.grid.dz);
}

namespace {

void require_positive_step(double dt, double limit, const char* who)
{
    if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << who << ": dt=" << dt << " violates the positivity limit " << limit;
        throw InvalidArgument(msg.str());
    }
}

double interval_speed(const DensityField& f)
{
    const auto a = interval_drift(f);
    if (!a) return f.values.front() > f.values.back() ? std::numeric_limits<double>::infinity()
                                                      : -std::numeric_limits<double>::infinity();
    return *a;
}

void advance_interval(DensityField& f, double dt)
{
    const std::vector<double> speeds(f.values.size() - 1, interval_speed(f));
    advance_conservative(f.values, speeds, f.grid.dz, dt);
}

std::vector<double> range_speeds(const Grid1D& g, double alpha, double trace)
{
    std::vector<double> s(g.n_cells - 1);
    for (int i = 0; i + 1 < g.n_cells; ++i) s[i] = std::exp(-alpha * g.face(i + 1)) * trace;
    return s;
}

void advance_range(DensityField& f, double alpha, double dt)
{
    const auto speeds = range_speeds(f.grid, alpha, trace_value(f));
    advance_conservative(f.values, speeds, f.grid.dz, dt);
}

class IntervalModel {
public:
    explicit IntervalModel(ReferenceProfile flat) : flat_(std::move(flat)) {}

    double trace(const DensityField& f) const { return left_trace_interval(f); }
    double stable_step(const DensityField& f, double cfl) const
    {
        return stable_dt(f.grid.dz, std::abs(interval_speed(f)), cfl);
    }
    void advance(DensityField& f, double dt) const { advance_interval(f, dt); }

    DiagnosticsRecord record(const DensityField& f, double tr, MonitorSummary& monitors) const
    {
        DiagnosticsRecord r = base_record(f, tr);
        r.rel_entropy = relative_entropy(f, flat_);
        monitors.audit_field(f, tr);
        monitors.audit_reference(f, flat_);
        return r;
    }

private:
    ReferenceProfile flat_;
};

class RangeModel {
public:
    explicit RangeModel(double alpha) : alpha_(alpha) {}

    double trace(const DensityField& f) const { return trace_value(f); }
    // the face speeds never exceed the wall value
    double stable_step(const DensityField& f, double cfl) const
    {
        return stable_dt(f.grid.dz, trace_value(f), cfl);
    }
    void advance(DensityField& f, double dt) const { advance_range(f, alpha_, dt); }

    DiagnosticsRecord record(const DensityField& f, double tr, MonitorSummary& monitors) const
    {
        DiagnosticsRecord r = base_record(f, tr);
        r.J_alpha = weighted_integral(f, Weight::exp_alpha(alpha_));
        monitors.audit_field(f, tr);
        return r;
    }

private:
    double alpha_;
};

} // namespace

IntervalState step_interval(const IntervalState& s, double dt)
{
    const double limit = stable_dt(s.field.grid.dz, std::abs(interval_speed(s.field)), 1.0);
    require_positive_step(dt, limit, "step_interval");
    IntervalState next = s;
    advance_interval(next.field, dt);
    next.field.time += dt;
    ++next.step_count;
    return next;
}

IntervalEquilibrium solve_interval_equilibrium(double alpha, double L)
{
    if (!(alpha > 0.0) || !(L > 0.0)) throw InvalidArgument("solve_interval_equilibrium: needs alpha, L > 0");
    IntervalEquilibrium eq{alpha, alpha, L};
    const double aL = alpha * L;
    if (aL == 1.0) return eq;

    // g is concave with the trivial root beta = alpha; its maximum sits at beta_star
    auto g = [alpha, L](double b) { return b - alpha * std::exp(-(alpha - b) * L); };
    const double beta_star = alpha - std::log(aL) / L;
    double lo = 0.0;
    double hi = beta_star;
    if (aL < 1.0) {
        lo = beta_star;
        double step = std::max(beta_star, 1.0 / L);
        hi = beta_star + step;
        while (g(hi) > 0.0) {
            step *= 2.0;
            hi = beta_star + step;
        }
    }
    if (!(g(hi) * g(lo) < 0.0)) {
        // beta_star coincides with alpha to round-off: the branches merge
        return eq;
    }
    boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 2);
    std::uintmax_t max_iter = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, tol, max_iter);
    eq.beta = std::abs(g(a)) <= std::abs(g(b)) ? a : b;
    return eq;
}

bool blowup_criterion_interval(double M, double J0, double L)
{
    return M > 1.0 && 4.0 * J0 < L * M;
}

Bks1dState step_finite_range(const Bks1dState& s, double dt, double alpha)
{
    if (!(alpha > 0.0)) throw InvalidArgument("step_finite_range: alpha must be positive");
    const double limit = stable_dt(s.field.grid.dz, trace_value(s.field), 1.0);
    require_positive_step(dt, limit, "step_finite_range");
    Bks1dState next = s;
    advance_range(next.field, alpha, dt);
    next.field.time += dt;
    ++next.step_count;
    return next;
}

bool blowup_criterion_range(double M, double J_alpha0, double alpha)
{
    if (!(alpha > 0.0)) throw InvalidArgument("blowup_criterion_range: alpha must be positive");
    if (J_alpha0 < M) {
        std::ostringstream msg;
        msg << "blowup_criterion_range: J_alpha(0)=" << J_alpha0 << " is below the mass " << M;
        throw InvalidArgument(msg.str());
    }
    if (!(M > 1.0)) return false;
    const double r = J_alpha0 / M;
    const double lhs = r * r * r * r * (1.0 - 1.0 / (r * r));
    return lhs < M - 1.0;
}

Trajectory1D run_interval(const IntervalRunConfig& config)
{
    const Grid1D grid = make_grid_1d(config.L, config.n_cells);
    DensityField f = project_initial(config.initial, grid);
    const double M = config.initial.target_mass;
    const double level = f.mass() / config.L;
    IntervalModel model(profile_interval(level, level, grid));
    const auto limits = detail::resolve_limits(config.controls, M, grid, true);
    return detail::drive_1d(model, std::move(f), config.controls, limits);
}

Trajectory1D run_finite_range(const RangeRunConfig& config)
{
    if (!(config.alpha > 0.0)) throw InvalidArgument("run_finite_range: alpha must be positive");
    const Grid1D grid = make_grid_1d(config.z_max, config.n_cells);
    DensityField f = project_initial(config.initial, grid);
    const double M = config.initial.target_mass;
    RangeModel model(config.alpha);
    const auto limits = detail::resolve_limits(config.controls, M, grid, true);
    return detail::drive_1d(model, std::move(f), config.controls, limits);
}

} // namespace polarsim
