#include "polarsim/run_support.hpp"

#include "polarsim/scheme.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace polarsim {

std::string to_string(BlowUpCriterion c)
{
    switch (c) {
    case BlowUpCriterion::none: return "none";
    case BlowUpCriterion::density_cap: return "density_cap";
    case BlowUpCriterion::dt_floor: return "dt_floor";
    case BlowUpCriterion::trace_runaway: return "trace_runaway";
    }
    return "none";
}

void MonitorSummary::audit_field(const DensityField& f, double trace)
{
    const double r = check_trace_inequality(f, trace);
    min_trace_residual = std::min(min_trace_residual, r);
    if (r < -trace_tol) ++violations;
    for (double a : std::array{0.5, 1.0, 2.0}) {
        const double c = check_carleman_bound(f, a);
        min_carleman_residual = std::min(min_carleman_residual, c);
        if (c < -carleman_tol) ++violations;
    }
}

void MonitorSummary::audit_reference(const DensityField& f, const ReferenceProfile& g)
{
    const double r = check_csiszar_kullback(f, g);
    min_csiszar_kullback_residual = std::min(min_csiszar_kullback_residual, r);
    if (r < -csiszar_kullback_tol) ++violations;
}

void MonitorSummary::audit_exchange(const ExchangeDissipation& d)
{
    for (double term : {d.drift_fisher, d.wall_balance, d.exchange_log, d.relaxation}) {
        min_exchange_dissipation_term = std::min(min_exchange_dissipation_term, term);
        if (term < -dissipation_tol) ++violations;
    }
}

void MonitorSummary::merge(const MonitorSummary& other)
{
    min_trace_residual = std::min(min_trace_residual, other.min_trace_residual);
    min_carleman_residual = std::min(min_carleman_residual, other.min_carleman_residual);
    min_csiszar_kullback_residual =
        std::min(min_csiszar_kullback_residual, other.min_csiszar_kullback_residual);
    min_exchange_dissipation_term =
        std::min(min_exchange_dissipation_term, other.min_exchange_dissipation_term);
    violations += other.violations;
}

DiagnosticsRecord base_record(const DensityField& f, double trace)
{
    DiagnosticsRecord r;
    r.t = f.time;
    r.mass = f.mass();
    r.trace = trace;
    r.J = weighted_integral(f, Weight::z());
    r.I = weighted_integral(f, Weight::half_z2());
    r.entropy = entropy(f);
    r.max_density = f.max_value();
    r.boundary_mass_fraction = boundary_mass_fraction(f);
    return r;
}

OutputClock::OutputClock(double t_end, double every)
    : t_end_(t_end), every_(every > 0.0 ? every : t_end / 200.0), next_(std::min(every_, t_end))
{
}

bool OutputClock::due(double t)
{
    if (t < next_ - 1e-12 * std::max(1.0, next_)) return false;
    ++index_;
    next_ = std::min(index_ * every_, t_end_);
    return true;
}

} // namespace polarsim
