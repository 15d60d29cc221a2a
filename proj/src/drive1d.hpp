#pragma once

#include "polarsim/run_support.hpp"

#include <algorithm>
#include <cmath>

namespace polarsim::detail {

struct DetectorLimits {
    bool enabled = true;
    double density_cap = 0.0;
    double trace_cap = 0.0;
    double dt_floor = 0.0;
};

inline DetectorLimits resolve_limits(const RunControls& rc, double mass, const Grid1D& grid, bool enabled)
{
    DetectorLimits d;
    d.enabled = enabled;
    d.density_cap = rc.density_cap > 0.0 ? rc.density_cap : 1e6 * mass / grid.z_max;
    d.trace_cap = rc.trace_cap > 0.0 ? rc.trace_cap : default_trace_cap(grid.dz);
    d.dt_floor = rc.dt_floor;
    return d;
}

// Model concept:
//   double trace(const DensityField&) const;
//   double stable_step(const DensityField&, double cfl) const;
//   void advance(DensityField&, double dt);               // values only
//   DiagnosticsRecord record(const DensityField&, double trace, MonitorSummary&) const;
template <class Model>
Trajectory1D drive_1d(Model& model, DensityField field, const RunControls& rc, const DetectorLimits& limits)
{
    Trajectory1D out;
    OutputClock clock(rc.t_end, rc.output_every);
    auto emit = [&](double tr) { out.records.push_back(model.record(field, tr, out.monitors)); };

    emit(model.trace(field));
    while (field.time < rc.t_end) {
        const double dt_stable = model.stable_step(field, rc.cfl);
        if (limits.enabled && dt_stable < limits.dt_floor) {
            out.blowup = {true, field.time, BlowUpCriterion::dt_floor, std::nullopt};
            break;
        }
        const double gap = clock.next() - field.time;
        const bool lands = dt_stable >= gap;
        const double dt = lands ? gap : dt_stable;
        model.advance(field, dt);
        field.time = lands ? clock.next() : field.time + dt;
        ++out.steps;

        const double tr = model.trace(field);
        if (limits.enabled) {
            BlowUpCriterion hit = BlowUpCriterion::none;
            if (field.max_value() > limits.density_cap) hit = BlowUpCriterion::density_cap;
            else if (tr > limits.trace_cap) hit = BlowUpCriterion::trace_runaway;
            if (hit != BlowUpCriterion::none) {
                out.blowup = {true, field.time, hit, std::nullopt};
                break;
            }
        }
        if (clock.due(field.time)) emit(tr);
    }
    if (out.blowup.detected && out.records.back().t < field.time) emit(model.trace(field));
    out.terminal = std::move(field);
    return out;
}

} // namespace polarsim::detail
