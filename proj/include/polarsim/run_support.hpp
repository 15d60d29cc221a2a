#pragma once

#include "polarsim/core.hpp"
#include "polarsim/diagnostics.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace polarsim {

enum class BlowUpCriterion { none, density_cap, dt_floor, trace_runaway };

std::string to_string(BlowUpCriterion c);

struct BlowUpReport {
    bool detected = false;
    double t_detect = 0.0;
    BlowUpCriterion criterion = BlowUpCriterion::none;
    /// Upper bound on the blow-up time when the theory provides one.
    std::optional<double> analytic_bound;
};

/// Time-stepping and detector settings shared by every solver driver.
/// Nonpositive caps mean "use the grid-dependent default".
struct RunControls {
    double t_end = 1.0;
    double cfl = 0.45;
    double dt_floor = 1e-12;
    double output_every = 0.0;  // 0: t_end / 200
    double density_cap = 0.0;   // 0: 1e6 * M / z_max
    double trace_cap = 0.0;     // 0: default_trace_cap(dz)
};

/// The 1D detector fires once the first cell holds this much mass, i.e. when
/// the wall value exceeds -log(1 - f) / dz.
inline constexpr double wall_cell_collapse_mass = 0.75;

inline double default_trace_cap(double dz)
{
    return -std::log1p(-wall_cell_collapse_mass) / dz;
}

/// 2D wall values above this fraction of M / (dy dz) mean the mass has
/// collapsed onto the first few cells.
inline constexpr double trace_runaway_fraction = 0.25;

/// Worst residuals of the online inequality audits; a violation is any
/// residual below its tolerance.
struct MonitorSummary {
    double min_trace_residual = 1e300;
    double min_carleman_residual = 1e300;
    double min_csiszar_kullback_residual = 1e300;
    double min_exchange_dissipation_term = 1e300;
    int violations = 0;

    static constexpr double trace_tol = 1e-9;
    static constexpr double carleman_tol = 1e-9;
    static constexpr double csiszar_kullback_tol = 1e-8;
    static constexpr double dissipation_tol = 1e-9;

    void audit_field(const DensityField& f, double trace);
    void audit_reference(const DensityField& f, const ReferenceProfile& g);
    void audit_exchange(const ExchangeDissipation& d);
    void merge(const MonitorSummary& other);
};

/// Output of a 1D driver.
struct Trajectory1D {
    std::vector<DiagnosticsRecord> records;
    BlowUpReport blowup;
    DensityField terminal;
    MonitorSummary monitors;
    /// Extra scalar state at the end (boundary concentration for the exchange model).
    std::optional<double> terminal_mu;
    long steps = 0;
};

/// Fills the model-independent entries of a record for a 1D field.
DiagnosticsRecord base_record(const DensityField& f, double trace);

/// Output schedule t_k = k * every, capped at t_end.
class OutputClock {
public:
    OutputClock(double t_end, double every);

    double next() const { return next_; }
    /// True if t reached the pending output time; the schedule then advances.
    bool due(double t);
    double every() const { return every_; }

private:
    double t_end_;
    double every_;
    long index_ = 1;
    double next_;
};

} // namespace polarsim
