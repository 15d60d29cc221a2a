#pragma once

#include "polarsim/core.hpp"
#include "polarsim/diagnostics.hpp"
#include "polarsim/run_support.hpp"
#include "polarsim/solver1d.hpp"

namespace polarsim {

/// Density on (0, L) driven by the difference of its two wall values.
struct IntervalState {
    DensityField field;
    long step_count = 0;

    double t() const { return field.time; }
};

/// Stationary profile h(z) = alpha exp(-(alpha - beta) z) on (0, L).
struct IntervalEquilibrium {
    double alpha = 0.0;
    double beta = 0.0;
    double L = 0.0;

    bool constant() const { return alpha == beta; }
};

/// Wall values at z = 0 and z = L. Both are read off exponential profiles
/// with the common decay rate a = n(0) - n(L), fitted to the mean of the wall
/// cell; a solves a = n0 B(-a h) - n_last B(a h). Infinite when the heavier
/// wall cell alone holds unit mass.
double left_trace_interval(const DensityField& f);
double right_trace_value(const DensityField& f);

/// One step of d_t n = d_z(d_z n + (n(0) - n(L)) n) with zero flux at both ends.
IntervalState step_interval(const IntervalState& s, double dt);

/// Right trace beta solving beta = alpha exp(-(alpha - beta) L). Picks the
/// non-constant root: beta > alpha when alpha L < 1, beta < alpha when alpha L > 1,
/// beta = alpha when alpha L = 1.
IntervalEquilibrium solve_interval_equilibrium(double alpha, double L);

/// M > 1 and 4 J0 < L M.
bool blowup_criterion_interval(double M, double J0, double L);

/// One step of d_t n = d_z(d_z n + exp(-alpha z) n(0) n) with zero far flux.
Bks1dState step_finite_range(const Bks1dState& s, double dt, double alpha);

/// M > 1 and (Ja^4/M^4)(1 - M^2/Ja^2) < M - 1. Throws InvalidArgument when Ja < M.
bool blowup_criterion_range(double M, double J_alpha0, double alpha);

struct IntervalRunConfig {
    InitialCondition initial;
    double L = 10.0;
    int n_cells = 400;
    RunControls controls;
};

/// rel_entropy is measured against the constant state of the same mass.
Trajectory1D run_interval(const IntervalRunConfig& config);

struct RangeRunConfig {
    InitialCondition initial;
    double alpha = 1.0;   // interaction range parameter
    double z_max = 30.0;
    int n_cells = 300;
    RunControls controls;
};

/// Records carry J_alpha = int exp(alpha z) n.
Trajectory1D run_finite_range(const RangeRunConfig& config);

} // namespace polarsim
