#pragma once

#include "polarsim/core.hpp"

#include <optional>
#include <vector>

namespace polarsim {

/// One output row: time plus every monitored functional. Optional entries are
/// left empty when the model has no such quantity.
struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;
    double trace = 0.0;
    double J = 0.0;
    double I = 0.0;
    std::optional<double> J_alpha;
    double entropy = 0.0;
    std::optional<double> rel_entropy;
    std::optional<double> lyapunov;
    std::optional<double> dissipation;
    double max_density = 0.0;
    double boundary_mass_fraction = 0.0;
};

enum class ProfileKind { exp_halfline, rescaled_G, interval, exchange };

/// Analytic reference density stored as exact cell averages on a grid.
struct ReferenceProfile {
    ProfileKind kind = ProfileKind::exp_halfline;
    double alpha = 0.0;
    double beta = 0.0;
    double L = 0.0;
    double nu = 0.0;
    double gamma = 0.0;
    Grid1D grid;
    std::vector<double> values;

    double mass() const;
};

/// h_alpha(z) = alpha exp(-alpha z); unit mass on the half-line.
ReferenceProfile profile_exp_halfline(double alpha, const Grid1D& grid);
/// G_alpha(y) = alpha exp(-alpha y - y^2/2); mass P(alpha).
ReferenceProfile profile_rescaled_G(double alpha, const Grid1D& grid);
/// h(z) = alpha exp(-(alpha - beta) z) on (0, L).
ReferenceProfile profile_interval(double alpha, double beta, const Grid1D& grid);
/// n(z) = gamma nu exp(-nu z): mass gamma, wall value gamma nu.
ReferenceProfile profile_exchange(double nu, double gamma, const Grid1D& grid);

/// Cells below this are treated as vacuum in every n log n expression.
inline constexpr double vacuum_threshold = 1e-300;

/// sum n log n dz with 0 log 0 = 0.
double entropy(const DensityField& f);

/// sum f log(f/g) dz. Masses must agree to 1e-6 relative; the reference is
/// then rescaled to the field's mass so the discrete Jensen bound is exact.
double relative_entropy(const DensityField& f, const ReferenceProfile& g);

/// 4 sum ((sqrt n_{i+1} - sqrt n_i)/dz)^2 dz over interior faces.
double fisher_dissipation(const DensityField& f);

/// Fisher contribution of the half cell between the wall and the first
/// center, given the wall value. Zero when trace equals n_0.
double wall_fisher_segment(const DensityField& f, double trace);

/// mass * (fisher + wall segment) - (trace - n_edge)^2, where n_edge is the
/// last cell value. Nonnegative up to round-off for any nonnegative field.
double check_trace_inequality(const DensityField& f, double trace);

/// RHS - LHS of  int f (log f)_+ <= int f (log f + alpha z) + 1/(alpha e).
double check_carleman_bound(const DensityField& f, double alpha);

/// 4 H(f|g) - ||f - g||_1^2 after normalizing both to unit mass.
double check_csiszar_kullback(const DensityField& f, const ReferenceProfile& g);

/// Sum |f_i - g_i| dz.
double l1_distance(std::span<const double> f, std::span<const double> g, double dz);

struct RescaledLyapunov {
    double L = 0.0;
    double H = 0.0;
    double moment_term = 0.0;
};

/// L = H(u|G_alpha) + (J - alpha(1-M))^2 / (2(1-M)).
RescaledLyapunov lyapunov_rescaled(const DensityField& u, double alpha, double M);

/// Dissipation of the rescaled Lyapunov functional at a given wall value:
/// int u (d_y log u + y + trace)^2 + ((1-M) trace - J)^2 / (1-M).
double dissipation_rescaled(const DensityField& u, double trace, double M);

/// m H(n | m h) + (mu - nu)^2/2 + mu log(mu/nu) + m log m, nu = M - 1,
/// h = nu exp(-nu z).
double lyapunov_exchange(const DensityField& n, double mu, double M);

struct ExchangeDissipation {
    double drift_fisher = 0.0;   // int n (d_z log n + n(0)/m)^2
    double wall_balance = 0.0;   // m (n(0)/m - mu)^2
    double exchange_log = 0.0;   // (n(0) - mu) log(n(0)/mu)
    double relaxation = 0.0;     // mu (mu - nu)^2

    double total() const { return drift_fisher + wall_balance + exchange_log + relaxation; }
};

ExchangeDissipation dissipation_exchange(const DensityField& n, double trace, double mu, double M);

/// Mass fraction in the last 10% of cells.
double boundary_mass_fraction(const DensityField& f);

} // namespace polarsim
