#include "polarsim/diagnostics.hpp"

#include "polarsim/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace polarsim {

namespace {

double xlogx(double x)
{
    return x > vacuum_threshold ? x * std::log(x) : 0.0;
}

double sum(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

void require_same_grid(const DensityField& f, const ReferenceProfile& g)
{
    if (f.grid.n_cells != g.grid.n_cells || f.grid.dz != g.grid.dz)
        throw InvalidArgument("field and reference profile live on different grids");
}

// Sum f log(f / g) dz with both arrays already at equal mass.
double kl_sum(std::span<const double> f, std::span<const double> g, double dz)
{
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] <= vacuum_threshold) {
            s += g[i] - f[i];
            continue;
        }
        if (g[i] <= 0.0)
            throw SupportMismatch("reference vanishes at cell " + std::to_string(i) +
                                  " where the density is positive");
        // f log(f/g) - f + g keeps each term nonnegative; the extra terms sum to zero
        s += f[i] * std::log(f[i] / g[i]) - f[i] + g[i];
    }
    return s * dz;
}

double arithmetic_face(double a, double b)
{
    return 0.5 * (a + b);
}

} // namespace

double ReferenceProfile::mass() const
{
    return sum(values) * grid.dz;
}

ReferenceProfile profile_exp_halfline(double alpha, const Grid1D& grid)
{
    if (!(alpha > 0.0)) throw InvalidArgument("h_alpha needs alpha > 0");
    ReferenceProfile p;
    p.kind = ProfileKind::exp_halfline;
    p.alpha = alpha;
    p.grid = grid;
    p.values = cell_averages(grid, [alpha](double z) { return alpha * std::exp(-alpha * z); });
    return p;
}

ReferenceProfile profile_rescaled_G(double alpha, const Grid1D& grid)
{
    if (!(alpha > 0.0)) throw InvalidArgument("G_alpha needs alpha > 0");
    ReferenceProfile p;
    p.kind = ProfileKind::rescaled_G;
    p.alpha = alpha;
    p.grid = grid;
    p.values = cell_averages(grid, [alpha](double y) { return alpha * std::exp(-alpha * y - 0.5 * y * y); });
    return p;
}

ReferenceProfile profile_interval(double alpha, double beta, const Grid1D& grid)
{
    if (!(alpha > 0.0) || !(beta > 0.0)) throw InvalidArgument("interval profile needs alpha, beta > 0");
    ReferenceProfile p;
    p.kind = ProfileKind::interval;
    p.alpha = alpha;
    p.beta = beta;
    p.L = grid.z_max;
    p.grid = grid;
    const double rate = alpha - beta;
    p.values = cell_averages(grid, [alpha, rate](double z) { return alpha * std::exp(-rate * z); });
    return p;
}

ReferenceProfile profile_exchange(double nu, double gamma, const Grid1D& grid)
{
    if (!(nu > 0.0) || !(gamma > 0.0)) throw InvalidArgument("exchange profile needs nu, gamma > 0");
    ReferenceProfile p;
    p.kind = ProfileKind::exchange;
    p.nu = nu;
    p.gamma = gamma;
    p.grid = grid;
    p.values = cell_averages(grid, [nu, gamma](double z) { return gamma * nu * std::exp(-nu * z); });
    return p;
}

double entropy(const DensityField& f)
{
    double s = 0.0;
    for (double v : f.values) s += xlogx(v);
    return s * f.grid.dz;
}

double relative_entropy(const DensityField& f, const ReferenceProfile& g)
{
    require_same_grid(f, g);
    const double mf = f.mass();
    const double mg = g.mass();
    if (!(mg > 0.0) || std::abs(mf - mg) > 1e-6 * std::max(mf, mg))
        throw InvalidArgument("relative_entropy: masses differ (" + std::to_string(mf) + " vs " +
                              std::to_string(mg) + ")");
    std::vector<double> ref(g.values);
    const double scale = mf / mg;
    for (double& v : ref) v *= scale;
    return kl_sum(f.values, ref, f.grid.dz);
}

double fisher_dissipation(const DensityField& f)
{
    const auto& n = f.values;
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n.size(); ++i) {
        const double d = std::sqrt(n[i + 1]) - std::sqrt(n[i]);
        s += d * d;
    }
    return 4.0 * s / f.grid.dz;
}

double wall_fisher_segment(const DensityField& f, double trace)
{
    const double n0 = f.values.front();
    if (n0 <= 0.0) return trace > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    const double d = std::sqrt(trace) - std::sqrt(n0);
    // segment weight dz * n0 / (trace + n0), about dz/2 near equilibrium
    return 4.0 * d * d * (trace + n0) / (f.grid.dz * n0);
}

double check_trace_inequality(const DensityField& f, double trace)
{
    if (trace < 0.0) throw InvalidArgument("trace must be nonnegative");
    const double fisher = fisher_dissipation(f) + wall_fisher_segment(f, trace);
    const double jump = trace - f.values.back();
    return f.mass() * fisher - jump * jump;
}

double check_carleman_bound(const DensityField& f, double alpha)
{
    if (!(alpha > 0.0)) throw InvalidArgument("Carleman bound needs alpha > 0");
    // per cell: f(log f + alpha z) - f (log f)_+ = f min(log f, 0) + alpha z f
    double s = 0.0;
    for (int i = 0; i < f.grid.n_cells; ++i) {
        const double v = f.values[i];
        if (v <= vacuum_threshold) continue;
        const double lg = std::log(v);
        s += v * std::min(lg, 0.0) + alpha * f.grid.center(i) * v;
    }
    return s * f.grid.dz + 1.0 / (alpha * std::numbers::e);
}

double l1_distance(std::span<const double> f, std::span<const double> g, double dz)
{
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += std::abs(f[i] - g[i]);
    return s * dz;
}

double check_csiszar_kullback(const DensityField& f, const ReferenceProfile& g)
{
    require_same_grid(f, g);
    const double dz = f.grid.dz;
    const double mf = f.mass();
    const double mg = g.mass();
    if (!(mf > 0.0) || !(mg > 0.0)) throw InvalidArgument("Csiszar-Kullback check needs positive masses");
    std::vector<double> p(f.values);
    std::vector<double> q(g.values);
    for (double& v : p) v /= mf;
    for (double& v : q) v /= mg;
    const double h = kl_sum(p, q, dz);
    const double l1 = l1_distance(p, q, dz);
    return 4.0 * h - l1 * l1;
}

RescaledLyapunov lyapunov_rescaled(const DensityField& u, double alpha, double M)
{
    if (!(M > 0.0) || !(M < 1.0)) throw InvalidArgument("rescaled Lyapunov functional needs 0 < M < 1");
    const ReferenceProfile g = profile_rescaled_G(alpha, u.grid);
    RescaledLyapunov out;
    out.H = relative_entropy(u, g);
    const double J = weighted_integral(u, Weight::z());
    const double gap = J - alpha * (1.0 - M);
    out.moment_term = gap * gap / (2.0 * (1.0 - M));
    out.L = out.H + out.moment_term;
    return out;
}

double dissipation_rescaled(const DensityField& u, double trace, double M)
{
    const auto& v = u.values;
    const double dy = u.grid.dz;
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        if (v[i] <= vacuum_threshold || v[i + 1] <= vacuum_threshold) continue;
        const double y = u.grid.face(static_cast<int>(i) + 1);
        const double g = (std::log(v[i + 1]) - std::log(v[i])) / dy + y + trace;
        s += arithmetic_face(v[i], v[i + 1]) * g * g;
    }
    const double J = weighted_integral(u, Weight::z());
    const double dJ = (1.0 - M) * trace - J;
    return s * dy + dJ * dJ / (1.0 - M);
}

double lyapunov_exchange(const DensityField& n, double mu, double M)
{
    if (!(M > 1.0)) throw InvalidArgument("exchange Lyapunov functional needs M > 1");
    if (!(mu > 0.0)) throw InvalidArgument("exchange Lyapunov functional needs mu > 0");
    const double m = n.mass();
    if (!(m > 0.0)) throw InvalidArgument("exchange Lyapunov functional needs positive free mass");
    if (std::abs(m + mu - M) > 1e-6 * M)
        throw InvalidArgument("exchange Lyapunov functional: m + mu != M");
    const double nu = M - 1.0;
    const ReferenceProfile h = profile_exchange(nu, 1.0, n.grid);
    // m H(n | m h) is the relative entropy of n against h scaled to mass m
    std::vector<double> ref(h.values);
    const double scale = m / h.mass();
    for (double& v : ref) v *= scale;
    const double mH = kl_sum(n.values, ref, n.grid.dz);
    return mH + 0.5 * (mu - nu) * (mu - nu) + mu * std::log(mu / nu) + m * std::log(m);
}

ExchangeDissipation dissipation_exchange(const DensityField& n, double trace, double mu, double M)
{
    const double m = n.mass();
    const double nu = M - 1.0;
    const double dz = n.grid.dz;
    const auto& v = n.values;
    ExchangeDissipation d;
    const double drift = trace / m;
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        if (v[i] <= vacuum_threshold || v[i + 1] <= vacuum_threshold) continue;
        const double g = (std::log(v[i + 1]) - std::log(v[i])) / dz + drift;
        s += arithmetic_face(v[i], v[i + 1]) * g * g;
    }
    d.drift_fisher = s * dz;
    d.wall_balance = m * (drift - mu) * (drift - mu);
    if (trace > 0.0 && mu > 0.0)
        d.exchange_log = (trace - mu) * std::log(trace / mu);
    else if (trace != mu)
        d.exchange_log = std::numeric_limits<double>::infinity();
    d.relaxation = mu * (mu - nu) * (mu - nu);
    return d;
}

double boundary_mass_fraction(const DensityField& f)
{
    const int n = f.grid.n_cells;
    const int first = n - std::max(1, n / 10);
    double tail = 0.0;
    for (int i = first; i < n; ++i) tail += f.values[i];
    const double total = sum(f.values);
    return total > 0.0 ? tail / total : 0.0;
}

} // namespace polarsim
