#include "polarsim/runner.hpp"

#include "polarsim/errors.hpp"
#include "polarsim/exchange1d.hpp"
#include "polarsim/rescaled1d.hpp"
#include "polarsim/solver1d.hpp"
#include "polarsim/variants1d.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

namespace polarsim {

namespace {

InitialCondition stretched_initial(const RunConfig& c)
{
    InitialCondition ic = c.initial;
    ic.target_mass = c.mass;
    const double s = c.j0_scale;
    if (s == 1.0) return ic;
    switch (ic.kind) {
    case InitialKind::exponential: ic.alpha /= s; break;
    case InitialKind::half_gaussian:
        ic.sigma *= s;
        ic.shift *= s;
        break;
    case InitialKind::step: ic.width *= s; break;
    case InitialKind::table: throw ConfigError("j0_scale", "cannot stretch tabulated initial data");
    }
    return ic;
}

void take_1d(RunResult& r, Trajectory1D&& t)
{
    r.records = std::move(t.records);
    r.blowup = t.blowup;
    r.monitors = t.monitors;
    r.steps = t.steps;
    r.terminal_1d = std::move(t.terminal);
    r.terminal_mu = t.terminal_mu;
}

bool exp_weighted_non_increasing(const DensityField& f, double alpha)
{
    std::vector<double> u(f.values);
    for (int i = 0; i < f.grid.n_cells; ++i) u[i] *= std::exp(-alpha * f.grid.center(i));
    return is_non_increasing(u);
}

std::string fmt(double x)
{
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
}

RunResult run_unchecked(const RunConfig& c, const InitialCondition& ic)
{
    RunResult r;
    r.config = c;
    const RunControls rc = c.controls();
    const double z_max = c.effective_z_max();

    switch (c.model) {
    case ModelKind::bks1d: {
        const DensityField f0 = project_initial(ic, make_grid_1d(z_max, c.n_cells));
        const bool monotone = is_non_increasing(f0.values);
        r.criterion = c.mass > 1.0 && monotone;
        if (c.mass > 1.0 && !monotone) r.notes.push_back("initial data not non-increasing: no blow-up bound");
        take_1d(r, run_bks({ic, z_max, c.n_cells, rc}));
        break;
    }
    case ModelKind::rescaled1d: {
        r.notes.push_back("alpha=" + fmt(solve_alpha(c.mass)));
        take_1d(r, run_rescaled({ic, z_max, c.n_cells, rc}));
        break;
    }
    case ModelKind::exchange1d: {
        if (!(c.mass > c.gamma)) r.notes.push_back("mass <= gamma: no polarised equilibrium");
        ExchangeRunConfig ec;
        ec.initial = ic;
        ec.mu0 = c.mu0;
        ec.gamma = c.gamma;
        ec.z_max = z_max;
        ec.n_cells = c.n_cells;
        ec.controls = rc;
        take_1d(r, run_exchange(ec));
        break;
    }
    case ModelKind::interval1d: {
        const DensityField f0 = project_initial(ic, make_grid_1d(c.L, c.n_cells));
        r.criterion = blowup_criterion_interval(c.mass, weighted_integral(f0, Weight::z()), c.L);
        if (!is_non_increasing(f0.values))
            r.notes.push_back("initial data not non-increasing: criterion not established");
        take_1d(r, run_interval({ic, c.L, c.n_cells, rc}));
        break;
    }
    case ModelKind::range1d: {
        const DensityField f0 = project_initial(ic, make_grid_1d(z_max, c.n_cells));
        r.criterion =
            blowup_criterion_range(c.mass, weighted_integral(f0, Weight::exp_alpha(c.alpha)), c.alpha);
        if (!exp_weighted_non_increasing(f0, c.alpha))
            r.notes.push_back("exp(-alpha z) n(0) not non-increasing: criterion not established");
        take_1d(r, run_finite_range({ic, c.alpha, z_max, c.n_cells, rc}));
        break;
    }
    case ModelKind::transversal2d:
    case ModelKind::potential2d: {
        Run2DConfig rc2;
        rc2.kind = c.model == ModelKind::transversal2d ? VelocityKind::transversal : VelocityKind::potential;
        rc2.initial.z_profile = ic;
        rc2.initial.y_center = c.y_center;
        rc2.initial.y_sigma = c.y_sigma;
        rc2.initial.target_mass = c.mass;
        rc2.y_min = c.y_min;
        rc2.y_max = c.y_max;
        rc2.z_max = z_max;
        rc2.ny = c.ny;
        rc2.nz = c.nz;
        rc2.C_2d = c.C_2d;
        rc2.controls = rc;
        Trajectory2D t = run_2d(rc2);
        r.records = std::move(t.records);
        r.blowup = t.blowup;
        r.steps = t.steps;
        r.criterion = t.criterion;
        r.terminal_2d = std::move(t.terminal);
        r.l2_norms = std::move(t.l2_norms);
        r.marginals = std::move(t.marginals);
        break;
    }
    }
    return r;
}

// Runs task(k) for k in [0, count) on up to max_threads workers; the first
// failure in index order is rethrown after all workers finish.
template <class Task>
void run_indexed(std::size_t count, unsigned max_threads, Task task)
{
    if (count == 0) return;
    unsigned workers = max_threads ? max_threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto loop = [&] {
        for (std::size_t k = next++; k < count; k = next++) {
            try {
                task(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(loop);
        loop();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

MassProbe probe(const RunConfig& base, double mass)
{
    const RunResult r = run(with_param(base, SweepParam::mass, mass));
    return {mass, r.blowup.detected, r.blowup.t_detect};
}

std::vector<MassProbe> probe_batch(const RunConfig& base, const std::vector<double>& masses, unsigned max_threads)
{
    std::vector<MassProbe> out(masses.size());
    run_indexed(masses.size(), max_threads, [&](std::size_t k) { out[k] = probe(base, masses[k]); });
    return out;
}

} // namespace

RunResult run(const RunConfig& config)
{
    validate(config);
    const InitialCondition ic = stretched_initial(config);
    try {
        return run_unchecked(config, ic);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw Error(to_string(config.model) + " run at mass " + fmt(config.mass) + ": " + e.what());
    }
}

SweepParam parse_sweep_param(const std::string& name)
{
    if (name == "mass") return SweepParam::mass;
    if (name == "alpha") return SweepParam::alpha;
    if (name == "L") return SweepParam::L;
    if (name == "gamma") return SweepParam::gamma;
    if (name == "C_2d") return SweepParam::C_2d;
    if (name == "J0-scale" || name == "j0_scale") return SweepParam::j0_scale;
    throw ConfigError("param", "unknown sweep parameter '" + name + "'");
}

std::string to_string(SweepParam p)
{
    switch (p) {
    case SweepParam::mass: return "mass";
    case SweepParam::alpha: return "alpha";
    case SweepParam::L: return "L";
    case SweepParam::gamma: return "gamma";
    case SweepParam::C_2d: return "C_2d";
    case SweepParam::j0_scale: return "J0-scale";
    }
    return "?";
}

RunConfig with_param(const RunConfig& base, SweepParam p, double value)
{
    if (!std::isfinite(value)) throw ConfigError("values", "sweep values must be finite");
    RunConfig c = base;
    auto need = [&](bool ok, const char* what) {
        if (!ok) throw ConfigError("param", std::string(what) + " is not a parameter of " + to_string(c.model));
    };
    switch (p) {
    case SweepParam::mass: c.mass = value; break;
    case SweepParam::alpha:
        need(c.model == ModelKind::range1d, "alpha");
        c.alpha = value;
        break;
    case SweepParam::L:
        need(c.model == ModelKind::interval1d, "L");
        c.L = value;
        break;
    case SweepParam::gamma:
        need(c.model == ModelKind::exchange1d, "gamma");
        c.gamma = value;
        break;
    case SweepParam::C_2d:
        need(is_2d(c.model), "C_2d");
        c.C_2d = value;
        break;
    case SweepParam::j0_scale: c.j0_scale = value; break;
    }
    if (!(value > 0.0)) throw ConfigError(to_string(p), "must be positive");
    validate(c);
    return c;
}

std::vector<SweepRow> sweep(const RunConfig& base, SweepParam p, const std::vector<double>& values,
                            unsigned max_threads)
{
    std::vector<RunConfig> configs;
    configs.reserve(values.size());
    for (double v : values) configs.push_back(with_param(base, p, v));

    std::vector<SweepRow> rows(values.size());
    run_indexed(values.size(), max_threads, [&](std::size_t k) {
        const RunResult r = run(configs[k]);
        rows[k] = {values[k], r.blowup.detected, r.blowup.t_detect, r.criterion, r.records.back()};
    });
    return rows;
}

BisectionResult bisect_critical_mass(const RunConfig& base, double m_lo, double m_hi, double tol,
                                     unsigned max_threads)
{
    if (!(tol > 0.0)) throw ConfigError("tol", "must be positive");
    if (!(m_lo > 0.0) || !(m_hi > m_lo)) throw ConfigError("m_lo", "need 0 < m_lo < m_hi");

    BisectionResult out;
    const auto ends = probe_batch(base, {m_lo, m_hi}, max_threads);
    out.batches = 1;
    out.probes = ends;
    if (ends[0].detected || !ends[1].detected) {
        std::ostringstream msg;
        msg << "mass bracket [" << m_lo << ", " << m_hi << "] does not straddle the transition: "
            << "m_lo " << (ends[0].detected ? "blows up" : "stays global") << ", m_hi "
            << (ends[1].detected ? "blows up" : "stays global");
        throw BracketError(ends[0].detected, ends[1].detected, msg.str());
    }

    double lo = m_lo;
    double hi = m_hi;
    while (hi - lo > tol) {
        const double q = 0.25 * (hi - lo);
        const auto batch = probe_batch(base, {lo + q, lo + 2 * q, lo + 3 * q}, max_threads);
        ++out.batches;
        out.probes.insert(out.probes.end(), batch.begin(), batch.end());
        double new_hi = hi;
        for (const auto& pr : batch)
            if (pr.detected) {
                new_hi = pr.mass;
                break;
            }
        double new_lo = lo;
        for (const auto& pr : batch)
            if (!pr.detected && pr.mass < new_hi) new_lo = pr.mass;
        lo = new_lo;
        hi = new_hi;
    }
    out.lo = lo;
    out.hi = hi;
    out.estimate = 0.5 * (lo + hi);
    return out;
}

} // namespace polarsim
