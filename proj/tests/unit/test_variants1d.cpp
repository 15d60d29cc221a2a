#include "oracle.hpp"

#include "polarsim/errors.hpp"
#include "polarsim/variants1d.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace polarsim;

namespace {

std::vector<double> interval_means(double alpha, double beta, const Grid1D& g)
{
    const double c = alpha - beta;
    std::vector<double> v(g.n_cells);
    for (int i = 0; i < g.n_cells; ++i) {
        const double a = i * g.dz;
        const double b = (i + 1) * g.dz;
        v[i] = c == 0.0 ? alpha : alpha * (std::exp(-c * a) - std::exp(-c * b)) / (c * g.dz);
    }
    return v;
}

IntervalState step_interval_auto(const IntervalState& s, double cfl = 0.45)
{
    const double a = std::abs(left_trace_interval(s.field) - right_trace_value(s.field));
    return step_interval(s, stable_dt(s.field, a, cfl));
}

} // namespace

TEST_CASE("solve_interval_equilibrium")
{
    struct Case {
        double alpha, L;
    };
    for (const Case c : {Case{1.0, 5.0}, Case{2.0, 3.0}, Case{0.5, 1.0}, Case{0.1, 2.0}, Case{0.3, 3.0}}) {
        const auto eq = solve_interval_equilibrium(c.alpha, c.L);
        const bool long_interval = c.alpha * c.L > 1.0;
        const double expected = oracle::interval_beta(c.alpha, c.L, long_interval ? 0.0 : 10.0 * c.alpha + 10.0 / c.L);
        CHECK(eq.beta == doctest::Approx(expected).epsilon(1e-10));
        CHECK(eq.beta - c.alpha * std::exp(-(c.alpha - eq.beta) * c.L) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK((long_interval ? eq.beta < c.alpha : eq.beta > c.alpha));
        CHECK_FALSE(eq.constant());
        // every non-constant equilibrium carries unit mass: alpha (1 - e^{-cL}) / c = (alpha - beta) / c
        const double c_rate = c.alpha - eq.beta;
        CHECK(c.alpha * (1.0 - std::exp(-c_rate * c.L)) / c_rate == doctest::Approx(1.0).epsilon(1e-10));
    }
    const auto flat = solve_interval_equilibrium(0.5, 2.0);
    CHECK(flat.constant());
    CHECK_THROWS_AS(solve_interval_equilibrium(0.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(solve_interval_equilibrium(1.0, -1.0), InvalidArgument);
}

TEST_CASE("interval wall values")
{
    const Grid1D g = make_grid_1d(5.0, 100);
    SUBCASE("exact on equilibrium cell means")
    {
        const auto eq = solve_interval_equilibrium(1.0, 5.0);
        const auto f = make_density_field(g, interval_means(eq.alpha, eq.beta, g));
        CHECK(left_trace_interval(f) == doctest::Approx(eq.alpha).epsilon(1e-10));
        CHECK(right_trace_value(f) == doctest::Approx(eq.beta).epsilon(1e-10));
    }
    SUBCASE("mirror symmetry")
    {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 20; ++trial) {
            auto v = oracle::random_field(rng, 100, 0.0, 1.5);
            const auto f = make_density_field(g, v);
            std::reverse(v.begin(), v.end());
            const auto m = make_density_field(g, v);
            CHECK(left_trace_interval(f) == doctest::Approx(right_trace_value(m)).epsilon(1e-12));
            CHECK(right_trace_value(f) == doctest::Approx(left_trace_interval(m)).epsilon(1e-12));
        }
    }
    SUBCASE("constant field and collapsed wall cell")
    {
        const auto c = make_density_field(g, std::vector<double>(100, 0.7));
        CHECK(left_trace_interval(c) == doctest::Approx(0.7));
        CHECK(right_trace_value(c) == doctest::Approx(0.7));
        std::vector<double> v(100, 0.0);
        v[0] = 1.0 / g.dz;
        CHECK(std::isinf(left_trace_interval(make_density_field(g, v))));
    }
}

TEST_CASE("step_interval")
{
    SUBCASE("equilibria are fixed points")
    {
        for (const auto& [alpha, L] : {std::pair{1.0, 5.0}, std::pair{0.5, 1.0}}) {
            const auto eq = solve_interval_equilibrium(alpha, L);
            const Grid1D g = make_grid_1d(L, 100);
            IntervalState s{make_density_field(g, interval_means(eq.alpha, eq.beta, g)), 0};
            const auto start = s.field.values;
            for (int k = 0; k < 500; ++k) s = step_interval_auto(s);
            CHECK(oracle::l1(s.field.values, start, g.dz) < 1e-11);
        }
    }
    SUBCASE("constant field is invariant")
    {
        const Grid1D g = make_grid_1d(3.0, 60);
        IntervalState s{make_density_field(g, std::vector<double>(60, 0.4)), 0};
        for (int k = 0; k < 100; ++k) s = step_interval_auto(s);
        for (double v : s.field.values) CHECK(v == doctest::Approx(0.4).epsilon(1e-14));
    }
    SUBCASE("mass and positivity on random data")
    {
        std::mt19937_64 rng(13);
        for (int trial = 0; trial < 50; ++trial) {
            const Grid1D g = make_grid_1d(4.0, 40);
            IntervalState s{make_density_field(g, oracle::random_field(rng, 40, 0.0, 2.0)), 0};
            const double m0 = s.field.mass();
            for (int k = 0; k < 20; ++k) s = step_interval_auto(s, 0.9);
            CHECK(s.field.mass() == doctest::Approx(m0).epsilon(1e-13));
            for (double v : s.field.values) CHECK(v >= 0.0);
        }
    }
    SUBCASE("step limit")
    {
        std::mt19937_64 rng(1);
        const Grid1D g = make_grid_1d(4.0, 40);
        IntervalState s{make_density_field(g, oracle::random_field(rng, 40)), 0};
        const double a = std::abs(left_trace_interval(s.field) - right_trace_value(s.field));
        CHECK_THROWS_AS(step_interval(s, 2.0 * stable_dt(s.field, a, 1.0)), InvalidArgument);
        CHECK_THROWS_AS(step_interval(s, 0.0), InvalidArgument);
    }
}

TEST_CASE("blowup_criterion_interval")
{
    CHECK(blowup_criterion_interval(1.5, 0.5, 10.0));
    CHECK_FALSE(blowup_criterion_interval(0.9, 0.1, 10.0));
    CHECK_FALSE(blowup_criterion_interval(2.0, 6.0, 10.0));
    CHECK_FALSE(blowup_criterion_interval(2.0, 5.0, 10.0));
    CHECK(blowup_criterion_interval(2.0, 4.999, 10.0));
}

TEST_CASE("step_finite_range")
{
    SUBCASE("short range limit reduces to the wall-driven model")
    {
        const Grid1D g = make_grid_1d(10.0, 100);
        InitialCondition ic;
        ic.kind = InitialKind::half_gaussian;
        ic.target_mass = 1.2;
        Bks1dState a{project_initial(ic, g), 0};
        Bks1dState b = a;
        for (int k = 0; k < 50; ++k) {
            const double dt = stable_dt(a.field, trace_value(a.field), 0.45);
            a = step_finite_range(a, dt, 1e-10);
            b = step_bks(b, dt);
        }
        CHECK(oracle::l1(a.field.values, b.field.values, g.dz) < 1e-8);
    }
    SUBCASE("long-range decay leaves plain heat flow")
    {
        // drift exp(-alpha z) * trace is negligible beyond the first face
        auto heat_gap = [](double alpha) {
            const Grid1D g = make_grid_1d(10.0, 100);
            InitialCondition ic;
            ic.kind = InitialKind::step;
            ic.width = 2.0;
            ic.target_mass = 0.8;
            Bks1dState s{project_initial(ic, g), 0};
            const auto v0 = s.field.values;
            while (s.t() < 1.0)
                s = step_finite_range(s, std::min(stable_dt(s.field, trace_value(s.field), 0.45), 1.0 - s.t()), alpha);
            return oracle::l1(s.field.values, oracle::heat_cells(v0, 0.0, 10.0, 1.0), g.dz);
        };
        const double g50 = heat_gap(50.0);
        const double g200 = heat_gap(200.0);
        CHECK(g50 < 1e-3);
        CHECK(g200 <= g50);
        CHECK(heat_gap(0.5) > 10.0 * g50);
    }
    SUBCASE("mass, positivity and step limit")
    {
        std::mt19937_64 rng(17);
        const Grid1D g = make_grid_1d(4.0, 40);
        Bks1dState s{make_density_field(g, oracle::random_field(rng, 40, 0.0, 2.0)), 0};
        const double m0 = s.field.mass();
        for (int k = 0; k < 20; ++k) s = step_finite_range(s, stable_dt(s.field, trace_value(s.field), 0.9), 2.0);
        CHECK(s.field.mass() == doctest::Approx(m0).epsilon(1e-13));
        for (double v : s.field.values) CHECK(v >= 0.0);
        CHECK_THROWS_AS(step_finite_range(s, 2.0 * stable_dt(s.field, trace_value(s.field), 1.0), 2.0),
                        InvalidArgument);
        CHECK_THROWS_AS(step_finite_range(s, 1e-6, 0.0), InvalidArgument);
    }
}

TEST_CASE("blowup_criterion_range")
{
    auto lhs = [](double M, double Ja) {
        const double q = Ja * Ja / (M * M);
        return q * q * (1.0 - M * M / (Ja * Ja));
    };
    for (const auto& [M, Ja] : {std::pair{1.5, 1.6}, std::pair{1.5, 3.0}, std::pair{3.0, 3.5}, std::pair{1.1, 1.2}})
        CHECK(blowup_criterion_range(M, Ja, 1.0) == (lhs(M, Ja) < M - 1.0));
    CHECK(blowup_criterion_range(2.0, 2.0, 1.0));
    CHECK_FALSE(blowup_criterion_range(0.9, 1.0, 1.0));
    CHECK_THROWS_AS(blowup_criterion_range(2.0, 1.5, 1.0), InvalidArgument);
    CHECK_THROWS_AS(blowup_criterion_range(2.0, 3.0, 0.0), InvalidArgument);
}

TEST_CASE("run_interval")
{
    auto config = [](double M, double width, double L, double t_end) {
        IntervalRunConfig c;
        c.initial.kind = InitialKind::step;
        c.initial.width = width;
        c.initial.target_mass = M;
        c.L = L;
        c.n_cells = 200;
        c.controls.t_end = t_end;
        return c;
    };
    SUBCASE("subcritical mass flattens")
    {
        const auto t = run_interval(config(0.5, 1.0, 4.0, 20.0));
        CHECK_FALSE(t.blowup.detected);
        CHECK(*t.records.back().rel_entropy < 1e-6);
        CHECK(t.records.back().mass == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("concentrated supercritical mass collapses")
    {
        REQUIRE(blowup_criterion_interval(2.0, 1.0, 10.0));
        const auto t = run_interval(config(2.0, 1.0, 10.0, 5.0));
        CHECK(t.blowup.detected);
    }
}

TEST_CASE("run_finite_range")
{
    RangeRunConfig c;
    c.initial.kind = InitialKind::exponential;
    c.initial.alpha = 1.0;
    c.initial.target_mass = 0.8;
    c.alpha = 0.5;
    c.z_max = 20.0;
    c.n_cells = 200;
    c.controls.t_end = 2.0;
    const auto t = run_finite_range(c);
    CHECK_FALSE(t.blowup.detected);
    for (const auto& r : t.records) {
        REQUIRE(r.J_alpha.has_value());
        CHECK(*r.J_alpha >= r.mass);
    }
    c.alpha = 0.0;
    CHECK_THROWS_AS(run_finite_range(c), InvalidArgument);
}
