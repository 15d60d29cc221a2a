#pragma once

// Reference computations that share no code with the library.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000)
{
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int k = 1; k < n; ++k) s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Mean of f over each of n equal cells of (a, b), by Simpson per cell.
inline std::vector<double> cell_means(const std::function<double(double)>& f, double a, double b, int n,
                                      int panels = 8)
{
    std::vector<double> v(n);
    const double h = (b - a) / n;
    for (int i = 0; i < n; ++i) v[i] = simpson(f, a + i * h, a + (i + 1) * h, panels) / h;
    return v;
}

// Decay rate a > 0 of a exp(-a z) whose mean over (0, h) is n0, by bisection on
// (1 - exp(-a h)) / h = n0. Requires 0 < n0 h < 1.
inline double exponential_rate_from_first_cell(double n0, double h)
{
    double lo = 0.0;
    double hi = 1.0;
    while ((1.0 - std::exp(-hi * h)) / h < n0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        ((1.0 - std::exp(-mid * h)) / h < n0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// int_0^inf exp(-y - y^2 / (2 a^2)) dy = a sqrt(pi/2) exp(a^2/2) erfc(a/sqrt 2).
inline double mass_of_G(double a)
{
    return a * std::sqrt(std::numbers::pi / 2.0) * std::exp(0.5 * a * a) * std::erfc(a / std::numbers::sqrt2);
}

/// Non-constant right trace of the interval profile by fixed-point iteration.
/// For L beta < 1 iterate beta <- alpha exp(-(alpha - beta) L); otherwise
/// iterate the inverse map beta <- alpha + log(beta / alpha) / L.
inline double interval_beta(double alpha, double L, double start)
{
    double b = start;
    const bool forward = alpha * L > 1.0;
    for (int k = 0; k < 100000; ++k) {
        const double next = forward ? alpha * std::exp(-(alpha - b) * L) : alpha + std::log(b / alpha) / L;
        if (std::abs(next - b) < 1e-15 * std::max(1.0, b)) return next;
        b = next;
    }
    return b;
}

/// Neumann heat flow on (a, b) by cosine series: cell means at time t of the
/// solution starting from piecewise-constant cell data v0.
inline std::vector<double> heat_cells(const std::vector<double>& v0, double a, double b, double t, int modes = 0)
{
    const int n = static_cast<int>(v0.size());
    const double len = b - a;
    const double h = len / n;
    if (modes == 0) modes = 8 * n;
    // c_k = (2/len) int v0 cos(k pi x / len), exact for piecewise constants
    std::vector<double> out(n, 0.0);
    double c0 = 0.0;
    for (double v : v0) c0 += v * h;
    for (double& o : out) o = c0 / len;
    for (int k = 1; k <= modes; ++k) {
        const double w = k * std::numbers::pi / len;
        const double decay = std::exp(-w * w * t);
        if (decay < 1e-18) break;
        double ck = 0.0;
        for (int i = 0; i < n; ++i) ck += v0[i] * (std::sin(w * (i + 1) * h) - std::sin(w * i * h)) / w;
        ck *= 2.0 / len * decay;
        for (int i = 0; i < n; ++i) out[i] += ck * (std::sin(w * (i + 1) * h) - std::sin(w * i * h)) / (w * h);
    }
    return out;
}

inline double l1(const std::vector<double>& f, const std::vector<double>& g, double h)
{
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += std::abs(f[i] - g[i]);
    return s * h;
}

inline double sum(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

/// Positive random cell values with a fixed seed.
inline std::vector<double> random_field(std::mt19937_64& rng, int n, double lo = 0.0, double hi = 1.0)
{
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

} // namespace oracle
