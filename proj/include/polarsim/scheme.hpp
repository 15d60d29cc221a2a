#pragma once

#include <span>

namespace polarsim {

/// Bernoulli function x / (e^x - 1), with B(0) = 1.
double bernoulli(double x);

/// Exponentially fitted (Scharfetter-Gummel) approximation of the face flux
/// d/dz n + a n between two neighbouring cells of spacing h. Exact for the
/// profile n ~ exp(-a z); reduces to the upwind value a * right as a*h grows.
inline double fitted_flux(double left, double right, double a, double h)
{
    const double x = a * h;
    return (bernoulli(-x) * right - bernoulli(x) * left) / h;
}

/// Explicit conservative update of  d_t n = d_z (d_z n + a(z) n)  on one line
/// of cells. `face_speed[i]` is the drift a at the face between cells i and
/// i+1; the two outer faces carry the given fluxes (zero for no-flux walls).
/// Nonnegativity is preserved when dt <= h^2 / (2 + max|a| h).
void advance_conservative(std::span<double> n, std::span<const double> face_speed, double h,
                          double dt, double left_flux = 0.0, double right_flux = 0.0);

/// cfl * h^2 / (2 + speed * h).
double stable_dt(double h, double speed, double cfl);

/// Wall value of the exponential profile with decay rate `drift` whose mean
/// over the first cell (width h) is n0: n0 * B(-drift h).
inline double fitted_wall_value(double n0, double drift, double h)
{
    return n0 * bernoulli(-drift * h);
}

/// Wall value a of the profile a exp(-a z) whose first-cell mean is n0, i.e.
/// the fixed point a = n0 B(-a h): a = -log(1 - n0 h) / h. Infinite once the
/// first cell alone holds unit mass.
double self_consistent_wall_value(double n0, double h);

/// One-sided second order extrapolation (3 n0 - n1) / 2 of a wall value, clipped at 0.
inline double extrapolate_wall(double n0, double n1)
{
    const double v = 0.5 * (3.0 * n0 - n1);
    return v > 0.0 ? v : 0.0;
}

} // namespace polarsim
