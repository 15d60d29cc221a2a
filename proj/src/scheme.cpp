#include "polarsim/scheme.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace polarsim {

double bernoulli(double x)
{
    if (std::abs(x) < 1e-8) return 1.0 - 0.5 * x;
    return x / std::expm1(x);
}

double self_consistent_wall_value(double n0, double h)
{
    const double x = n0 * h;
    if (x >= 1.0) return std::numeric_limits<double>::infinity();
    return x > 0.0 ? -std::log1p(-x) / h : 0.0;
}

void advance_conservative(std::span<double> n, std::span<const double> face_speed, double h,
                          double dt, double left_flux, double right_flux)
{
    const std::size_t cells = n.size();
    std::vector<double> flux(cells + 1);
    flux[0] = left_flux;
    flux[cells] = right_flux;
    for (std::size_t i = 0; i + 1 < cells; ++i)
        flux[i + 1] = fitted_flux(n[i], n[i + 1], face_speed[i], h);

    const double ratio = dt / h;
    for (std::size_t i = 0; i < cells; ++i) {
        const double v = n[i] + ratio * (flux[i + 1] - flux[i]);
        // round-off can leave -1e-300 in vacuum cells
        n[i] = v > 0.0 ? v : 0.0;
    }
}

double stable_dt(double h, double speed, double cfl)
{
    return cfl * h * h / (2.0 + std::abs(speed) * h);
}

} // namespace polarsim
