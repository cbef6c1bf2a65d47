#include "denseries/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace denseries {

ClrFunction clr_unchecked(GridFunction fn); // density.cpp

GriddedDensity perturb(const GriddedDensity& f, const GriddedDensity& g) {
    require_same_grid(f.grid(), g.grid());
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        v[i] = f[i] * g[i];
    return GriddedDensity::from_values(f.grid(), std::move(v));
}

GriddedDensity power(double r, const GriddedDensity& f) {
    if (!std::isfinite(r))
        throw NumericError("domain error: non-finite power");
    std::vector<double> logs(f.size());
    double lmax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.size(); ++i) {
        logs[i] = r * std::log(f[i]);
        lmax = std::max(lmax, logs[i]);
    }
    for (std::size_t i = 0; i < f.size(); ++i)
        logs[i] = std::exp(logs[i] - lmax);
    return GriddedDensity::from_values(f.grid(), std::move(logs));
}

GriddedDensity perturb_sub(const GriddedDensity& f, const GriddedDensity& g) {
    return perturb(f, power(-1.0, g));
}

ClrFunction clr(const GriddedDensity& f) {
    const Grid& grid = f.grid();
    std::vector<double> logs(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        logs[i] = std::log(f[i]);
    const double mean = trapezoid_integral(grid, logs) / grid.length();
    for (double& v : logs)
        v -= mean;
    return clr_unchecked(GridFunction(grid, std::move(logs)));
}

GriddedDensity clr_inv(const ClrFunction& g) {
    const double gmax = *std::max_element(g.values().begin(), g.values().end());
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        v[i] = std::exp(g[i] - gmax);
    return GriddedDensity::from_values(g.grid(), std::move(v));
}

double bayes_inner(const GriddedDensity& f, const GriddedDensity& g) {
    require_same_grid(f.grid(), g.grid());
    const ClrFunction cf = clr(f);
    const ClrFunction cg = clr(g);
    std::vector<double> prod(cf.size());
    for (std::size_t i = 0; i < cf.size(); ++i)
        prod[i] = cf[i] * cg[i];
    return trapezoid_integral(f.grid(), prod);
}

double l2_norm(const ClrFunction& g) {
    std::vector<double> sq(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        sq[i] = g[i] * g[i];
    return std::sqrt(trapezoid_integral(g.grid(), sq));
}

double bayes_norm(const GriddedDensity& f) {
    return l2_norm(clr(f));
}

double bayes_dist(const GriddedDensity& f, const GriddedDensity& g) {
    require_same_grid(f.grid(), g.grid());
    const ClrFunction cf = clr(f);
    const ClrFunction cg = clr(g);
    std::vector<double> sq(cf.size());
    for (std::size_t i = 0; i < cf.size(); ++i) {
        const double d = cf[i] - cg[i];
        sq[i] = d * d;
    }
    return std::sqrt(trapezoid_integral(f.grid(), sq));
}

} // namespace denseries
