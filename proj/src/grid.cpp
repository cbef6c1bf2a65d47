#include "denseries/grid.hpp"

#include <cmath>
#include <string>

namespace denseries {

Grid::Grid(double a, double b, std::size_t n_points) : a_(a), b_(b), n_(n_points) {
    if (!(a < b))
        throw ConfigError("invalid bounds: require a < b, got a=" + std::to_string(a) +
                          " b=" + std::to_string(b));
    if (n_points < 3)
        throw ConfigError("too few points: require n_points >= 3, got " +
                          std::to_string(n_points));
    if (!std::isfinite(a) || !std::isfinite(b))
        throw ConfigError("invalid bounds: endpoints must be finite");
    spacing_ = (b - a) / static_cast<double>(n_points - 1);
}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw NumericError("grid mismatch: " + std::to_string(values_.size()) +
                           " values on a " + std::to_string(grid_.size()) + "-point grid");
    for (double v : values_)
        if (!std::isfinite(v))
            throw NumericError("non-finite value in grid function");
}

void require_same_grid(const Grid& f, const Grid& g) {
    if (f != g)
        throw NumericError("grid mismatch between operands");
}

double trapezoid_integral(const Grid& grid, const std::vector<double>& values) {
    const std::size_t n = grid.size();
    double inner = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i)
        inner += values[i];
    return (inner + 0.5 * (values.front() + values.back())) * grid.spacing();
}

double trapezoid_integral(const GridFunction& f) {
    return trapezoid_integral(f.grid(), f.values());
}

namespace {

template <typename Op>
GridFunction zip(const GridFunction& f, const GridFunction& g, Op op) {
    require_same_grid(f.grid(), g.grid());
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        out[i] = op(f[i], g[i]);
    return GridFunction(f.grid(), std::move(out));
}

template <typename Op>
GridFunction map(const GridFunction& f, Op op) {
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        out[i] = op(f[i]);
    return GridFunction(f.grid(), std::move(out));
}

} // namespace

GridFunction add(const GridFunction& f, const GridFunction& g) {
    return zip(f, g, [](double x, double y) { return x + y; });
}

GridFunction sub(const GridFunction& f, const GridFunction& g) {
    return zip(f, g, [](double x, double y) { return x - y; });
}

GridFunction mul(const GridFunction& f, const GridFunction& g) {
    return zip(f, g, [](double x, double y) { return x * y; });
}

GridFunction div(const GridFunction& f, const GridFunction& g) {
    for (double v : g.values())
        if (v == 0.0)
            throw NumericError("domain error: division by zero grid value");
    return zip(f, g, [](double x, double y) { return x / y; });
}

GridFunction scale(double r, const GridFunction& f) {
    if (!std::isfinite(r))
        throw NumericError("domain error: non-finite scale factor");
    return map(f, [r](double x) { return r * x; });
}

GridFunction ln(const GridFunction& f) {
    for (double v : f.values())
        if (v <= 0.0)
            throw NumericError("domain error: ln of non-positive grid value");
    return map(f, [](double x) { return std::log(x); });
}

GridFunction exp(const GridFunction& f) {
    return map(f, [](double x) { return std::exp(x); });
}

} // namespace denseries
