#include "denseries/density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace denseries {

GriddedDensity GriddedDensity::from_values(const Grid& grid, std::vector<double> values) {
    if (values.size() != grid.size())
        throw NumericError("grid mismatch: value count does not match grid");
    double vmax = 0.0;
    for (double v : values) {
        if (!std::isfinite(v))
            throw NumericError("non-finite value in density");
        vmax = std::max(vmax, v);
    }
    if (vmax <= 0.0)
        throw NumericError("density has no positive mass");
    const double floor = kDensityFloorRel * vmax;
    for (double& v : values)
        v = std::max(v, floor);
    const double mass = trapezoid_integral(grid, values);
    for (double& v : values)
        v /= mass;
    return GriddedDensity(GridFunction(grid, std::move(values)));
}

GriddedDensity GriddedDensity::from_function(GridFunction fn) {
    return from_values(fn.grid(), fn.values());
}

GriddedDensity GriddedDensity::uniform(const Grid& grid) {
    return from_values(grid, std::vector<double>(grid.size(), 1.0));
}

void GriddedDensity::validate() const {
    double vmax = 0.0;
    for (double v : fn_.values())
        vmax = std::max(vmax, v);
    if (vmax <= 0.0)
        throw NumericError("density invariant violated: no positive mass");
    const double floor = kDensityFloorRel * vmax;
    for (double v : fn_.values())
        if (v < floor * (1.0 - 1e-12))
            throw NumericError("density invariant violated: value below positivity floor");
    const double mass = integral();
    if (std::abs(mass - 1.0) > kIntegralTol)
        throw NumericError("density invariant violated: integral " + std::to_string(mass));
}

ClrFunction ClrFunction::from_function(GridFunction fn) {
    const double integral = trapezoid_integral(fn);
    if (std::abs(integral) > kIntegralTol)
        throw NumericError("clr invariant violated: integral " + std::to_string(integral));
    return ClrFunction(std::move(fn));
}

// Internal fast path for constructions that are zero-integral by design.
ClrFunction clr_unchecked(GridFunction fn) {
    return ClrFunction(std::move(fn));
}

DensitySeries::DensitySeries(std::vector<GriddedDensity> densities,
                             std::vector<std::string> labels)
    : densities_(std::move(densities)), labels_(std::move(labels)) {
    if (densities_.empty())
        throw NumericError("density series must not be empty");
    for (const auto& d : densities_)
        require_same_grid(densities_.front().grid(), d.grid());
    if (!labels_.empty() && labels_.size() != densities_.size())
        throw NumericError("label count does not match series length");
}

void DensitySeries::append(GriddedDensity d, std::string label) {
    if (!densities_.empty())
        require_same_grid(densities_.front().grid(), d.grid());
    if (!labels_.empty() || (densities_.empty() && !label.empty())) {
        if (labels_.size() != densities_.size())
            throw NumericError("cannot mix labeled and unlabeled series entries");
        labels_.push_back(std::move(label));
    }
    densities_.push_back(std::move(d));
}

const Grid& DensitySeries::grid() const {
    if (densities_.empty())
        throw NumericError("empty density series has no grid");
    return densities_.front().grid();
}

DensitySeries DensitySeries::prefix(std::size_t n) const {
    if (n == 0 || n > densities_.size())
        throw NumericError("prefix length out of range");
    std::vector<GriddedDensity> d(densities_.begin(), densities_.begin() + n);
    std::vector<std::string> l;
    if (!labels_.empty())
        l.assign(labels_.begin(), labels_.begin() + n);
    return DensitySeries(std::move(d), std::move(l));
}

} // namespace denseries
