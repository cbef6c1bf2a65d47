#pragma once

#include <string>
#include <vector>

#include "denseries/grid.hpp"

namespace denseries {

//! Relative positivity floor for densities: values are clipped at
//! kDensityFloorRel * max(values) before renormalization, keeping the log
//! finite everywhere without visibly moving mass.
inline constexpr double kDensityFloorRel = 1e-10;

//! Tolerance on the unit-integral invariant of GriddedDensity and on the
//! zero-integral invariant of ClrFunction.
inline constexpr double kIntegralTol = 1e-8;

//! A strictly positive probability density sampled on a uniform grid,
//! integrating to 1 under the trapezoid rule. Immutable after construction.
class GriddedDensity {
public:
    //! Clips values at the relative floor, renormalizes mass to 1.
    //! Throws NumericError if values are non-finite or the maximum is <= 0.
    static GriddedDensity from_values(const Grid& grid, std::vector<double> values);
    static GriddedDensity from_function(GridFunction fn);

    //! The neutral element of the Bayes space: the uniform density on the grid.
    static GriddedDensity uniform(const Grid& grid);

    const Grid& grid() const { return fn_.grid(); }
    const GridFunction& fn() const { return fn_; }
    const std::vector<double>& values() const { return fn_.values(); }
    std::size_t size() const { return fn_.size(); }
    double operator[](std::size_t i) const { return fn_[i]; }

    double integral() const { return trapezoid_integral(fn_); }

    //! Re-checks the class invariants; used by tests and the CLI.
    void validate() const;

private:
    explicit GriddedDensity(GridFunction fn) : fn_(std::move(fn)) {}
    GridFunction fn_;
};

//! A zero-integral grid function, the clr image of a density.
class ClrFunction {
public:
    //! Validates the zero-integral invariant (within kIntegralTol).
    static ClrFunction from_function(GridFunction fn);

    static ClrFunction zero(const Grid& grid) {
        return ClrFunction(GridFunction::zero(grid));
    }

    const Grid& grid() const { return fn_.grid(); }
    const GridFunction& fn() const { return fn_; }
    const std::vector<double>& values() const { return fn_.values(); }
    std::size_t size() const { return fn_.size(); }
    double operator[](std::size_t i) const { return fn_[i]; }

private:
    friend ClrFunction clr_unchecked(GridFunction fn);
    explicit ClrFunction(GridFunction fn) : fn_(std::move(fn)) {}
    GridFunction fn_;
};

//! Time-ordered sequence of densities sharing one grid, optionally labeled.
class DensitySeries {
public:
    DensitySeries() = default;
    explicit DensitySeries(std::vector<GriddedDensity> densities,
                           std::vector<std::string> labels = {});

    void append(GriddedDensity d, std::string label = {});

    std::size_t size() const { return densities_.size(); }
    bool empty() const { return densities_.empty(); }
    const GriddedDensity& operator[](std::size_t i) const { return densities_[i]; }
    const GriddedDensity& front() const { return densities_.front(); }
    const GriddedDensity& back() const { return densities_.back(); }
    const std::vector<GriddedDensity>& densities() const { return densities_; }

    const Grid& grid() const;
    bool has_labels() const { return !labels_.empty(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t i) const { return labels_[i]; }

    //! Copy of the first n densities (with labels when present).
    DensitySeries prefix(std::size_t n) const;

private:
    std::vector<GriddedDensity> densities_;
    std::vector<std::string> labels_;
};

} // namespace denseries
