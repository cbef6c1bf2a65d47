#pragma once

#include <cstddef>
#include <vector>

#include "denseries/errors.hpp"

namespace denseries {

//! Uniform grid of n_points >= 3 points spanning [a, b].
class Grid {
public:
    Grid(double a, double b, std::size_t n_points);

    double a() const { return a_; }
    double b() const { return b_; }
    std::size_t size() const { return n_; }
    double spacing() const { return spacing_; }
    double length() const { return b_ - a_; }
    double point(std::size_t i) const { return a_ + static_cast<double>(i) * spacing_; }

    bool operator==(const Grid& other) const {
        return a_ == other.a_ && b_ == other.b_ && n_ == other.n_;
    }
    bool operator!=(const Grid& other) const { return !(*this == other); }

private:
    double a_;
    double b_;
    std::size_t n_;
    double spacing_;
};

//! A real-valued function sampled on a Grid. Plain value type; all
//! operations on it are pure.
class GridFunction {
public:
    GridFunction(Grid grid, std::vector<double> values);

    //! Grid plus values evaluated by a callable at each grid point.
    template <typename F>
    static GridFunction tabulate(const Grid& grid, F&& f) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            v[i] = f(grid.point(i));
        return GridFunction(grid, std::move(v));
    }

    static GridFunction zero(const Grid& grid) {
        return GridFunction(grid, std::vector<double>(grid.size(), 0.0));
    }

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

private:
    Grid grid_;
    std::vector<double> values_;
};

//! Composite trapezoid rule over the function's grid.
double trapezoid_integral(const GridFunction& f);

//! Trapezoid rule on raw values over a grid (values.size() == grid.size()).
double trapezoid_integral(const Grid& grid, const std::vector<double>& values);

//! Elementwise arithmetic. Binary operations require identical grids and
//! throw NumericError("grid mismatch") otherwise.
GridFunction add(const GridFunction& f, const GridFunction& g);
GridFunction sub(const GridFunction& f, const GridFunction& g);
GridFunction mul(const GridFunction& f, const GridFunction& g);
GridFunction div(const GridFunction& f, const GridFunction& g); // divisor must be nonzero everywhere
GridFunction scale(double r, const GridFunction& f);
GridFunction ln(const GridFunction& f);  // values must be > 0
GridFunction exp(const GridFunction& f);

//! Throws NumericError unless both functions share one grid.
void require_same_grid(const Grid& f, const Grid& g);

} // namespace denseries
