#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "denseries/errors.hpp"

namespace denseries {

//! Linear-interpolation quantile (R type 7) of an ascending-sorted vector.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty())
        throw NumericError("quantile of empty vector");
    if (p <= 0.0)
        return sorted.front();
    if (p >= 1.0)
        return sorted.back();
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size())
        return sorted.back();
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double mean_of(const std::vector<double>& v) {
    if (v.empty())
        throw NumericError("mean of empty vector");
    double s = 0.0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}

} // namespace denseries
