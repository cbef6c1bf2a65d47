#pragma once

#include <optional>
#include <vector>

#include "denseries/density.hpp"

namespace denseries {

//! A cross-sectional sample of real observations for one period.
class Sample {
public:
    explicit Sample(std::vector<double> observations);

    const std::vector<double>& observations() const { return obs_; }
    std::size_t size() const { return obs_.size(); }

    double mean() const;
    //! Sample standard deviation with denominator n-1.
    double stddev() const;
    double min() const;
    double max() const;

private:
    std::vector<double> obs_;
};

//! Silverman's rule-of-thumb bandwidth: 2.34 * sd * n^(-1/5).
//! Throws NumericError("degenerate sample ...") when the sample standard
//! deviation vanishes.
double silverman_rot(const Sample& sample);

//! Standard normal density restricted to [-1, 1] and renormalized; the
//! kernel used by kde_estimate. Zero outside [-1, 1].
double truncated_gaussian_kernel(double u);

struct KdeConfig {
    Grid grid;
    //! Bandwidth; when absent it is resolved by silverman_rot.
    std::optional<double> bandwidth{};
};

//! Kernel density estimate on the config grid: the kernel sum
//! (n h)^-1 sum_i K((x - X_i) / h) evaluated at every grid point, then
//! clipped at the positivity floor and renormalized over [a, b].
GriddedDensity kde_estimate(const Sample& sample, const KdeConfig& config);

//! Grid covering the sample's effective kernel support,
//! [min - 3h, max + 3h], used when no grid is supplied.
Grid default_kde_grid(const Sample& sample, std::size_t n_points);

//! Elementwise x -> ln(x + c) for nonnegative count data; c > 0.
Sample log_shift_transform(const Sample& raw, double c);

} // namespace denseries
