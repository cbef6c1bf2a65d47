#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "denseries/bayes.hpp"
#include "denseries/density.hpp"

namespace denseries {

//! Model error in clr space: a linear combination of the first five
//! trigonometric basis functions on [-1, 1],
//!   eta(u) = c1 cos(pi u) + c2 sin(pi u) + c3 cos(2 pi u)
//!          + c4 sin(2 pi u) + c5 cos(3 pi u),
//! each of which integrates to zero over the support.
ClrFunction trig_error(const std::vector<double>& coeffs, const Grid& grid);

//! Truncated normal density: exp(-(x - mu)^2 / (2 nu^2)) restricted to the
//! grid's support and renormalized.
GriddedDensity truncated_normal_density(double mu, double nu, const Grid& grid);

//! Raw kernel of the convolution regression operator, before flooring:
//!   m(f)(y) = (1 - rho0)^-1 * integral_{blo}^{bhi} f(x) g((y - rho0 x) / (1 - rho0)) dx
//! with limits clipped so the argument of g stays inside the support. The
//! integral is evaluated by trapezoid on a resampled copy of [blo, bhi] at
//! the grid's own resolution, interpolating f and g linearly.
GridFunction convolution_values(const GriddedDensity& f, const GriddedDensity& g, double rho0);

//! The regression operator of the data-generating process: the density of
//! rho0 X + (1 - rho0) Y for independent X ~ f and Y ~ g, floored and
//! renormalized to a GriddedDensity.
GriddedDensity convolution_operator(const GriddedDensity& f, const GriddedDensity& g,
                                    double rho0);

//! Tuning parameters of the data-generating process.
struct DgpConfig {
    double sigma = 0.1;        // s.d. of the trigonometric error coefficients
    double rho0 = 0.5;         // dependence parameter of the convolution operator
    double nu = 0.5;           // s.d. of the truncated-normal driver
    std::size_t period = 150;  // seasonal period T of the driver means
    std::size_t length = 150;  // number of densities to generate
    Grid grid{-1.0, 1.0, 201};
    std::uint64_t seed = 1;

    void validate() const;
};

struct SimulatedSeries {
    DensitySeries densities;         // f_1, ..., f_N
    DensitySeries signals;           // m(f_1), ..., m(f_{N-1})
    std::vector<ClrFunction> errors; // eta_1, ..., eta_{N-1}
};

//! Builds the density-valued time series
//!   f_1 = TN(cos(2 pi / T), nu^2),
//!   f_{t+1} = m(f_t) (+) clr_inv(eta_t),
//! where m convolves with the driver TN(cos(2 pi (t+1) / T), nu^2) and the
//! eta_t are trigonometric errors with N(0, sigma^2) coefficients.
//! Deterministic given the seed; sigma = 0 yields the noise-free chain.
SimulatedSeries generate_series(const DgpConfig& config);

//! Ratio of the mean squared Bayes norm of the errors to the mean squared
//! Bayes norm of the signals (both measured from the uniform density).
double noise_to_signal(const SimulatedSeries& series);

struct ReplicationRow {
    std::size_t rep;
    std::string method; // "bayes_nw" | "rw"
    double kld;
};

struct ReplicationTable {
    std::vector<ReplicationRow> rows;
    double mean_kld(const std::string& method) const;
};

//! Repeats the simulation `reps` times (replication r uses seed + r), holds
//! out the last test_len densities of each series, runs expanding-window
//! one-step-ahead forecasts with the Bayes NW estimator (bandwidth
//! re-selected per window) and the random walk, and reports the mean
//! symmetric KLD per replication and method. Replications run on up to
//! `threads` threads (0 = hardware concurrency).
ReplicationTable run_replications(const DgpConfig& config, std::size_t reps,
                                  std::size_t test_len, unsigned threads = 0);

} // namespace denseries
