#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "denseries/density.hpp"
#include "denseries/regression.hpp"

namespace denseries {

//! Symmetric Kullback-Leibler divergence under trapezoid quadrature:
//! integral of f ln(f/g) plus integral of g ln(g/f). Nonnegative; zero
//! exactly when the densities coincide pointwise.
double sym_kld(const GriddedDensity& f, const GriddedDensity& g);

//! Mean squared Bayes distance between paired series.
double bayes_mise(const DensitySeries& estimates, const DensitySeries& truths);

struct SummaryStats {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double mean = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

//! Six-number summary (R-style quartiles, type 7).
SummaryStats compute_summary(std::vector<double> values);

struct BacktestPeriod {
    std::size_t index = 0;  // position of the forecast target in the series
    bool ok = false;
    double kld = 0.0;
    std::string error;
};

//! Per-period symmetric KLDs plus summary statistics for one forecaster on
//! one holdout segment. Failed periods are kept, counted, and excluded from
//! the summary.
struct BacktestReport {
    std::string method;
    std::vector<BacktestPeriod> periods;
    SummaryStats summary;
    std::size_t failure_count = 0;
    std::vector<std::string> log;

    std::vector<double> per_period_kld() const;
};

//! One-step-ahead forecaster: given the full series and a window length,
//! predicts the density at index train_len using only the first train_len
//! entries. Events of interest may be appended to log.
using Forecaster = std::function<GriddedDensity(const DensitySeries& series,
                                                std::size_t train_len,
                                                std::vector<std::string>* log)>;

//! Expanding-window backtest: for every holdout index j from initial_train
//! to the end, fit on the first j densities, forecast one step, and score
//! the symmetric KLD against the observed density. Each forecast is
//! validated against the density invariants before scoring.
BacktestReport expanding_window_backtest(const DensitySeries& series, std::size_t initial_train,
                                         const Forecaster& method, std::string method_label);

//! Bayes NW forecaster over a fixed series, re-running bandwidth selection
//! on every window. Precomputes the series geometry once.
Forecaster bayes_nw_forecaster(const DensitySeries& series,
                               BayesNwForecaster::Options opts = {});

//! Random-walk forecaster: repeats the last density of the window.
Forecaster random_walk_forecaster();

} // namespace denseries
