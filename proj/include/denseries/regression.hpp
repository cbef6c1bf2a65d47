#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "denseries/bayes.hpp"
#include "denseries/density.hpp"

namespace denseries {

//! Kernel for the functional Nadaraya-Watson weights:
//! K(u) = 1 - u^2 on [0, 1), zero elsewhere. Lipschitz and positive on its
//! support, which is what the estimator's theory asks of it.
struct RegressionKernel {
    enum class Shape { epanechnikov_halved };
    Shape shape = Shape::epanechnikov_halved;

    double operator()(double u) const { return (u >= 0.0 && u < 1.0) ? 1.0 - u * u : 0.0; }
};

//! A chosen regression bandwidth together with the cross-validation score
//! trace that produced it. h_reg == candidate_grid[selected_index].
struct BandwidthSelection {
    double h_reg = 0.0;
    std::vector<double> candidate_grid;
    std::vector<double> scores;
    std::size_t selected_index = 0;
};

//! How a forecasting step reacts when every kernel weight vanishes.
//! `fallback` enlarges the bandwidth to just past the nearest training
//! density (the event is logged); `abort` throws NumericError.
enum class EmptyNeighborhoodPolicy { fallback, abort };

//! Nadaraya-Watson weights of the training densities relative to a query:
//! w_t proportional to K(||f_t (-) query||_B / h_reg), normalized to sum 1.
//! Every density of `predictors` is used. Throws NumericError("empty
//! neighborhood ...") when all kernel evaluations are zero.
std::vector<double> nw_weights(const DensitySeries& predictors, const GriddedDensity& query,
                               double h_reg, const RegressionKernel& kernel = {});

//! Functional Bayes Nadaraya-Watson prediction: the weighted Bayes-space
//! average of successor densities, computed in clr space as
//! clr_inv(sum_t w_t clr(f_{t+1})) with weights from the first N = size-1
//! series entries against the query.
GriddedDensity bayes_nw_predict(const DensitySeries& series, const GriddedDensity& query,
                                double h_reg, const RegressionKernel& kernel = {});

//! Default candidate bandwidths: `count` log-spaced values between the 5th
//! and 95th percentile of the pairwise Bayes distances within the series.
std::vector<double> default_bandwidth_candidates(const DensitySeries& series,
                                                 std::size_t count = 25);

//! Leave-one-pair-out cross-validation over the candidate bandwidths: for
//! each candidate the summed squared Bayes distance between held-out
//! responses and their predictions from the remaining pairs. Candidates
//! producing an empty neighborhood for any pair score +infinity. An empty
//! candidate vector selects the default grid. threads > 1 scans candidates
//! in parallel.
BandwidthSelection gcv_select_bandwidth(const DensitySeries& series,
                                        const RegressionKernel& kernel,
                                        std::vector<double> candidates,
                                        unsigned threads = 1);

//! Iterated one-step-ahead forecasts: each prediction is appended to the
//! training series before the next step. With the abort policy an empty
//! neighborhood raises NumericError naming the failing step.
DensitySeries forecast_sequence(const DensitySeries& series, std::size_t horizon, double h_reg,
                                const RegressionKernel& kernel = {},
                                EmptyNeighborhoodPolicy policy = EmptyNeighborhoodPolicy::fallback,
                                std::vector<std::string>* log = nullptr);

//! Baseline: every forecast equals the last observed density.
DensitySeries random_walk_forecast(const DensitySeries& series, std::size_t horizon);

//! Expanding-window Bayes NW engine. Precomputes clr images and the pairwise
//! distance matrix of a fixed series once, then serves one-step-ahead
//! forecasts from any prefix, re-running bandwidth selection per window.
//! Produces the same forecasts as the free functions above, just without
//! re-deriving the geometry for every window.
class BayesNwForecaster {
public:
    struct Options {
        std::size_t candidate_count = 25;
        std::vector<double> candidates;   // fixed candidate grid when nonempty
        double fixed_bandwidth = 0.0;     // skip selection when > 0
        RegressionKernel kernel{};
        unsigned gcv_threads = 1;
        EmptyNeighborhoodPolicy policy = EmptyNeighborhoodPolicy::fallback;
    };

    explicit BayesNwForecaster(const DensitySeries& series) : BayesNwForecaster(series, Options{}) {}
    BayesNwForecaster(const DensitySeries& series, Options opts);

    //! Bandwidth selection restricted to the first train_len densities.
    BandwidthSelection select_bandwidth(std::size_t train_len) const;

    //! One-step-ahead forecast from the first train_len densities with a
    //! given bandwidth (query = last density of the window).
    GriddedDensity predict_next(std::size_t train_len, double h_reg,
                                std::vector<std::string>* log = nullptr) const;

    //! Selection plus prediction; `selected` receives the bandwidth when
    //! non-null. Windows of length 2 hold a single training pair, whose
    //! prediction is its successor irrespective of bandwidth.
    GriddedDensity forecast_one(std::size_t train_len, std::vector<std::string>* log = nullptr,
                                double* selected = nullptr) const;

    std::size_t series_length() const { return len_; }
    double distance(std::size_t i, std::size_t j) const { return dist_[i * len_ + j]; }

private:
    std::vector<double> prefix_weights(std::size_t train_len, std::size_t query,
                                       double h_reg, std::vector<std::string>* log) const;
    GriddedDensity combine(const std::vector<double>& weights, std::size_t first_successor) const;

    Grid grid_;
    Options opts_;
    std::size_t len_ = 0;
    std::size_t npts_ = 0;
    std::vector<double> clr_;   // len x npts, row-major
    std::vector<double> dist_;  // len x len
    std::vector<double> quad_;  // trapezoid weights
};

} // namespace denseries
