#include "denseries/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "denseries/parallel.hpp"
#include "denseries/stats_util.hpp"

namespace denseries {

ClrFunction clr_unchecked(GridFunction fn); // density.cpp

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> trapezoid_weights(const Grid& grid) {
    std::vector<double> w(grid.size(), grid.spacing());
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

//! Unnormalized kernel evaluations; sum returned through sum_out.
std::vector<double> kernel_evals(const std::vector<double>& dists, double h,
                                 const RegressionKernel& kernel, double* sum_out) {
    std::vector<double> k(dists.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < dists.size(); ++i) {
        k[i] = kernel(dists[i] / h);
        sum += k[i];
    }
    *sum_out = sum;
    return k;
}

std::vector<double> candidates_from_distances(std::vector<double> dists, std::size_t count) {
    if (dists.empty() || count == 0)
        throw NumericError("cannot derive bandwidth candidates");
    std::sort(dists.begin(), dists.end());
    const double hi = quantile_sorted(dists, 0.95);
    if (hi <= 0.0)
        return {1.0}; // all densities coincide; any positive bandwidth works
    double lo = std::max(quantile_sorted(dists, 0.05), hi * 1e-3);
    if (lo >= hi || count == 1)
        return {hi};
    std::vector<double> out(count);
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (std::size_t i = 0; i < count; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(count - 1);
        out[i] = std::exp(llo + s * (lhi - llo));
    }
    return out;
}

void check_candidates(const std::vector<double>& candidates) {
    if (candidates.empty())
        throw ConfigError("bandwidth candidate grid is empty");
    for (double c : candidates)
        if (!(c > 0.0) || !std::isfinite(c))
            throw ConfigError("bandwidth candidates must be positive and finite");
}

//! Leave-one-pair-out CV score per candidate on the first prefix_len
//! densities. clr is len x npts row-major, dist is len x len, quad holds the
//! trapezoid weights. Candidates hitting an empty neighborhood score +inf.
std::vector<double> gcv_scores(std::size_t prefix_len, std::size_t npts,
                               const std::vector<double>& clr_mat,
                               const std::vector<double>& dist_mat, std::size_t dist_stride,
                               const std::vector<double>& quad,
                               const RegressionKernel& kernel,
                               const std::vector<double>& candidates, unsigned threads) {
    const std::size_t pairs = prefix_len - 1;
    std::vector<double> scores(candidates.size(), 0.0);
    parallel_for(candidates.size(), threads, [&](std::size_t c) {
        const double h = candidates[c];
        double total = 0.0;
        std::vector<double> pred(npts);
        for (std::size_t t = 0; t < pairs && total < kInf; ++t) {
            std::fill(pred.begin(), pred.end(), 0.0);
            double wsum = 0.0;
            for (std::size_t s = 0; s < pairs; ++s) {
                if (s == t)
                    continue;
                const double k = kernel(dist_mat[s * dist_stride + t] / h);
                if (k == 0.0)
                    continue;
                wsum += k;
                const double* row = clr_mat.data() + (s + 1) * npts;
                for (std::size_t i = 0; i < npts; ++i)
                    pred[i] += k * row[i];
            }
            if (wsum == 0.0) {
                total = kInf;
                break;
            }
            const double* resp = clr_mat.data() + (t + 1) * npts;
            double err = 0.0;
            for (std::size_t i = 0; i < npts; ++i) {
                const double d = pred[i] / wsum - resp[i];
                err += quad[i] * d * d;
            }
            total += err;
        }
        scores[c] = total;
    });
    return scores;
}

BandwidthSelection select_from_scores(std::vector<double> candidates, std::vector<double> scores) {
    std::size_t best = scores.size();
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (best == scores.size() || scores[i] < scores[best])
            best = i;
    if (best == scores.size() || scores[best] == kInf)
        throw NumericError("no valid bandwidth candidate: every candidate leaves some "
                           "training pair with an empty neighborhood");
    BandwidthSelection sel;
    sel.h_reg = candidates[best];
    sel.selected_index = best;
    sel.candidate_grid = std::move(candidates);
    sel.scores = std::move(scores);
    return sel;
}

} // namespace

std::vector<double> nw_weights(const DensitySeries& predictors, const GriddedDensity& query,
                               double h_reg, const RegressionKernel& kernel) {
    if (!(h_reg > 0.0))
        throw ConfigError("regression bandwidth must be positive");
    require_same_grid(predictors.grid(), query.grid());
    std::vector<double> dists(predictors.size());
    for (std::size_t i = 0; i < predictors.size(); ++i)
        dists[i] = bayes_dist(predictors[i], query);
    double sum = 0.0;
    std::vector<double> w = kernel_evals(dists, h_reg, kernel, &sum);
    if (sum == 0.0)
        throw NumericError("empty neighborhood: no training density within bandwidth " +
                           std::to_string(h_reg) + " of the query");
    for (double& x : w)
        x /= sum;
    return w;
}

GriddedDensity bayes_nw_predict(const DensitySeries& series, const GriddedDensity& query,
                                double h_reg, const RegressionKernel& kernel) {
    if (series.size() < 2)
        throw NumericError("Bayes NW prediction needs at least one training pair");
    const std::size_t n_pairs = series.size() - 1;
    std::vector<double> w = nw_weights(series.prefix(n_pairs), query, h_reg, kernel);

    const Grid& grid = series.grid();
    std::vector<double> pred(grid.size(), 0.0);
    for (std::size_t s = 0; s < n_pairs; ++s) {
        if (w[s] == 0.0)
            continue;
        const ClrFunction c = clr(series[s + 1]);
        for (std::size_t i = 0; i < grid.size(); ++i)
            pred[i] += w[s] * c[i];
    }
    return clr_inv(clr_unchecked(GridFunction(grid, std::move(pred))));
}

std::vector<double> default_bandwidth_candidates(const DensitySeries& series,
                                                 std::size_t count) {
    if (series.size() < 2)
        throw NumericError("candidate grid needs at least two densities");
    std::vector<double> dists;
    dists.reserve(series.size() * (series.size() - 1) / 2);
    for (std::size_t i = 0; i < series.size(); ++i)
        for (std::size_t j = i + 1; j < series.size(); ++j)
            dists.push_back(bayes_dist(series[i], series[j]));
    return candidates_from_distances(std::move(dists), count);
}

BandwidthSelection gcv_select_bandwidth(const DensitySeries& series,
                                        const RegressionKernel& kernel,
                                        std::vector<double> candidates, unsigned threads) {
    if (series.size() < 3)
        throw NumericError("bandwidth selection needs a series of length >= 3");
    if (candidates.empty())
        candidates = default_bandwidth_candidates(series);
    check_candidates(candidates);

    const Grid& grid = series.grid();
    const std::size_t n = series.size();
    const std::size_t npts = grid.size();
    std::vector<double> clr_mat(n * npts);
    for (std::size_t t = 0; t < n; ++t) {
        const ClrFunction c = clr(series[t]);
        std::copy(c.values().begin(), c.values().end(), clr_mat.begin() + t * npts);
    }
    const std::vector<double> quad = trapezoid_weights(grid);
    std::vector<double> dist_mat(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double ss = 0.0;
            for (std::size_t k = 0; k < npts; ++k) {
                const double d = clr_mat[i * npts + k] - clr_mat[j * npts + k];
                ss += quad[k] * d * d;
            }
            dist_mat[i * n + j] = dist_mat[j * n + i] = std::sqrt(ss);
        }

    std::vector<double> scores =
        gcv_scores(n, npts, clr_mat, dist_mat, n, quad, kernel, candidates, threads);
    return select_from_scores(std::move(candidates), std::move(scores));
}

namespace {

//! Core one-step prediction with the empty-neighborhood policy applied.
GriddedDensity predict_with_policy(const DensitySeries& series, const GriddedDensity& query,
                                   double h_reg, const RegressionKernel& kernel,
                                   EmptyNeighborhoodPolicy policy,
                                   std::vector<std::string>* log) {
    if (series.size() < 2)
        throw NumericError("Bayes NW prediction needs at least one training pair");
    const std::size_t n_pairs = series.size() - 1;
    std::vector<double> dists(n_pairs);
    for (std::size_t s = 0; s < n_pairs; ++s)
        dists[s] = bayes_dist(series[s], query);
    double sum = 0.0;
    kernel_evals(dists, h_reg, kernel, &sum);
    double h = h_reg;
    if (sum == 0.0) {
        if (policy == EmptyNeighborhoodPolicy::abort)
            throw NumericError("empty neighborhood: no training density within bandwidth " +
                               std::to_string(h_reg) + " of the query");
        // Enlarge the bandwidth to just past the nearest training density.
        const double dmin = *std::min_element(dists.begin(), dists.end());
        h = dmin + 1e-12;
        if (kernel(dmin / h) == 0.0)
            h = dmin * (1.0 + 1e-9); // additive epsilon lost to rounding
        if (log)
            log->push_back("empty neighborhood at h=" + std::to_string(h_reg) +
                           "; enlarged bandwidth to " + std::to_string(h));
    }
    return bayes_nw_predict(series, query, h, kernel);
}

} // namespace

DensitySeries forecast_sequence(const DensitySeries& series, std::size_t horizon, double h_reg,
                                const RegressionKernel& kernel, EmptyNeighborhoodPolicy policy,
                                std::vector<std::string>* log) {
    if (horizon < 1)
        throw ConfigError("forecast horizon must be >= 1");
    DensitySeries extended(series.densities());
    DensitySeries out;
    for (std::size_t step = 0; step < horizon; ++step) {
        GriddedDensity next = [&] {
            try {
                return predict_with_policy(extended, extended.back(), h_reg, kernel, policy, log);
            } catch (const NumericError& e) {
                throw NumericError("forecast step " + std::to_string(step + 1) + ": " + e.what());
            }
        }();
        extended.append(next);
        out.append(std::move(next));
    }
    return out;
}

DensitySeries random_walk_forecast(const DensitySeries& series, std::size_t horizon) {
    if (horizon < 1)
        throw ConfigError("forecast horizon must be >= 1");
    DensitySeries out;
    for (std::size_t step = 0; step < horizon; ++step)
        out.append(series.back());
    return out;
}

BayesNwForecaster::BayesNwForecaster(const DensitySeries& series, Options opts)
    : grid_(series.grid()), opts_(std::move(opts)), len_(series.size()),
      npts_(series.grid().size()) {
    if (len_ < 2)
        throw NumericError("Bayes NW forecaster needs a series of length >= 2");
    if (!opts_.candidates.empty())
        check_candidates(opts_.candidates);
    quad_ = trapezoid_weights(grid_);
    clr_.resize(len_ * npts_);
    for (std::size_t t = 0; t < len_; ++t) {
        const ClrFunction c = clr(series[t]);
        std::copy(c.values().begin(), c.values().end(), clr_.begin() + t * npts_);
    }
    dist_.assign(len_ * len_, 0.0);
    for (std::size_t i = 0; i < len_; ++i)
        for (std::size_t j = i + 1; j < len_; ++j) {
            double ss = 0.0;
            for (std::size_t k = 0; k < npts_; ++k) {
                const double d = clr_[i * npts_ + k] - clr_[j * npts_ + k];
                ss += quad_[k] * d * d;
            }
            dist_[i * len_ + j] = dist_[j * len_ + i] = std::sqrt(ss);
        }
}

BandwidthSelection BayesNwForecaster::select_bandwidth(std::size_t train_len) const {
    if (train_len < 3 || train_len > len_)
        throw NumericError("bandwidth selection needs a window of length >= 3");
    std::vector<double> candidates = opts_.candidates;
    if (candidates.empty()) {
        std::vector<double> window_dists;
        window_dists.reserve(train_len * (train_len - 1) / 2);
        for (std::size_t i = 0; i < train_len; ++i)
            for (std::size_t j = i + 1; j < train_len; ++j)
                window_dists.push_back(dist_[i * len_ + j]);
        candidates = candidates_from_distances(std::move(window_dists), opts_.candidate_count);
    }
    std::vector<double> scores = gcv_scores(train_len, npts_, clr_, dist_, len_, quad_,
                                            opts_.kernel, candidates, opts_.gcv_threads);
    return select_from_scores(std::move(candidates), std::move(scores));
}

std::vector<double> BayesNwForecaster::prefix_weights(std::size_t train_len, std::size_t query,
                                                      double h_reg,
                                                      std::vector<std::string>* log) const {
    const std::size_t pairs = train_len - 1;
    std::vector<double> dists(pairs);
    for (std::size_t s = 0; s < pairs; ++s)
        dists[s] = dist_[s * len_ + query];
    double sum = 0.0;
    std::vector<double> w = kernel_evals(dists, h_reg, opts_.kernel, &sum);
    if (sum == 0.0) {
        if (opts_.policy == EmptyNeighborhoodPolicy::abort)
            throw NumericError("empty neighborhood: no training density within bandwidth " +
                               std::to_string(h_reg) + " of the query");
        const double dmin = *std::min_element(dists.begin(), dists.end());
        double enlarged = dmin + 1e-12;
        if (opts_.kernel(dmin / enlarged) == 0.0)
            enlarged = dmin * (1.0 + 1e-9);
        if (log)
            log->push_back("empty neighborhood at h=" + std::to_string(h_reg) +
                           "; enlarged bandwidth to " + std::to_string(enlarged));
        w = kernel_evals(dists, enlarged, opts_.kernel, &sum);
    }
    for (double& x : w)
        x /= sum;
    return w;
}

GriddedDensity BayesNwForecaster::combine(const std::vector<double>& weights,
                                          std::size_t first_successor) const {
    std::vector<double> pred(npts_, 0.0);
    for (std::size_t s = 0; s < weights.size(); ++s) {
        if (weights[s] == 0.0)
            continue;
        const double* row = clr_.data() + (first_successor + s) * npts_;
        for (std::size_t i = 0; i < npts_; ++i)
            pred[i] += weights[s] * row[i];
    }
    return clr_inv(clr_unchecked(GridFunction(grid_, std::move(pred))));
}

GriddedDensity BayesNwForecaster::predict_next(std::size_t train_len, double h_reg,
                                               std::vector<std::string>* log) const {
    if (train_len < 2 || train_len > len_)
        throw NumericError("prediction window must hold at least one training pair");
    if (!(h_reg > 0.0))
        throw ConfigError("regression bandwidth must be positive");
    const std::vector<double> w = prefix_weights(train_len, train_len - 1, h_reg, log);
    return combine(w, 1);
}

GriddedDensity BayesNwForecaster::forecast_one(std::size_t train_len,
                                               std::vector<std::string>* log,
                                               double* selected) const {
    if (opts_.fixed_bandwidth > 0.0) {
        if (selected)
            *selected = opts_.fixed_bandwidth;
        return predict_next(train_len, opts_.fixed_bandwidth, log);
    }
    if (train_len == 2) {
        // A single training pair: the prediction is its successor for any
        // bandwidth, and there is nothing to cross-validate.
        if (log)
            log->push_back("window of length 2: prediction is the lone successor");
        if (selected)
            *selected = 1.0;
        return predict_next(train_len, 1.0, log);
    }
    const BandwidthSelection sel = select_bandwidth(train_len);
    if (selected)
        *selected = sel.h_reg;
    return predict_next(train_len, sel.h_reg, log);
}

} // namespace denseries
