#include "denseries/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "denseries/bayes.hpp"
#include "denseries/stats_util.hpp"

namespace denseries {

double sym_kld(const GriddedDensity& f, const GriddedDensity& g) {
    require_same_grid(f.grid(), g.grid());
    const Grid& grid = f.grid();
    const std::size_t n = grid.size();
    // Two separate accumulations keep sym_kld(f, g) == sym_kld(g, f) exact.
    double fg = 0.0;
    double gf = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        fg += w * f[i] * std::log(f[i] / g[i]);
        gf += w * g[i] * std::log(g[i] / f[i]);
    }
    const double total = (fg + gf) * grid.spacing();
    return std::max(total, 0.0); // nonnegative up to roundoff by Gibbs' inequality
}

double bayes_mise(const DensitySeries& estimates, const DensitySeries& truths) {
    if (estimates.size() != truths.size())
        throw NumericError("length mismatch between estimate and truth series");
    double sum = 0.0;
    for (std::size_t t = 0; t < estimates.size(); ++t) {
        const double d = bayes_dist(estimates[t], truths[t]);
        sum += d * d;
    }
    return sum / static_cast<double>(estimates.size());
}

SummaryStats compute_summary(std::vector<double> values) {
    if (values.empty())
        throw NumericError("summary of empty value set");
    SummaryStats s;
    s.mean = mean_of(values);
    std::sort(values.begin(), values.end());
    s.min = values.front();
    s.q1 = quantile_sorted(values, 0.25);
    s.median = quantile_sorted(values, 0.5);
    s.q3 = quantile_sorted(values, 0.75);
    s.max = values.back();
    return s;
}

std::vector<double> BacktestReport::per_period_kld() const {
    std::vector<double> out;
    out.reserve(periods.size());
    for (const auto& p : periods)
        if (p.ok)
            out.push_back(p.kld);
    return out;
}

BacktestReport expanding_window_backtest(const DensitySeries& series, std::size_t initial_train,
                                         const Forecaster& method, std::string method_label) {
    if (initial_train < 2)
        throw ConfigError("initial training window must hold at least 2 densities");
    if (initial_train >= series.size())
        throw ConfigError("initial training window leaves no holdout periods");

    BacktestReport report;
    report.method = std::move(method_label);
    for (std::size_t j = initial_train; j < series.size(); ++j) {
        BacktestPeriod period;
        period.index = j;
        try {
            const GriddedDensity forecast = method(series, j, &report.log);
            forecast.validate();
            period.kld = sym_kld(forecast, series[j]);
            period.ok = true;
        } catch (const Error& e) {
            period.error = e.what();
            ++report.failure_count;
        }
        report.periods.push_back(std::move(period));
    }
    const std::vector<double> ok = report.per_period_kld();
    if (!ok.empty())
        report.summary = compute_summary(ok);
    return report;
}

Forecaster bayes_nw_forecaster(const DensitySeries& series, BayesNwForecaster::Options opts) {
    auto engine = std::make_shared<BayesNwForecaster>(series, std::move(opts));
    return [engine](const DensitySeries& s, std::size_t train_len,
                    std::vector<std::string>* log) {
        if (s.size() != engine->series_length())
            throw NumericError("forecaster was built for a different series");
        double h = 0.0;
        GriddedDensity out = engine->forecast_one(train_len, log, &h);
        if (log)
            log->push_back("window " + std::to_string(train_len) +
                           ": bandwidth " + std::to_string(h));
        return out;
    };
}

Forecaster random_walk_forecaster() {
    return [](const DensitySeries& s, std::size_t train_len, std::vector<std::string>*) {
        if (train_len == 0 || train_len > s.size())
            throw NumericError("window length out of range");
        return s[train_len - 1];
    };
}

} // namespace denseries
