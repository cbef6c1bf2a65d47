#include "denseries/runner.hpp"

#include <filesystem>
#include <optional>

#include "denseries/io.hpp"

namespace denseries {

namespace {

namespace fs = std::filesystem;

std::string out_path(const RunConfig& config, const std::string& name) {
    return (fs::path(config.out_dir) / name).string();
}

Preprocessing make_preprocessing(const RunConfig& config) {
    Preprocessing pre;
    if (config.preprocess == "log_shift")
        pre.kind = Preprocessing::Kind::log_shift;
    else if (config.preprocess != "none")
        throw ConfigError("unknown preprocess '" + config.preprocess +
                          "' (expected none or log_shift)");
    pre.log_shift_c = config.log_shift_c;
    return pre;
}

DensitySeries ingest_series(const RunConfig& config) {
    if (config.input.empty())
        throw ConfigError("this mode requires --input");
    if (config.input_format == "density_matrix")
        return ingest_density_matrix(config.input, config.radix);
    if (config.input_format != "raw_panel")
        throw ConfigError("unknown input format '" + config.input_format +
                          "' (expected density_matrix or raw_panel)");

    PanelLayout layout;
    if (config.panel_layout == "wide")
        layout = PanelLayout::wide;
    else if (config.panel_layout == "long")
        layout = PanelLayout::long_fmt;
    else
        throw ConfigError("unknown panel layout '" + config.panel_layout +
                          "' (expected wide or long)");

    const RawPanel panel = ingest_raw_panel(config.input, layout, make_preprocessing(config));
    std::optional<Grid> grid;
    if (config.grid_set)
        grid = Grid(config.grid_a, config.grid_b, config.grid_points);
    std::optional<double> bandwidth;
    if (config.kde_bandwidth > 0.0)
        bandwidth = config.kde_bandwidth;
    return estimate_series(panel, grid, config.grid_points, bandwidth);
}

BayesNwForecaster::Options nw_options(const RunConfig& config, unsigned gcv_threads) {
    BayesNwForecaster::Options opts;
    opts.candidate_count = config.reg_candidates;
    opts.fixed_bandwidth = config.reg_bandwidth;
    opts.gcv_threads = gcv_threads;
    return opts;
}

void run_simulate(const RunConfig& config) {
    DgpConfig dgp;
    dgp.sigma = config.sigma;
    dgp.rho0 = config.rho0;
    dgp.nu = config.nu;
    dgp.period = config.period;
    dgp.length = config.length;
    dgp.grid = Grid(-1.0, 1.0, config.grid_points);
    dgp.seed = config.seed;
    const ReplicationTable table =
        run_replications(dgp, config.reps, config.test_len, config.threads);
    write_replication_csv(out_path(config, "replications.csv"), table);
}

void run_backtest(const RunConfig& config) {
    const DensitySeries series = ingest_series(config);
    const std::size_t initial_train =
        config.initial_train > 0 ? config.initial_train
                                 : std::max<std::size_t>(2, series.size() * 2 / 3);

    BacktestReport nw = expanding_window_backtest(
        series, initial_train, bayes_nw_forecaster(series, nw_options(config, config.threads)),
        "bayes_nw");
    BacktestReport rw =
        expanding_window_backtest(series, initial_train, random_walk_forecaster(), "rw");

    const std::vector<std::string>* labels = series.has_labels() ? &series.labels() : nullptr;
    write_backtest_csv(out_path(config, "backtest_bayes_nw.csv"), nw, labels);
    write_backtest_csv(out_path(config, "backtest_rw.csv"), rw, labels);

    std::vector<std::string> log;
    log.push_back("mode=backtest initial_train=" + std::to_string(initial_train) +
                  " series_length=" + std::to_string(series.size()));
    log.insert(log.end(), nw.log.begin(), nw.log.end());
    write_text_lines(out_path(config, "run_log.txt"), log);
}

void run_forecast(const RunConfig& config) {
    const DensitySeries series = ingest_series(config);
    std::vector<std::string> log;
    log.push_back("mode=forecast horizon=" + std::to_string(config.horizon) +
                  " series_length=" + std::to_string(series.size()));

    double h = config.reg_bandwidth;
    if (h > 0.0) {
        log.push_back("bandwidth fixed by configuration: " + format_double(h));
        BandwidthSelection fixed;
        fixed.h_reg = h;
        fixed.candidate_grid = {h};
        fixed.scores = {0.0};
        write_bandwidth_csv(out_path(config, "bandwidth.csv"), fixed);
    } else {
        const BandwidthSelection sel = gcv_select_bandwidth(
            series, RegressionKernel{},
            default_bandwidth_candidates(series, config.reg_candidates), config.threads);
        h = sel.h_reg;
        log.push_back("bandwidth selected by cross-validation: " + format_double(h));
        write_bandwidth_csv(out_path(config, "bandwidth.csv"), sel);
    }

    const DensitySeries forecasts = forecast_sequence(series, config.horizon, h,
                                                      RegressionKernel{},
                                                      EmptyNeighborhoodPolicy::fallback, &log);
    write_forecast_csv(out_path(config, "forecast.csv"), forecasts);
    write_text_lines(out_path(config, "run_log.txt"), log);
}

} // namespace

void run(const RunConfig& config) {
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec)
        throw ConfigError("cannot create output directory " + config.out_dir + ": " +
                          ec.message());
    switch (config.mode) {
    case RunConfig::Mode::simulate:
        run_simulate(config);
        return;
    case RunConfig::Mode::backtest:
        run_backtest(config);
        return;
    case RunConfig::Mode::forecast:
        run_forecast(config);
        return;
    }
    throw ConfigError("unknown run mode");
}

} // namespace denseries
