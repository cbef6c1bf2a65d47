#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "denseries/errors.hpp"
#include "denseries/runner.hpp"

namespace {

void print_error_record(const std::string& kind, const std::string& message) {
    nlohmann::json record;
    record["error"] = kind;
    record["message"] = message;
    std::fprintf(stderr, "%s\n", record.dump().c_str());
}

} // namespace

int main(int argc, char** argv) {
    denseries::RunConfig cfg;

    CLI::App app{"denseries: forecasting for time series of probability densities"};
    app.fallthrough(true);
    app.set_config("--config", "", "flat key=value config file; command-line flags win");

    app.add_option("--input", cfg.input, "input CSV path (backtest/forecast)");
    app.add_option("--input-format", cfg.input_format,
                   "input schema: density_matrix | raw_panel")
        ->check(CLI::IsMember({"density_matrix", "raw_panel"}));
    app.add_option("--panel-layout", cfg.panel_layout, "raw panel layout: wide | long")
        ->check(CLI::IsMember({"wide", "long"}));
    app.add_option("--preprocess", cfg.preprocess, "sample preprocessing: none | log_shift")
        ->check(CLI::IsMember({"none", "log_shift"}));
    app.add_option("--log-shift-c", cfg.log_shift_c, "shift constant c in ln(x + c)");
    app.add_option("--radix", cfg.radix, "density-matrix row total (life-table radix)");

    auto* grid_a = app.add_option("--grid-a", cfg.grid_a, "grid left endpoint");
    auto* grid_b = app.add_option("--grid-b", cfg.grid_b, "grid right endpoint");
    app.add_option("--grid-points", cfg.grid_points, "number of grid points");
    app.add_option("--kde-bandwidth", cfg.kde_bandwidth,
                   "kernel density bandwidth (0 = Silverman rule of thumb)");
    app.add_option("--reg-candidates", cfg.reg_candidates,
                   "number of candidate regression bandwidths");
    app.add_option("--reg-bandwidth", cfg.reg_bandwidth,
                   "fixed regression bandwidth (0 = cross-validated)");

    app.add_option("--sigma", cfg.sigma, "simulation error coefficient s.d.");
    app.add_option("--rho0", cfg.rho0, "simulation dependence parameter in (0,1)");
    app.add_option("--nu", cfg.nu, "simulation driver s.d.");
    app.add_option("--period", cfg.period, "simulation seasonal period");
    app.add_option("--length", cfg.length, "simulated series length");
    app.add_option("--test-len", cfg.test_len, "holdout length for simulate mode");
    app.add_option("--reps", cfg.reps, "number of simulation replications");

    app.add_option("--horizon", cfg.horizon, "forecast horizon");
    app.add_option("--initial-train", cfg.initial_train,
                   "initial training window (0 = two-thirds of the series)");
    app.add_option("--seed", cfg.seed, "random seed");
    app.add_option("--out", cfg.out_dir, "output directory");
    app.add_option("--threads", cfg.threads, "worker threads (0 = hardware concurrency)");

    auto* simulate = app.add_subcommand("simulate", "run seeded replications of the "
                                                    "simulation study and write the KLD table");
    auto* backtest = app.add_subcommand("backtest", "expanding-window backtest of the Bayes "
                                                    "NW forecaster and the random walk");
    auto* forecast = app.add_subcommand("forecast", "iterated one-step-ahead forecasts "
                                                    "from an ingested series");
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        app.exit(e);
        print_error_record("config", e.what());
        return 2;
    }

    if (simulate->parsed())
        cfg.mode = denseries::RunConfig::Mode::simulate;
    else if (backtest->parsed())
        cfg.mode = denseries::RunConfig::Mode::backtest;
    else if (forecast->parsed())
        cfg.mode = denseries::RunConfig::Mode::forecast;
    cfg.grid_set = grid_a->count() > 0 && grid_b->count() > 0;
    if ((grid_a->count() > 0) != (grid_b->count() > 0)) {
        print_error_record("config", "--grid-a and --grid-b must be given together");
        return 2;
    }

    try {
        denseries::run(cfg);
        return 0;
    } catch (const denseries::ConfigError& e) {
        print_error_record("config", e.what());
        return 2;
    } catch (const denseries::DataError& e) {
        print_error_record("data", e.what());
        return 3;
    } catch (const denseries::NumericError& e) {
        print_error_record("numeric", e.what());
        return 4;
    } catch (const std::exception& e) {
        print_error_record("numeric", e.what());
        return 4;
    }
}
