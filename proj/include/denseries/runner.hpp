#pragma once

#include <cstdint>
#include <string>

namespace denseries {

//! Run configuration shared by the CLI and the config-file loader. Field
//! names double as config-file keys and long-flag names.
struct RunConfig {
    enum class Mode { simulate, backtest, forecast };
    Mode mode = Mode::simulate;

    std::string input;                            // backtest/forecast input CSV
    std::string input_format = "density_matrix";  // density_matrix | raw_panel
    std::string panel_layout = "wide";            // wide | long
    std::string preprocess = "none";              // none | log_shift
    double log_shift_c = 0.1;
    double radix = 100000.0;

    double grid_a = 0.0;  // used only when grid_set
    double grid_b = 0.0;
    bool grid_set = false;
    std::size_t grid_points = 201;

    double kde_bandwidth = 0.0;  // 0 = Silverman rule of thumb

    std::size_t reg_candidates = 25;
    double reg_bandwidth = 0.0;  // 0 = GCV-selected

    double sigma = 0.1;
    double rho0 = 0.5;
    double nu = 0.5;
    std::size_t period = 150;
    std::size_t length = 150;
    std::size_t test_len = 50;
    std::size_t reps = 20;

    std::size_t horizon = 1;
    std::size_t initial_train = 0;  // 0 = two-thirds split
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    unsigned threads = 0;  // 0 = hardware concurrency
};

//! Executes one run and writes its artifacts into out_dir:
//!   simulate -> replications.csv
//!   backtest -> backtest_bayes_nw.csv, backtest_rw.csv, run_log.txt
//!   forecast -> forecast.csv, bandwidth.csv, run_log.txt
//! Throws ConfigError / DataError / NumericError on failure.
void run(const RunConfig& config);

} // namespace denseries
