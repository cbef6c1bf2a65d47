#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "denseries/density.hpp"
#include "denseries/evaluation.hpp"
#include "denseries/kde.hpp"
#include "denseries/regression.hpp"
#include "denseries/simulation.hpp"

namespace denseries {

//! One cross-sectional sample of raw observations per period.
struct RawPanel {
    std::vector<std::pair<std::string, Sample>> periods;
};

//! Layout of a raw-panel CSV: `wide` has one column per period (header row
//! holds the period labels, each row one observation per period); `long_fmt`
//! has two columns, period and value.
enum class PanelLayout { wide, long_fmt };

struct Preprocessing {
    enum class Kind { none, log_shift };
    Kind kind = Kind::none;
    double log_shift_c = 0.1;
};

//! Parses a raw panel CSV and applies the preprocessing to every sample.
//! Parse failures name the offending line.
RawPanel ingest_raw_panel(const std::string& path, PanelLayout layout,
                          const Preprocessing& preprocessing);

//! Parses a density-matrix CSV (header: period label column then numeric
//! grid coordinates; one nonnegative row per period), divides by the radix,
//! and floors/renormalizes each row into a GriddedDensity on the grid
//! spanned by the coordinate labels.
DensitySeries ingest_density_matrix(const std::string& path, double radix);

//! Kernel-density estimates for every panel period on one shared grid.
//! When no grid is supplied, one is derived from the panel's pooled range
//! widened by three rule-of-thumb bandwidths.
DensitySeries estimate_series(const RawPanel& panel, const std::optional<Grid>& grid,
                              std::size_t grid_points, std::optional<double> bandwidth);

//! 17-significant-digit decimal rendering; round-trips doubles exactly.
std::string format_double(double v);

//! Series as CSV: header `period,<x0>,...`; one row per period.
void write_density_series_csv(const std::string& path, const DensitySeries& series);
DensitySeries read_density_series_csv(const std::string& path);

//! Forecast matrix as CSV: header `x,step_1,...`; one row per grid point.
void write_forecast_csv(const std::string& path, const DensitySeries& forecasts);
DensitySeries read_forecast_csv(const std::string& path);

//! Backtest report as CSV: `period,kld` rows (periods replaced by series
//! labels when given), then a summary block with the six order statistics
//! and the failure count.
void write_backtest_csv(const std::string& path, const BacktestReport& report,
                        const std::vector<std::string>* labels = nullptr);

//! Replication table as CSV with columns rep,method,kld.
void write_replication_csv(const std::string& path, const ReplicationTable& table);

//! Candidate/score trace of a bandwidth selection plus the selected value.
void write_bandwidth_csv(const std::string& path, const BandwidthSelection& selection);

void write_text_lines(const std::string& path, const std::vector<std::string>& lines);

} // namespace denseries
