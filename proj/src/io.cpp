#include "denseries/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace denseries {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ','))
        fields.push_back(field);
    if (!line.empty() && line.back() == ',')
        fields.emplace_back();
    return fields;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& raw, std::size_t line_no) {
    const std::string s = trim(raw);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw DataError("parse error at line " + std::to_string(line_no) +
                        ": expected a number, got '" + raw + "'");
    return value;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open input file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        lines.push_back(line);
    }
    if (lines.empty())
        throw DataError("empty input file: " + path);
    return lines;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot open output file: " + path);
    return out;
}

Sample preprocess_sample(std::vector<double> values, const Preprocessing& pre) {
    Sample sample(std::move(values));
    if (pre.kind == Preprocessing::Kind::log_shift)
        return log_shift_transform(sample, pre.log_shift_c);
    return sample;
}

//! Grid reconstructed from numeric coordinate labels; spacing must be
//! uniform up to a relative tolerance.
Grid grid_from_coordinates(const std::vector<double>& coords) {
    if (coords.size() < 3)
        throw DataError("need at least 3 grid coordinates");
    const Grid grid(coords.front(), coords.back(), coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i)
        if (std::abs(coords[i] - grid.point(i)) > 1e-9 * std::max(1.0, std::abs(coords[i])))
            throw DataError("grid coordinates are not uniformly spaced near index " +
                            std::to_string(i));
    return grid;
}

} // namespace

RawPanel ingest_raw_panel(const std::string& path, PanelLayout layout,
                          const Preprocessing& preprocessing) {
    const std::vector<std::string> lines = read_lines(path);
    RawPanel panel;

    if (layout == PanelLayout::wide) {
        const std::vector<std::string> header = split_csv_line(lines[0]);
        if (header.empty())
            throw DataError("parse error at line 1: empty header");
        std::vector<std::vector<double>> columns(header.size());
        for (std::size_t ln = 1; ln < lines.size(); ++ln) {
            if (trim(lines[ln]).empty())
                continue;
            const std::vector<std::string> fields = split_csv_line(lines[ln]);
            if (fields.size() != header.size())
                throw DataError("parse error at line " + std::to_string(ln + 1) + ": got " +
                                std::to_string(fields.size()) + " fields, expected " +
                                std::to_string(header.size()));
            for (std::size_t c = 0; c < fields.size(); ++c)
                columns[c].push_back(parse_double(fields[c], ln + 1));
        }
        for (std::size_t c = 0; c < header.size(); ++c)
            panel.periods.emplace_back(trim(header[c]),
                                       preprocess_sample(std::move(columns[c]), preprocessing));
    } else {
        const std::vector<std::string> header = split_csv_line(lines[0]);
        if (header.size() != 2)
            throw DataError("parse error at line 1: long format expects 'period,value'");
        std::vector<std::string> order;
        std::map<std::string, std::vector<double>> groups;
        for (std::size_t ln = 1; ln < lines.size(); ++ln) {
            if (trim(lines[ln]).empty())
                continue;
            const std::vector<std::string> fields = split_csv_line(lines[ln]);
            if (fields.size() != 2)
                throw DataError("parse error at line " + std::to_string(ln + 1) +
                                ": expected 'period,value'");
            const std::string key = trim(fields[0]);
            auto it = groups.find(key);
            if (it == groups.end()) {
                order.push_back(key);
                it = groups.emplace(key, std::vector<double>{}).first;
            }
            it->second.push_back(parse_double(fields[1], ln + 1));
        }
        for (const std::string& key : order)
            panel.periods.emplace_back(key,
                                       preprocess_sample(std::move(groups[key]), preprocessing));
    }
    if (panel.periods.size() < 2)
        throw DataError("raw panel needs at least 2 periods, got " +
                        std::to_string(panel.periods.size()));
    return panel;
}

DensitySeries ingest_density_matrix(const std::string& path, double radix) {
    if (!(radix > 0.0))
        throw ConfigError("radix must be positive");
    const std::vector<std::string> lines = read_lines(path);
    const std::vector<std::string> header = split_csv_line(lines[0]);
    if (header.size() < 4)
        throw DataError("parse error at line 1: expected a period column plus >= 3 grid labels");
    std::vector<double> coords;
    for (std::size_t c = 1; c < header.size(); ++c)
        coords.push_back(parse_double(header[c], 1));
    const Grid grid = grid_from_coordinates(coords);

    DensitySeries series;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (trim(lines[ln]).empty())
            continue;
        const std::vector<std::string> fields = split_csv_line(lines[ln]);
        if (fields.size() != header.size())
            throw DataError("ragged matrix at line " + std::to_string(ln + 1) + ": got " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(header.size()));
        std::vector<double> row(coords.size());
        for (std::size_t c = 1; c < fields.size(); ++c) {
            const double v = parse_double(fields[c], ln + 1);
            if (v < 0.0)
                throw DataError("negative entry at line " + std::to_string(ln + 1));
            row[c - 1] = v / radix;
        }
        series.append(GriddedDensity::from_values(grid, std::move(row)), trim(fields[0]));
    }
    if (series.size() < 2)
        throw DataError("density matrix needs at least 2 rows");
    return series;
}

DensitySeries estimate_series(const RawPanel& panel, const std::optional<Grid>& grid,
                              std::size_t grid_points, std::optional<double> bandwidth) {
    if (panel.periods.size() < 2)
        throw DataError("panel needs at least 2 periods");
    Grid shared = [&] {
        if (grid)
            return *grid;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& [label, sample] : panel.periods) {
            const double h = bandwidth ? *bandwidth : silverman_rot(sample);
            lo = std::min(lo, sample.min() - 3.0 * h);
            hi = std::max(hi, sample.max() + 3.0 * h);
        }
        return Grid(lo, hi, grid_points);
    }();

    DensitySeries series;
    for (const auto& [label, sample] : panel.periods) {
        KdeConfig config{shared, bandwidth};
        series.append(kde_estimate(sample, config), label);
    }
    return series;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_density_series_csv(const std::string& path, const DensitySeries& series) {
    std::ofstream out = open_output(path);
    const Grid& grid = series.grid();
    out << "period";
    for (std::size_t i = 0; i < grid.size(); ++i)
        out << ',' << format_double(grid.point(i));
    out << '\n';
    for (std::size_t t = 0; t < series.size(); ++t) {
        out << (series.has_labels() ? series.label(t) : std::to_string(t + 1));
        for (std::size_t i = 0; i < grid.size(); ++i)
            out << ',' << format_double(series[t][i]);
        out << '\n';
    }
}

DensitySeries read_density_series_csv(const std::string& path) {
    return ingest_density_matrix(path, 1.0);
}

void write_forecast_csv(const std::string& path, const DensitySeries& forecasts) {
    std::ofstream out = open_output(path);
    const Grid& grid = forecasts.grid();
    out << "x";
    for (std::size_t s = 0; s < forecasts.size(); ++s)
        out << ",step_" << (s + 1);
    out << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out << format_double(grid.point(i));
        for (std::size_t s = 0; s < forecasts.size(); ++s)
            out << ',' << format_double(forecasts[s][i]);
        out << '\n';
    }
}

DensitySeries read_forecast_csv(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    const std::vector<std::string> header = split_csv_line(lines[0]);
    if (header.size() < 2)
        throw DataError("parse error at line 1: expected x plus forecast columns");
    const std::size_t n_steps = header.size() - 1;
    std::vector<double> coords;
    std::vector<std::vector<double>> cols(n_steps);
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (trim(lines[ln]).empty())
            continue;
        const std::vector<std::string> fields = split_csv_line(lines[ln]);
        if (fields.size() != header.size())
            throw DataError("ragged matrix at line " + std::to_string(ln + 1));
        coords.push_back(parse_double(fields[0], ln + 1));
        for (std::size_t c = 1; c < fields.size(); ++c)
            cols[c - 1].push_back(parse_double(fields[c], ln + 1));
    }
    const Grid grid = grid_from_coordinates(coords);
    DensitySeries out;
    for (std::size_t s = 0; s < n_steps; ++s)
        out.append(GriddedDensity::from_values(grid, std::move(cols[s])));
    return out;
}

void write_backtest_csv(const std::string& path, const BacktestReport& report,
                        const std::vector<std::string>* labels) {
    std::ofstream out = open_output(path);
    out << "period,kld\n";
    for (const auto& p : report.periods) {
        const std::string period =
            labels && p.index < labels->size() ? (*labels)[p.index] : std::to_string(p.index);
        if (p.ok)
            out << period << ',' << format_double(p.kld) << '\n';
        else
            out << period << ",failed: " << p.error << '\n';
    }
    out << '\n';
    out << "statistic,value\n";
    out << "Min.," << format_double(report.summary.min) << '\n';
    out << "1st Qu.," << format_double(report.summary.q1) << '\n';
    out << "Median," << format_double(report.summary.median) << '\n';
    out << "Mean," << format_double(report.summary.mean) << '\n';
    out << "3rd Qu.," << format_double(report.summary.q3) << '\n';
    out << "Max.," << format_double(report.summary.max) << '\n';
    out << "failures," << report.failure_count << '\n';
}

void write_replication_csv(const std::string& path, const ReplicationTable& table) {
    std::ofstream out = open_output(path);
    out << "rep,method,kld\n";
    for (const auto& row : table.rows)
        out << row.rep << ',' << row.method << ',' << format_double(row.kld) << '\n';
}

void write_bandwidth_csv(const std::string& path, const BandwidthSelection& selection) {
    std::ofstream out = open_output(path);
    out << "candidate,score\n";
    for (std::size_t i = 0; i < selection.candidate_grid.size(); ++i)
        out << format_double(selection.candidate_grid[i]) << ','
            << format_double(selection.scores[i]) << '\n';
    out << "selected," << format_double(selection.h_reg) << '\n';
}

void write_text_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream out = open_output(path);
    for (const auto& line : lines)
        out << line << '\n';
}

} // namespace denseries
