#include <doctest.h>

#include <chrono>
#include <random>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "denseries/io.hpp"
#include "denseries/runner.hpp"

using namespace denseries;
namespace fs = std::filesystem;

namespace {

fs::path make_temp_dir(const std::string& stem) {
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    const auto dir = fs::temp_directory_path() / (stem + "_" + std::to_string(stamp));
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

//! Small density-matrix fixture: Gaussian bumps over an age-like grid.
std::string gaussian_matrix_csv(std::size_t periods, std::size_t points, double radix) {
    std::string csv = "period";
    for (std::size_t i = 0; i < points; ++i)
        csv += "," + std::to_string(i);
    csv += "\n";
    const double half = static_cast<double>(points - 1) / 2.0;
    for (std::size_t t = 0; t < periods; ++t) {
        csv += "y" + std::to_string(t);
        const double centre = half + static_cast<double>(t);
        double total = 0.0;
        std::vector<double> row(points);
        for (std::size_t i = 0; i < points; ++i) {
            const double d = (static_cast<double>(i) - centre) / (half / 2.0);
            row[i] = std::exp(-0.5 * d * d);
            total += row[i];
        }
        for (std::size_t i = 0; i < points; ++i)
            csv += "," + format_double(row[i] / total * radix);
        csv += "\n";
    }
    return csv;
}

} // namespace

TEST_CASE("wide raw panel ingestion") {
    const auto dir = make_temp_dir("denseries_panel");
    const auto path = dir / "panel.csv";
    write_file(path, "d1,d2,d3\n1,2,3\n4,5,6\n7,8,9\n10,11,12\n");

    const RawPanel panel = ingest_raw_panel(path.string(), PanelLayout::wide, {});
    REQUIRE(panel.periods.size() == 3);
    CHECK(panel.periods[0].first == "d1");
    CHECK(panel.periods[0].second.size() == 4);
    CHECK(panel.periods[2].second.observations()[3] == 12.0);
    fs::remove_all(dir);
}

TEST_CASE("long raw panel ingestion groups by first appearance") {
    const auto dir = make_temp_dir("denseries_panel_long");
    const auto path = dir / "panel.csv";
    write_file(path, "period,value\nmar,1\nmar,2\napr,3\nmar,4\napr,5\n");
    const RawPanel panel = ingest_raw_panel(path.string(), PanelLayout::long_fmt, {});
    REQUIRE(panel.periods.size() == 2);
    CHECK(panel.periods[0].first == "mar");
    CHECK(panel.periods[0].second.size() == 3);
    CHECK(panel.periods[1].second.size() == 2);
    fs::remove_all(dir);
}

TEST_CASE("log shift preprocessing maps zero counts to ln(c)") {
    const auto dir = make_temp_dir("denseries_panel_shift");
    const auto path = dir / "panel.csv";
    write_file(path, "a,b\n0,1\n2,3\n");
    Preprocessing pre;
    pre.kind = Preprocessing::Kind::log_shift;
    pre.log_shift_c = 0.1;
    const RawPanel panel = ingest_raw_panel(path.string(), PanelLayout::wide, pre);
    CHECK(panel.periods[0].second.observations()[0] ==
          doctest::Approx(-2.302585093).epsilon(1e-9));
    fs::remove_all(dir);
}

TEST_CASE("malformed rows name the offending line") {
    const auto dir = make_temp_dir("denseries_panel_bad");
    const auto path = dir / "panel.csv";
    write_file(path, "a,b\n1,2\n3,oops\n");
    try {
        ingest_raw_panel(path.string(), PanelLayout::wide, {});
        FAIL("expected a parse error");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    fs::remove_all(dir);
}

TEST_CASE("density matrix ingestion") {
    const auto dir = make_temp_dir("denseries_matrix");
    const auto path = dir / "matrix.csv";

    SUBCASE("life-table style rows normalize to unit mass") {
        write_file(path, gaussian_matrix_csv(3, 21, 100000.0));
        const DensitySeries s = ingest_density_matrix(path.string(), 100000.0);
        REQUIRE(s.size() == 3);
        CHECK(s.grid().spacing() == 1.0);
        for (std::size_t t = 0; t < s.size(); ++t) {
            s[t].validate();
            CHECK(s[t].integral() == doctest::Approx(1.0).epsilon(1e-6));
        }
        CHECK(s.label(0) == "y0");
    }
    SUBCASE("identical rows land at Bayes distance zero") {
        write_file(path, "p,0,1,2,3\nr1,10,20,30,40\nr2,10,20,30,40\n");
        const DensitySeries s = ingest_density_matrix(path.string(), 100.0);
        CHECK(bayes_dist(s[0], s[1]) < 1e-10);
    }
    SUBCASE("zero entries are floored, not rejected") {
        write_file(path, "p,0,1,2,3\nr1,0,20,30,40\nr2,10,20,30,40\n");
        const DensitySeries s = ingest_density_matrix(path.string(), 100.0);
        CHECK(s[0][0] > 0.0);
        s[0].validate();
    }
    SUBCASE("negative entries are rejected") {
        write_file(path, "p,0,1,2,3\nr1,-1,20,30,40\nr2,10,20,30,40\n");
        CHECK_THROWS_AS(ingest_density_matrix(path.string(), 100.0), DataError);
    }
    SUBCASE("ragged rows are rejected") {
        write_file(path, "p,0,1,2,3\nr1,1,20,30\nr2,10,20,30,40\n");
        CHECK_THROWS_AS(ingest_density_matrix(path.string(), 100.0), DataError);
    }
    fs::remove_all(dir);
}

TEST_CASE("series round-trips through emission and re-ingestion") {
    const auto dir = make_temp_dir("denseries_roundtrip");
    const auto path = dir / "matrix.csv";
    write_file(path, gaussian_matrix_csv(4, 31, 100000.0));
    const DensitySeries original = ingest_density_matrix(path.string(), 100000.0);

    const auto emitted = dir / "emitted.csv";
    write_density_series_csv(emitted.string(), original);
    const DensitySeries back = read_density_series_csv(emitted.string());
    REQUIRE(back.size() == original.size());
    for (std::size_t t = 0; t < back.size(); ++t)
        for (std::size_t i = 0; i < back.grid().size(); ++i)
            CHECK(std::abs(back[t][i] - original[t][i]) < 1e-12);
    CHECK(back.label(2) == original.label(2));
    fs::remove_all(dir);
}

TEST_CASE("forecast matrices round-trip") {
    const auto dir = make_temp_dir("denseries_forecast_roundtrip");
    const auto path = dir / "matrix.csv";
    write_file(path, gaussian_matrix_csv(3, 41, 1.0));
    const DensitySeries s = ingest_density_matrix(path.string(), 1.0);

    const auto emitted = dir / "forecast.csv";
    write_forecast_csv(emitted.string(), s);
    const DensitySeries back = read_forecast_csv(emitted.string());
    REQUIRE(back.size() == s.size());
    for (std::size_t t = 0; t < back.size(); ++t)
        for (std::size_t i = 0; i < back.grid().size(); ++i)
            CHECK(std::abs(back[t][i] - s[t][i]) < 1e-10);
    fs::remove_all(dir);
}

TEST_CASE("simulate runs are byte-identical under one seed") {
    const auto dir = make_temp_dir("denseries_run_sim");
    RunConfig cfg;
    cfg.mode = RunConfig::Mode::simulate;
    cfg.length = 10;
    cfg.test_len = 2;
    cfg.reps = 2;
    cfg.grid_points = 51;
    cfg.seed = 42;
    cfg.threads = 2;

    cfg.out_dir = (dir / "a").string();
    run(cfg);
    cfg.out_dir = (dir / "b").string();
    run(cfg);
    CHECK(slurp(dir / "a" / "replications.csv") == slurp(dir / "b" / "replications.csv"));
    fs::remove_all(dir);
}

TEST_CASE("forecast mode emits the last row for a constant series") {
    const auto dir = make_temp_dir("denseries_run_fc");
    const auto input = dir / "matrix.csv";
    std::string csv = "p,0,1,2,3,4\n";
    for (int t = 0; t < 5; ++t)
        csv += "r" + std::to_string(t) + ",5,10,20,10,5\n";
    write_file(input, csv);

    RunConfig cfg;
    cfg.mode = RunConfig::Mode::forecast;
    cfg.input = input.string();
    cfg.radix = 50.0;
    cfg.horizon = 1;
    cfg.out_dir = (dir / "out").string();
    run(cfg);

    const DensitySeries in = ingest_density_matrix(input.string(), 50.0);
    const DensitySeries fc = read_forecast_csv((dir / "out" / "forecast.csv").string());
    REQUIRE(fc.size() == 1);
    for (std::size_t i = 0; i < fc.grid().size(); ++i)
        CHECK(std::abs(fc[0][i] - in.back()[i]) < 1e-8);
    CHECK(fs::exists(dir / "out" / "bandwidth.csv"));
    CHECK(fs::exists(dir / "out" / "run_log.txt"));
    fs::remove_all(dir);
}

TEST_CASE("forecast mode runs end to end on a raw panel with log shift") {
    const auto dir = make_temp_dir("denseries_run_panel");
    const auto input = dir / "panel.csv";
    // count-like samples drifting upward across periods
    std::mt19937_64 rng(97);
    std::poisson_distribution<int> pois;
    std::string csv;
    const int periods = 6;
    const int n = 40;
    for (int p = 0; p < periods; ++p)
        csv += (p ? "," : "") + ("p" + std::to_string(p));
    csv += "\n";
    for (int i = 0; i < n; ++i) {
        for (int p = 0; p < periods; ++p) {
            pois = std::poisson_distribution<int>(10.0 + 3.0 * p);
            csv += (p ? "," : "") + std::to_string(pois(rng));
        }
        csv += "\n";
    }
    write_file(input, csv);

    RunConfig cfg;
    cfg.mode = RunConfig::Mode::forecast;
    cfg.input = input.string();
    cfg.input_format = "raw_panel";
    cfg.preprocess = "log_shift";
    cfg.grid_points = 101;
    cfg.horizon = 2;
    cfg.out_dir = (dir / "out").string();
    run(cfg);

    const DensitySeries fc = read_forecast_csv((dir / "out" / "forecast.csv").string());
    REQUIRE(fc.size() == 2);
    for (std::size_t s = 0; s < fc.size(); ++s)
        fc[s].validate();
    // log-shifted counts around 10..25 land near ln(10)..ln(25)
    CHECK(fc.grid().a() > 0.0);
    CHECK(fc.grid().b() < 5.0);

    const std::string trace = slurp(dir / "out" / "bandwidth.csv");
    CHECK(trace.find("candidate,score") != std::string::npos);
    CHECK(trace.find("selected,") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("backtest mode emits one row per holdout period") {
    const auto dir = make_temp_dir("denseries_run_bt");
    const auto input = dir / "matrix.csv";
    write_file(input, gaussian_matrix_csv(8, 25, 1000.0));

    RunConfig cfg;
    cfg.mode = RunConfig::Mode::backtest;
    cfg.input = input.string();
    cfg.radix = 1000.0;
    cfg.initial_train = 5;
    cfg.out_dir = (dir / "out").string();
    run(cfg);

    const std::string rw = slurp(dir / "out" / "backtest_rw.csv");
    std::size_t data_rows = 0;
    std::size_t pos = rw.find('\n') + 1;
    while (pos < rw.size() && rw[pos] != '\n') {
        ++data_rows;
        pos = rw.find('\n', pos) + 1;
    }
    CHECK(data_rows == 3); // 8 periods - 5 initial
    CHECK(rw.find("Min.") != std::string::npos);
    CHECK(rw.find("3rd Qu.") != std::string::npos);
    CHECK(fs::exists(dir / "out" / "backtest_bayes_nw.csv"));
    fs::remove_all(dir);
}
