#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "denseries/evaluation.hpp"
#include "denseries/regression.hpp"
#include "denseries/simulation.hpp"
#include "oracles.hpp"

using namespace denseries;
using namespace denseries::testing;

namespace {

//! Density at a chosen Bayes distance from the uniform: clr = dist * basis
//! for a basis function with unit L2 norm.
GriddedDensity at_distance(double dist, const Grid& grid, bool use_sine = false) {
    constexpr double pi = 3.14159265358979323846;
    const auto fn = GridFunction::tabulate(grid, [&](double u) {
        return dist * (use_sine ? std::sin(pi * u) : std::cos(pi * u));
    });
    return clr_inv(ClrFunction::from_function(fn));
}

double sup_diff(const GriddedDensity& f, const GriddedDensity& g) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        m = std::max(m, std::abs(f[i] - g[i]));
    return m;
}

DgpConfig small_dgp(std::size_t length, std::uint64_t seed) {
    DgpConfig cfg;
    cfg.length = length;
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("weights on equidistant training densities are uniform") {
    const Grid g = grid_m11();
    DensitySeries predictors;
    predictors.append(at_distance(0.2, g));
    predictors.append(at_distance(-0.2, g));
    const auto query = GriddedDensity::uniform(g);
    const auto w = nw_weights(predictors, query, 0.5);
    REQUIRE(w.size() == 2);
    CHECK(w[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(w[1] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("query coinciding with one density takes all the weight") {
    std::mt19937_64 rng(41);
    const Grid g = grid_m11();
    DensitySeries predictors;
    predictors.append(random_density(rng, g));
    predictors.append(random_density(rng, g));
    predictors.append(random_density(rng, g));
    const GriddedDensity query = predictors[1];
    double h = bayes_dist(predictors[0], query);
    h = std::min(h, bayes_dist(predictors[2], query)) * 0.5;
    const auto w = nw_weights(predictors, query, h);
    CHECK(w[0] == 0.0);
    CHECK(w[1] == 1.0);
    CHECK(w[2] == 0.0);
}

TEST_CASE("hand-computed weights at distances 0.1, 0.2, 0.3") {
    const Grid g = grid_m11();
    DensitySeries predictors;
    predictors.append(at_distance(0.1, g));
    predictors.append(at_distance(0.2, g));
    predictors.append(at_distance(0.3, g));
    const auto w = nw_weights(predictors, GriddedDensity::uniform(g), 0.4);
    CHECK(w[0] == doctest::Approx(0.4412).epsilon(1e-4));
    CHECK(w[1] == doctest::Approx(0.3529).epsilon(1e-4));
    CHECK(w[2] == doctest::Approx(0.2059).epsilon(1e-4));

    double sum = 0.0;
    for (double x : w)
        sum += x;
    CHECK(std::abs(sum - 1.0) < 1e-12);
}

TEST_CASE("weights depend on the distances only") {
    const Grid g = grid_m11();
    DensitySeries cosine, sine;
    for (double d : {0.1, 0.2, 0.3}) {
        cosine.append(at_distance(d, g, false));
        sine.append(at_distance(d, g, true));
    }
    const auto query = GriddedDensity::uniform(g);
    const auto w1 = nw_weights(cosine, query, 0.4);
    const auto w2 = nw_weights(sine, query, 0.4);
    for (std::size_t i = 0; i < w1.size(); ++i)
        CHECK(w1[i] == doctest::Approx(w2[i]).epsilon(1e-10));
}

TEST_CASE("bandwidth below the nearest distance raises, never silently uniform") {
    const Grid g = grid_m11();
    DensitySeries predictors;
    predictors.append(at_distance(0.2, g));
    predictors.append(at_distance(0.4, g));
    CHECK_THROWS_AS(nw_weights(predictors, GriddedDensity::uniform(g), 0.1), NumericError);
}

TEST_CASE("prediction from a single pair returns the successor") {
    std::mt19937_64 rng(42);
    const Grid g = grid_m11();
    DensitySeries series;
    series.append(random_density(rng, g));
    series.append(random_density(rng, g));
    const double h = bayes_dist(series[0], series.back()) + 1.0;
    const auto pred = bayes_nw_predict(series, series.back(), h);
    CHECK(sup_diff(pred, series[1]) < 1e-12);
}

TEST_CASE("half-half weights average the successors in clr space") {
    std::mt19937_64 rng(43);
    const Grid g = grid_m11();
    DensitySeries series;
    series.append(at_distance(0.2, g));   // predictor of pair 1
    series.append(at_distance(-0.2, g));  // successor 1 and predictor of pair 2
    series.append(random_density(rng, g));
    const auto query = GriddedDensity::uniform(g); // equidistant from both predictors
    const auto pred = bayes_nw_predict(series, query, 0.5);

    const ClrFunction expect =
        ClrFunction::from_function(scale(0.5, add(clr(series[1]).fn(), clr(series[2]).fn())));
    const ClrFunction got = clr(pred);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(std::abs(got[i] - expect[i]) < 1e-10);
}

TEST_CASE("identical successors are a fixed point for any weights") {
    std::mt19937_64 rng(44);
    const Grid g = grid_m11();
    const auto target = random_density(rng, g);
    DensitySeries series;
    series.append(random_density(rng, g));
    series.append(target);
    series.append(target);
    series.append(target);
    const auto pred = bayes_nw_predict(series, series[1], 2.0);
    CHECK(sup_diff(pred, target) < 1e-10);
}

TEST_CASE("prediction satisfies the density invariants and the clr identity") {
    const auto sim = generate_series(small_dgp(12, 5));
    const DensitySeries& s = sim.densities;
    const auto query = s.back();
    const double h = 0.8;
    const auto pred = bayes_nw_predict(s, query, h);
    pred.validate();

    const auto w = nw_weights(s.prefix(s.size() - 1), query, h);
    std::vector<double> combo(s.grid().size(), 0.0);
    for (std::size_t t = 0; t < w.size(); ++t) {
        const ClrFunction c = clr(s[t + 1]);
        for (std::size_t i = 0; i < combo.size(); ++i)
            combo[i] += w[t] * c[i];
    }
    const ClrFunction got = clr(pred);
    for (std::size_t i = 0; i < combo.size(); ++i)
        CHECK(std::abs(got[i] - combo[i]) < 1e-10);
}

TEST_CASE("bandwidth selection contracts") {
    const auto sim = generate_series(small_dgp(30, 6));
    const DensitySeries& s = sim.densities;

    SUBCASE("a single valid candidate is selected") {
        double h_all = 0.0; // wide enough to cover every pair
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j)
                h_all = std::max(h_all, bayes_dist(s[i], s[j]));
        h_all *= 1.1;
        const auto sel = gcv_select_bandwidth(s, RegressionKernel{}, {h_all});
        CHECK(sel.h_reg == h_all);
        CHECK(sel.scores.size() == 1);
    }
    SUBCASE("the selected bandwidth attains the minimum of the score trace") {
        const auto sel = gcv_select_bandwidth(s, RegressionKernel{}, {});
        CHECK(sel.h_reg == sel.candidate_grid[sel.selected_index]);
        for (std::size_t i = 0; i < sel.scores.size(); ++i)
            CHECK(sel.scores[sel.selected_index] <= sel.scores[i]);
    }
    SUBCASE("parallel candidate scan matches the serial one") {
        const auto serial = gcv_select_bandwidth(s, RegressionKernel{}, {}, 1);
        const auto parallel = gcv_select_bandwidth(s, RegressionKernel{}, {}, 4);
        CHECK(serial.h_reg == parallel.h_reg);
        for (std::size_t i = 0; i < serial.scores.size(); ++i)
            CHECK(serial.scores[i] == parallel.scores[i]);
    }
    SUBCASE("candidates smaller than every distance are rejected") {
        CHECK_THROWS_AS(gcv_select_bandwidth(s, RegressionKernel{}, {1e-9}), NumericError);
    }
}

TEST_CASE("forecast sequence") {
    const auto sim = generate_series(small_dgp(20, 7));
    const DensitySeries& s = sim.densities;
    const double h = 0.8;

    SUBCASE("horizon one equals a single prediction") {
        const auto seq = forecast_sequence(s, 1, h);
        REQUIRE(seq.size() == 1);
        CHECK(sup_diff(seq[0], bayes_nw_predict(s, s.back(), h)) == 0.0);
    }
    SUBCASE("a constant series is a fixed point") {
        std::mt19937_64 rng(45);
        const auto g = random_density(rng, grid_m11());
        DensitySeries constant;
        for (int i = 0; i < 6; ++i)
            constant.append(g);
        const auto seq = forecast_sequence(constant, 4, 0.7);
        for (std::size_t i = 0; i < seq.size(); ++i)
            CHECK(sup_diff(seq[i], g) < 1e-10);
    }
    SUBCASE("the recursion unrolls exactly") {
        const auto seq = forecast_sequence(s, 3, h);
        DensitySeries extended(s.densities());
        extended.append(seq[0]);
        const auto step2 = bayes_nw_predict(extended, extended.back(), h);
        CHECK(sup_diff(seq[1], step2) == 0.0);
        extended.append(seq[1]);
        const auto step3 = bayes_nw_predict(extended, extended.back(), h);
        CHECK(sup_diff(seq[2], step3) == 0.0);
    }
    SUBCASE("abort policy names the failing step") {
        DensitySeries far;
        far.append(at_distance(0.0, grid_m11()));
        far.append(at_distance(1.0, grid_m11()));
        far.append(at_distance(5.0, grid_m11()));
        try {
            forecast_sequence(far, 2, 1e-6, RegressionKernel{},
                              EmptyNeighborhoodPolicy::abort);
            FAIL("expected an empty-neighborhood error");
        } catch (const NumericError& e) {
            CHECK(std::string(e.what()).find("step 1") != std::string::npos);
        }
    }
    SUBCASE("fallback policy enlarges the bandwidth and logs it") {
        DensitySeries far;
        far.append(at_distance(0.0, grid_m11()));
        far.append(at_distance(1.0, grid_m11()));
        far.append(at_distance(5.0, grid_m11()));
        std::vector<std::string> log;
        const auto seq = forecast_sequence(far, 1, 1e-6, RegressionKernel{},
                                           EmptyNeighborhoodPolicy::fallback, &log);
        REQUIRE(seq.size() == 1);
        seq[0].validate();
        REQUIRE(!log.empty());
        CHECK(log[0].find("enlarged bandwidth") != std::string::npos);
    }
}

TEST_CASE("random walk forecast") {
    const auto sim = generate_series(small_dgp(10, 8));
    const auto seq = random_walk_forecast(sim.densities, 5);
    REQUIRE(seq.size() == 5);
    for (std::size_t i = 0; i < seq.size(); ++i)
        CHECK(sup_diff(seq[i], sim.densities.back()) == 0.0);
}

TEST_CASE("cached forecaster reproduces the naive estimator") {
    const auto sim = generate_series(small_dgp(25, 9));
    const DensitySeries& s = sim.densities;
    const BayesNwForecaster engine(s);

    for (std::size_t train_len : {5u, 12u, 24u}) {
        const auto naive_sel =
            gcv_select_bandwidth(s.prefix(train_len), RegressionKernel{}, {});
        const auto cached_sel = engine.select_bandwidth(train_len);
        CHECK(cached_sel.h_reg == doctest::Approx(naive_sel.h_reg).epsilon(1e-12));

        const auto naive = bayes_nw_predict(s.prefix(train_len), s[train_len - 1],
                                            naive_sel.h_reg);
        const auto cached = engine.predict_next(train_len, cached_sel.h_reg);
        CHECK(sup_diff(naive, cached) < 1e-12);
    }
}

TEST_CASE("cached forecaster handles the two-density window") {
    const auto sim = generate_series(small_dgp(5, 10));
    const BayesNwForecaster engine(sim.densities);
    double h = 0.0;
    const auto pred = engine.forecast_one(2, nullptr, &h);
    CHECK(sup_diff(pred, sim.densities[1]) < 1e-12);
}
