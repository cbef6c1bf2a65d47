#include "denseries/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace denseries {

Sample::Sample(std::vector<double> observations) : obs_(std::move(observations)) {
    if (obs_.size() < 2)
        throw DataError("sample needs at least 2 observations, got " +
                        std::to_string(obs_.size()));
    for (double x : obs_)
        if (!std::isfinite(x))
            throw DataError("non-finite observation in sample");
}

double Sample::mean() const {
    double s = 0.0;
    for (double x : obs_)
        s += x;
    return s / static_cast<double>(obs_.size());
}

double Sample::stddev() const {
    const double m = mean();
    double ss = 0.0;
    for (double x : obs_) {
        const double d = x - m;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(obs_.size() - 1));
}

double Sample::min() const { return *std::min_element(obs_.begin(), obs_.end()); }
double Sample::max() const { return *std::max_element(obs_.begin(), obs_.end()); }

double silverman_rot(const Sample& sample) {
    const double sd = sample.stddev();
    double scale = std::abs(sample.mean());
    for (double x : sample.observations())
        scale = std::max(scale, std::abs(x));
    if (sd <= scale * 1e-13)
        throw NumericError("degenerate sample: zero standard deviation");
    return 2.34 * sd * std::pow(static_cast<double>(sample.size()), -0.2);
}

double truncated_gaussian_kernel(double u) {
    if (u < -1.0 || u > 1.0)
        return 0.0;
    // mass of the standard normal on [-1, 1]
    static const double mass = std::erf(1.0 / std::numbers::sqrt2);
    static const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * mass);
    return norm * std::exp(-0.5 * u * u);
}

GriddedDensity kde_estimate(const Sample& sample, const KdeConfig& config) {
    const double h = config.bandwidth ? *config.bandwidth : silverman_rot(sample);
    if (h <= 0.0)
        throw ConfigError("bandwidth must be positive");
    const Grid& grid = config.grid;
    const double n = static_cast<double>(sample.size());
    std::vector<double> acc(grid.size(), 0.0);

    // The kernel vanishes outside |x - X_i| <= h, so each observation only
    // touches grid indices within that window.
    for (double x : sample.observations()) {
        const double lo = (x - h - grid.a()) / grid.spacing();
        const double hi = (x + h - grid.a()) / grid.spacing();
        if (hi < 0.0 || lo > static_cast<double>(grid.size() - 1))
            continue;
        const std::size_t i0 = static_cast<std::size_t>(std::max(0.0, std::ceil(lo)));
        const std::size_t i1 =
            std::min(grid.size() - 1, static_cast<std::size_t>(std::max(0.0, std::floor(hi))));
        for (std::size_t i = i0; i <= i1; ++i)
            acc[i] += truncated_gaussian_kernel((grid.point(i) - x) / h);
    }
    for (double& v : acc)
        v /= n * h;
    return GriddedDensity::from_values(grid, std::move(acc));
}

Grid default_kde_grid(const Sample& sample, std::size_t n_points) {
    const double h = silverman_rot(sample);
    return Grid(sample.min() - 3.0 * h, sample.max() + 3.0 * h, n_points);
}

Sample log_shift_transform(const Sample& raw, double c) {
    if (c <= 0.0)
        throw ConfigError("log shift constant must be positive");
    std::vector<double> out;
    out.reserve(raw.size());
    for (double x : raw.observations()) {
        if (x < 0.0)
            throw DataError("negative input under log shift: " + std::to_string(x));
        out.push_back(std::log(x + c));
    }
    return Sample(std::move(out));
}

} // namespace denseries
