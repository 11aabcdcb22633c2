#include "ltlab/timechange.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ltlab/occupation.hpp"
#include "ltlab/paths.hpp"

namespace ltlab::timechange {

TimeChangeMap::TimeChangeMap(TimeGrid source_grid, Eigen::ArrayXd clock_integral)
    : source_grid_(source_grid), clock_integral_(std::move(clock_integral)) {
    if (static_cast<std::size_t>(clock_integral_.size()) != source_grid_.points())
        throw std::invalid_argument("TimeChangeMap: integral sample count mismatch");
    if (clock_integral_[0] != 0.0)
        throw std::invalid_argument("TimeChangeMap: clock integral must start at 0");
    for (Eigen::Index i = 1; i < clock_integral_.size(); ++i)
        if (!(clock_integral_[i] > clock_integral_[i - 1]))
            throw std::invalid_argument("TimeChangeMap: clock integral must be strictly increasing");
}

double TimeChangeMap::operator()(double t) const {
    if (t < 0.0 || t > max_attained() * (1.0 + 1e-12))
        throw std::invalid_argument("TimeChangeMap: time " + std::to_string(t) +
                                    " outside [0, " + std::to_string(max_attained()) + "]");
    t = std::min(t, max_attained());
    const auto* begin = clock_integral_.data();
    const auto* end = begin + clock_integral_.size();
    const auto* it = std::lower_bound(begin, end, t);
    auto k = static_cast<Eigen::Index>(it - begin);
    if (k == 0) return 0.0;
    const double lo = clock_integral_[k - 1];
    const double hi = clock_integral_[k];
    const double frac = (t - lo) / (hi - lo);
    return source_grid_.time(static_cast<std::size_t>(k - 1)) + frac * source_grid_.dt();
}

TimeGrid TimeChangeMap::sample_grid() const {
    return TimeGrid(max_attained(), source_grid_.steps());
}

Eigen::ArrayXd TimeChangeMap::forward_samples() const {
    const TimeGrid grid = sample_grid();
    Eigen::ArrayXd samples(static_cast<Eigen::Index>(grid.points()));
    for (std::size_t j = 0; j < grid.points(); ++j)
        samples[static_cast<Eigen::Index>(j)] =
            (*this)(j == grid.steps() ? max_attained() : grid.time(j));
    return samples;
}

double TimeChangeMap::clock_integral_at(double s) const {
    if (s < 0.0 || s > source_grid_.horizon() * (1.0 + 1e-12))
        throw std::invalid_argument("TimeChangeMap: source time outside grid");
    const double pos = s / source_grid_.dt();
    const auto k = std::min(static_cast<Eigen::Index>(pos),
                            static_cast<Eigen::Index>(source_grid_.steps()) - 1);
    const double frac = pos - static_cast<double>(k);
    return clock_integral_[k] + frac * (clock_integral_[k + 1] - clock_integral_[k]);
}

TimeChangeMap build_time_change(const SamplePath& path, const ClockDensity& clock) {
    const std::size_t n = path.steps();
    const double dt = path.grid().dt();
    Eigen::ArrayXd integral(static_cast<Eigen::Index>(n) + 1);
    integral[0] = 0.0;
    double g_left = clock.g(path.value(0));
    if (!(g_left > 0.0))
        throw std::domain_error("build_time_change: g <= 0 at path start");
    for (std::size_t i = 0; i < n; ++i) {
        const double g_right = clock.g(path.value(i + 1));
        if (!(g_right > 0.0))
            throw std::domain_error("build_time_change: g <= 0 at step " + std::to_string(i + 1));
        integral[static_cast<Eigen::Index>(i) + 1] =
            integral[static_cast<Eigen::Index>(i)] +
            0.5 * dt * (g_left * g_left + g_right * g_right);
        g_left = g_right;
    }
    return TimeChangeMap(path.grid(), std::move(integral));
}

namespace {

double interpolate_path(const SamplePath& path, double t) {
    const double pos = t / path.grid().dt();
    const auto last = static_cast<Eigen::Index>(path.steps());
    auto k = static_cast<Eigen::Index>(pos);
    if (k >= last) return path.values()[last];
    const double frac = pos - static_cast<double>(k);
    return path.values()[k] + frac * (path.values()[k + 1] - path.values()[k]);
}

}  // namespace

SamplePath apply_time_change(const SamplePath& path, const TimeChangeMap& map,
                             const TimeGrid& out_grid) {
    if (out_grid.horizon() > map.max_attained() * (1.0 + 1e-12))
        throw std::invalid_argument(
            "apply_time_change: output horizon " + std::to_string(out_grid.horizon()) +
            " exceeds max attained time " + std::to_string(map.max_attained()));
    Eigen::ArrayXd values(static_cast<Eigen::Index>(out_grid.points()));
    for (std::size_t k = 0; k < out_grid.points(); ++k) {
        const double t = (k == out_grid.steps())
                             ? std::min(out_grid.horizon(), map.max_attained())
                             : out_grid.time(k);
        values[static_cast<Eigen::Index>(k)] = interpolate_path(path, map(t));
    }
    return SamplePath(out_grid, std::move(values));
}

QvTransformReport check_qv_transform(const SamplePath& path, const TimeChangeMap& map) {
    const TimeGrid out_grid = map.sample_grid();
    const SamplePath changed = apply_time_change(path, map, out_grid);
    const SamplePath qv_changed = paths::quadratic_variation(changed);
    const SamplePath qv_source = paths::quadratic_variation(path);

    double sup_gap = 0.0;
    for (std::size_t k = 0; k < out_grid.points(); ++k) {
        const double t = (k == out_grid.steps()) ? map.max_attained() : out_grid.time(k);
        const double rhs = interpolate_path(qv_source, map(t));
        sup_gap = std::max(sup_gap,
                           std::abs(qv_changed.value(k) - rhs));
    }
    const double reference = qv_source.terminal();
    return {sup_gap, reference, sup_gap / std::max(reference, 1e-300)};
}

LocalTimeTransformReport check_localtime_transform(const SamplePath& path,
                                                   const TimeChangeMap& map, double level,
                                                   const localtime::BandConfig& band,
                                                   const TimeGrid& out_grid) {
    const SamplePath changed = apply_time_change(path, map, out_grid);
    const SamplePath lhs = localtime::band_local_time(
        changed, level, band, occupation::OccupationWeight::quadratic_variation);
    const SamplePath rhs_path = localtime::band_local_time(
        path, level, band, occupation::OccupationWeight::quadratic_variation);
    const double c_t = map(std::min(out_grid.horizon(), map.max_attained()));
    const double rhs = interpolate_path(rhs_path, c_t);
    const double lhs_terminal = lhs.terminal();
    const double denom = std::max(std::abs(rhs), 1e-300);
    return {lhs_terminal, rhs, std::abs(lhs_terminal - rhs) / denom};
}

}  // namespace ltlab::timechange
