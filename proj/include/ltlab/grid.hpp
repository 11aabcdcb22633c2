#pragma once

#include <cstddef>
#include <optional>

#include <Eigen/Dense>

namespace ltlab {

// Uniform grid t_i = i * dt on [0, horizon], dt = horizon / steps.
class TimeGrid {
  public:
    TimeGrid(double horizon, std::size_t steps);

    double horizon() const { return horizon_; }
    std::size_t steps() const { return steps_; }
    std::size_t points() const { return steps_ + 1; }
    double dt() const { return horizon_ / static_cast<double>(steps_); }
    double time(std::size_t i) const { return static_cast<double>(i) * dt(); }

    bool operator==(const TimeGrid&) const = default;

  private:
    double horizon_;
    std::size_t steps_;
};

// Discretely sampled trajectory, optionally with the increments of its
// driving noise so downstream Ito sums reuse the exact same randomness.
class SamplePath {
  public:
    SamplePath(TimeGrid grid, Eigen::ArrayXd values);
    SamplePath(TimeGrid grid, Eigen::ArrayXd values, Eigen::ArrayXd driver_increments);

    const TimeGrid& grid() const { return grid_; }
    const Eigen::ArrayXd& values() const { return values_; }
    bool has_driver() const { return driver_.size() > 0; }
    const Eigen::ArrayXd& driver_increments() const { return driver_; }

    std::size_t steps() const { return grid_.steps(); }
    double value(std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
    double terminal() const { return values_[values_.size() - 1]; }
    double increment(std::size_t i) const {
        return values_[static_cast<Eigen::Index>(i) + 1] - values_[static_cast<Eigen::Index>(i)];
    }

  private:
    TimeGrid grid_;
    Eigen::ArrayXd values_;
    Eigen::ArrayXd driver_;  // empty when absent
};

// Number of grid steps whose left endpoint t_i lies strictly before `upto`.
std::size_t steps_before(const TimeGrid& grid, double upto);

}  // namespace ltlab
