#include "ltlab/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ltlab {

TimeGrid::TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("TimeGrid: horizon must be positive, got " +
                                    std::to_string(horizon));
    if (steps < 1) throw std::invalid_argument("TimeGrid: steps must be >= 1");
}

namespace {
void check_values(const TimeGrid& grid, const Eigen::ArrayXd& values) {
    if (static_cast<std::size_t>(values.size()) != grid.points())
        throw std::invalid_argument("SamplePath: expected " + std::to_string(grid.points()) +
                                    " values, got " + std::to_string(values.size()));
    if (!values.allFinite()) throw std::invalid_argument("SamplePath: non-finite value");
}
}  // namespace

SamplePath::SamplePath(TimeGrid grid, Eigen::ArrayXd values)
    : grid_(grid), values_(std::move(values)), driver_() {
    check_values(grid_, values_);
}

SamplePath::SamplePath(TimeGrid grid, Eigen::ArrayXd values, Eigen::ArrayXd driver_increments)
    : grid_(grid), values_(std::move(values)), driver_(std::move(driver_increments)) {
    check_values(grid_, values_);
    if (static_cast<std::size_t>(driver_.size()) != grid_.steps())
        throw std::invalid_argument("SamplePath: driver_increments length must equal steps");
}

std::size_t steps_before(const TimeGrid& grid, double upto) {
    if (upto < 0.0) throw std::invalid_argument("steps_before: negative time");
    if (upto > grid.horizon() * (1.0 + 1e-12))
        throw std::invalid_argument("steps_before: time " + std::to_string(upto) +
                                    " exceeds horizon " + std::to_string(grid.horizon()));
    // count of i in [0, steps) with i*dt < upto
    const double ratio = upto / grid.dt();
    auto k = static_cast<std::size_t>(std::ceil(ratio - 1e-9));
    return std::min(k, grid.steps());
}

}  // namespace ltlab
