#pragma once

#include <functional>

#include "ltlab/grid.hpp"
#include "ltlab/localtime.hpp"

namespace ltlab::timechange {

struct ClockDensity {
    std::function<double(double)> g;  // must be > 0 along the path
};

// C_t solving int_0^{C_t} g^2(X_s) ds = t; built from the cumulative
// trapezoid integral A on the source grid and inverted exactly on its
// piecewise-linear segments.
class TimeChangeMap {
  public:
    TimeChangeMap(TimeGrid source_grid, Eigen::ArrayXd clock_integral);

    const TimeGrid& source_grid() const { return source_grid_; }
    double max_attained() const { return clock_integral_[clock_integral_.size() - 1]; }

    // C at an arbitrary t in [0, max_attained].
    double operator()(double t) const;

    // Forward samples C(tau_j) on a uniform grid over [0, max_attained]
    // with the same step count as the source; the serialized representation.
    TimeGrid sample_grid() const;
    Eigen::ArrayXd forward_samples() const;

    // A evaluated at source time s (piecewise linear).
    double clock_integral_at(double s) const;

  private:
    TimeGrid source_grid_;
    Eigen::ArrayXd clock_integral_;  // A_k at source grid points, strictly increasing
};

TimeChangeMap build_time_change(const SamplePath& path, const ClockDensity& clock);

// X^C on out_grid by linear interpolation of the source path at times C(t_k).
// out_grid.horizon must not exceed max_attained.
SamplePath apply_time_change(const SamplePath& path, const TimeChangeMap& map,
                             const TimeGrid& out_grid);

struct QvTransformReport {
    double sup_gap;             // sup_t |QV(X^C)_t - QV(X)_{C_t}|
    double terminal_reference;  // QV(X)_{C_T}
    double relative_gap;
};

// Realized version of <X^C>_t = <X>_{C_t}, evaluated on the map's sample grid.
QvTransformReport check_qv_transform(const SamplePath& path, const TimeChangeMap& map);

struct LocalTimeTransformReport {
    double lhs_terminal;  // band L of X^C at `level` on out_grid, QV weight
    double rhs_terminal;  // band L of X at `level` evaluated at time C(T_out)
    double relative_gap;
};

// Realized version of L_t(X^C) = L_{C_t}(X); both sides use the same band.
LocalTimeTransformReport check_localtime_transform(const SamplePath& path,
                                                   const TimeChangeMap& map, double level,
                                                   const localtime::BandConfig& band,
                                                   const TimeGrid& out_grid);

}  // namespace ltlab::timechange
