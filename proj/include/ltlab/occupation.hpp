#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "ltlab/grid.hpp"

namespace ltlab::occupation {

// Finite union of disjoint half-open intervals [a, b), sorted.
class IntervalUnion {
  public:
    IntervalUnion() = default;
    explicit IntervalUnion(std::vector<std::pair<double, double>> intervals);

    static IntervalUnion band(double center, double half_width);

    const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }
    bool contains(double x) const;
    bool empty() const { return intervals_.empty(); }

  private:
    std::vector<std::pair<double, double>> intervals_;
};

enum class OccupationWeight { lebesgue, quadratic_variation };

// Sum of step weights over grid steps before `upto` whose left endpoint lies
// in `set`; weight is dt (lebesgue) or the squared path increment.
double occupation_time(const SamplePath& path, const IntervalUnion& set, OccupationWeight weight,
                       double upto);

// One mass per bin [edge_b, edge_{b+1}); left-endpoint evaluation as above.
Eigen::ArrayXd occupation_histogram(const SamplePath& path, const Eigen::ArrayXd& edges,
                                    OccupationWeight weight);

struct DifferentiablePathSpec {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
};

struct CrossingScan {
    double crossing_tolerance = 1e-10;   // bisection width for the crossing time
    double stationary_tolerance = 1e-8;  // |X'| below this is a stationary level
    double scan_points_per_unit_time = 1e4;
};

// Local time of a differentiable path with discrete level sets:
// sum of 1/|X'(s*)| over crossings X(s*) = level located in [0, upto).
// Throws when a crossing has |X'| below the stationary tolerance.
double deterministic_local_time(const DifferentiablePathSpec& spec, double level, double upto,
                                const CrossingScan& scan = {});

}  // namespace ltlab::occupation
