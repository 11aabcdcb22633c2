#include "ltlab/occupation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ltlab::occupation {

IntervalUnion::IntervalUnion(std::vector<std::pair<double, double>> intervals)
    : intervals_(std::move(intervals)) {
    std::sort(intervals_.begin(), intervals_.end());
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        if (!(intervals_[i].first < intervals_[i].second))
            throw std::invalid_argument("IntervalUnion: interval with a >= b");
        if (i > 0 && intervals_[i].first < intervals_[i - 1].second)
            throw std::invalid_argument("IntervalUnion: overlapping intervals");
    }
}

IntervalUnion IntervalUnion::band(double center, double half_width) {
    if (!(half_width > 0.0)) throw std::invalid_argument("IntervalUnion::band: width <= 0");
    return IntervalUnion({{center - half_width, center + half_width}});
}

bool IntervalUnion::contains(double x) const {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                               [](double v, const std::pair<double, double>& iv) {
                                   return v < iv.first;
                               });
    if (it == intervals_.begin()) return false;
    --it;
    return x >= it->first && x < it->second;
}

double occupation_time(const SamplePath& path, const IntervalUnion& set, OccupationWeight weight,
                       double upto) {
    if (set.empty()) return 0.0;
    const std::size_t k_end = steps_before(path.grid(), upto);
    const double dt = path.grid().dt();
    double total = 0.0;
    for (std::size_t i = 0; i < k_end; ++i) {
        if (!set.contains(path.value(i))) continue;
        if (weight == OccupationWeight::lebesgue) {
            total += dt;
        } else {
            const double d = path.increment(i);
            total += d * d;
        }
    }
    return total;
}

Eigen::ArrayXd occupation_histogram(const SamplePath& path, const Eigen::ArrayXd& edges,
                                    OccupationWeight weight) {
    if (edges.size() < 2) throw std::invalid_argument("occupation_histogram: need >= 2 edges");
    for (Eigen::Index b = 1; b < edges.size(); ++b)
        if (!(edges[b - 1] < edges[b]))
            throw std::invalid_argument("occupation_histogram: edges must be strictly increasing");

    Eigen::ArrayXd mass = Eigen::ArrayXd::Zero(edges.size() - 1);
    const double dt = path.grid().dt();
    const double lo = edges[0];
    const double hi = edges[edges.size() - 1];
    for (std::size_t i = 0; i < path.steps(); ++i) {
        const double x = path.value(i);
        if (x < lo || x >= hi) continue;
        const auto* begin = edges.data();
        auto b = static_cast<Eigen::Index>(std::upper_bound(begin, begin + edges.size(), x) -
                                           begin) - 1;
        if (weight == OccupationWeight::lebesgue) {
            mass[b] += dt;
        } else {
            const double d = path.increment(i);
            mass[b] += d * d;
        }
    }
    return mass;
}

namespace {

// Bisection for X(s) = level inside (lo, hi) with a sign change.
double bisect_crossing(const DifferentiablePathSpec& spec, double level, double lo, double hi,
                       double tol) {
    double flo = spec.value(lo) - level;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = spec.value(mid) - level;
        if (fmid == 0.0) return mid;
        if ((flo < 0.0) != (fmid < 0.0)) {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double deterministic_local_time(const DifferentiablePathSpec& spec, double level, double upto,
                                const CrossingScan& scan) {
    if (!(upto > 0.0)) return 0.0;
    const auto n_scan = static_cast<std::size_t>(
        std::ceil(upto * scan.scan_points_per_unit_time));
    const double ds = upto / static_cast<double>(n_scan);

    // crossings located to within crossing_tolerance; the half-open time
    // convention counts s = 0 and excludes anything within tolerance of upto
    const double cutoff = upto - scan.crossing_tolerance;
    std::vector<double> crossings;
    double prev = spec.value(0.0) - level;
    if (prev == 0.0) crossings.push_back(0.0);
    for (std::size_t j = 1; j <= n_scan; ++j) {
        const double s = static_cast<double>(j) * ds;
        const double f = spec.value(s) - level;
        if (f == 0.0) {
            if (s < cutoff) crossings.push_back(s);
        } else if ((prev < 0.0) != (f < 0.0) && prev != 0.0) {
            const double s_star =
                bisect_crossing(spec, level, s - ds, s, scan.crossing_tolerance);
            if (s_star < cutoff) crossings.push_back(s_star);
        }
        prev = f;
    }

    double total = 0.0;
    for (double s_star : crossings) {
        const double slope = std::abs(spec.derivative(s_star));
        if (slope < scan.stationary_tolerance)
            throw std::domain_error(
                "deterministic_local_time: stationary level at s = " + std::to_string(s_star) +
                " (|X'| = " + std::to_string(slope) + "), local time is infinite");
        total += 1.0 / slope;
    }
    return total;
}

}  // namespace ltlab::occupation
