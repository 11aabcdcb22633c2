#include <doctest.h>

#include <cmath>

#include "ltlab/occupation.hpp"
#include "ltlab/paths.hpp"

using namespace ltlab;
using occupation::IntervalUnion;
using occupation::OccupationWeight;

namespace {

SamplePath ramp_path(double horizon, std::size_t steps) {
    const TimeGrid grid(horizon, steps);
    Eigen::ArrayXd v(static_cast<Eigen::Index>(steps) + 1);
    for (std::size_t i = 0; i <= steps; ++i) v[static_cast<Eigen::Index>(i)] = grid.time(i);
    return SamplePath(grid, std::move(v));
}

SamplePath constant_path(double a, double horizon, std::size_t steps) {
    return SamplePath(TimeGrid(horizon, steps),
                      Eigen::ArrayXd::Constant(static_cast<Eigen::Index>(steps) + 1, a));
}

}  // namespace

TEST_CASE("interval union validation and membership") {
    CHECK_THROWS_AS(IntervalUnion({{1.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(IntervalUnion({{0.0, 2.0}, {1.0, 3.0}}), std::invalid_argument);
    const IntervalUnion u({{2.0, 3.0}, {0.0, 1.0}});  // sorted internally
    CHECK(u.contains(0.0));
    CHECK(!u.contains(1.0));  // half-open
    CHECK(u.contains(2.5));
    CHECK(!u.contains(3.0));
    CHECK(!u.contains(-0.5));
}

TEST_CASE("constant path occupation is a point mass of size t") {
    const auto path = constant_path(0.7, 1.0, 1024);
    const IntervalUnion around({{0.5, 1.0}});
    for (const double upto : {0.25, 0.5, 1.0})
        CHECK(occupation::occupation_time(path, around, OccupationWeight::lebesgue, upto) ==
              upto);
    const IntervalUnion away({{2.0, 3.0}});
    CHECK(occupation::occupation_time(path, away, OccupationWeight::lebesgue, 1.0) == 0.0);
}

TEST_CASE("ramp occupation by change of variable") {
    const auto path = ramp_path(2.0, 2048);  // dt = 2^-10
    CHECK(occupation::occupation_time(path, IntervalUnion({{0.0, 1.0}}),
                                      OccupationWeight::lebesgue, 2.0) == 1.0);
}

TEST_CASE("empty set yields zero, not an error") {
    const auto path = ramp_path(1.0, 16);
    CHECK(occupation::occupation_time(path, IntervalUnion(), OccupationWeight::lebesgue, 1.0) ==
          0.0);
}

TEST_CASE("QV-weighted occupation matches a brute-force rescan") {
    const paths::SimulationConfig config{61, 1, TimeGrid(1.0, 2048)};
    const auto path = paths::simulate_wiener_path(config, 0);
    const IntervalUnion band({{-1.0, 1.0}});
    const double got =
        occupation::occupation_time(path, band, OccupationWeight::quadratic_variation, 1.0);
    double expected = 0.0;
    for (std::size_t i = 0; i < path.steps(); ++i) {
        const double x = path.value(i);
        if (x >= -1.0 && x < 1.0) {
            const double d = path.increment(i);
            expected += d * d;
        }
    }
    CHECK(got == expected);
}

TEST_CASE("occupation is monotone in upto and bounded by it") {
    const paths::SimulationConfig config{62, 1, TimeGrid(1.0, 512)};
    const auto path = paths::simulate_wiener_path(config, 0);
    const IntervalUnion set({{-0.5, 0.5}});
    double prev = 0.0;
    for (int k = 1; k <= 8; ++k) {
        const double upto = k / 8.0;
        const double occ =
            occupation::occupation_time(path, set, OccupationWeight::lebesgue, upto);
        CHECK(occ >= prev);
        CHECK(occ <= upto);
        prev = occ;
    }
}

TEST_CASE("countable additivity at grid resolution") {
    const TimeGrid grid(1.0, 4096);  // sqrt(dt) = 2^-6: all weights exact
    const auto walk = paths::simulate_dyadic_walk({64, 1, grid}, 0);
    const IntervalUnion whole({{-0.25, 0.25}});
    const IntervalUnion left({{-0.25, 0.0}});
    const IntervalUnion right({{0.0, 0.25}});
    for (const auto weight :
         {OccupationWeight::lebesgue, OccupationWeight::quadratic_variation}) {
        const double a = occupation::occupation_time(walk, left, weight, 1.0);
        const double b = occupation::occupation_time(walk, right, weight, 1.0);
        const double both = occupation::occupation_time(walk, whole, weight, 1.0);
        CHECK(both == a + b);
    }
}

TEST_CASE("histogram totals and per-bin consistency") {
    const paths::SimulationConfig config{63, 1, TimeGrid(1.0, 1024)};
    const auto path = paths::simulate_wiener_path(config, 0);

    SUBCASE("single covering bin equals the horizon") {
        Eigen::ArrayXd edges(2);
        edges << path.values().minCoeff() - 1.0, path.values().maxCoeff() + 1.0;
        const auto mass =
            occupation::occupation_histogram(path, edges, OccupationWeight::lebesgue);
        CHECK(mass[0] == 1.0);  // 1024 * 2^-10 exactly
    }
    SUBCASE("bin masses equal per-interval occupation calls") {
        const Eigen::ArrayXd edges = Eigen::ArrayXd::LinSpaced(9, -2.0, 2.0);
        for (const auto weight :
             {OccupationWeight::lebesgue, OccupationWeight::quadratic_variation}) {
            const auto mass = occupation::occupation_histogram(path, edges, weight);
            for (Eigen::Index b = 0; b + 1 < edges.size(); ++b) {
                const double direct = occupation::occupation_time(
                    path, IntervalUnion({{edges[b], edges[b + 1]}}), weight, 1.0);
                CHECK(mass[b] == direct);
            }
        }
    }
    SUBCASE("constant path concentrates in one bin") {
        const auto flat = constant_path(0.3, 1.0, 256);
        Eigen::ArrayXd edges(4);
        edges << -1.0, 0.0, 1.0, 2.0;
        const auto mass =
            occupation::occupation_histogram(flat, edges, OccupationWeight::lebesgue);
        CHECK(mass[0] == 0.0);
        CHECK(mass[1] == 1.0);
        CHECK(mass[2] == 0.0);
    }
    SUBCASE("non-monotone edges are rejected") {
        Eigen::ArrayXd edges(3);
        edges << 0.0, 0.0, 1.0;
        CHECK_THROWS_AS(occupation::occupation_histogram(path, edges,
                                                         OccupationWeight::lebesgue),
                        std::invalid_argument);
    }
}

TEST_CASE("deterministic local time closed forms") {
    SUBCASE("unit ramp") {
        const occupation::DifferentiablePathSpec spec{[](double t) { return t; },
                                                      [](double) { return 1.0; }};
        CHECK(occupation::deterministic_local_time(spec, 0.5, 1.0) == 1.0);
    }
    SUBCASE("slope two halves the local time") {
        const occupation::DifferentiablePathSpec spec{[](double t) { return 2.0 * t; },
                                                      [](double) { return 2.0; }};
        CHECK(occupation::deterministic_local_time(spec, 0.5, 1.0) == 0.5);
    }
    SUBCASE("half-open time convention at the endpoints") {
        const occupation::DifferentiablePathSpec spec{[](double t) { return t; },
                                                      [](double) { return 1.0; }};
        CHECK(occupation::deterministic_local_time(spec, 0.0, 1.0) == 1.0);  // s = 0 counted
        CHECK(occupation::deterministic_local_time(spec, 1.0, 1.0) == 0.0);  // s = 1 excluded
    }
}

TEST_CASE("sine crossings against the band estimator") {
    const double two_pi = 2.0 * 3.14159265358979323846;
    const occupation::DifferentiablePathSpec sine{
        [two_pi](double t) { return std::sin(two_pi * t); },
        [two_pi](double t) { return two_pi * std::cos(two_pi * t); }};
    const double closed = occupation::deterministic_local_time(sine, 0.0, 1.0);
    const double target = 1.0 / 3.14159265358979323846;  // crossings at s = 0 and s = 1/2
    CHECK(std::abs(closed - target) < 1e-6);

    // dense-grid band estimate of the same quantity
    const TimeGrid grid(1.0, 1u << 15);
    Eigen::ArrayXd v(static_cast<Eigen::Index>(grid.points()));
    for (std::size_t i = 0; i < grid.points(); ++i)
        v[static_cast<Eigen::Index>(i)] = std::sin(two_pi * grid.time(i));
    const SamplePath path(grid, std::move(v));
    const double eps = 0.003;
    const double band = occupation::occupation_time(path, IntervalUnion::band(0.0, eps),
                                                    OccupationWeight::lebesgue, 1.0) /
                        (2.0 * eps);
    CHECK(std::abs(band - closed) < 0.005);
}

TEST_CASE("stationary level raises the infinite local time error") {
    // (t - 1/2)^3 crosses level 0 at t = 1/2 with zero slope
    const occupation::DifferentiablePathSpec cubic{
        [](double t) { return (t - 0.5) * (t - 0.5) * (t - 0.5); },
        [](double t) { return 3.0 * (t - 0.5) * (t - 0.5); }};
    CHECK_THROWS_AS(occupation::deterministic_local_time(cubic, 0.0, 1.0), std::domain_error);
}
