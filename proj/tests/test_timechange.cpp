#include <doctest.h>

#include <cmath>

#include "ltlab/localtime.hpp"
#include "ltlab/paths.hpp"
#include "ltlab/timechange.hpp"
#include "ltlab/verify.hpp"

using namespace ltlab;
using localtime::BandConfig;
using paths::SimulationConfig;
using timechange::ClockDensity;

TEST_CASE("identity clock gives the identity map") {
    const SimulationConfig config{81, 1, TimeGrid(1.0, 1024)};
    const auto w = paths::simulate_wiener_path(config, 0);
    const auto map = timechange::build_time_change(w, {[](double) { return 1.0; }});
    CHECK(map.max_attained() == doctest::Approx(1.0).epsilon(1e-12));
    for (const double t : {0.0, 0.25, 0.7, map.max_attained()})
        CHECK(map(t) == doctest::Approx(t).epsilon(1e-12));
    const auto resampled = timechange::apply_time_change(w, map, w.grid());
    CHECK((resampled.values() - w.values()).abs().maxCoeff() < 1e-9);
}

TEST_CASE("constant clock scales time by g^2") {
    const SimulationConfig config{82, 1, TimeGrid(0.5, 1u << 12)};
    const auto w = paths::simulate_wiener_path(config, 0);
    const auto map = timechange::build_time_change(w, {[](double) { return 2.0; }});
    CHECK(map.max_attained() == doctest::Approx(2.0).epsilon(1e-12));
    for (const double t : {0.1, 1.0, 1.9})
        CHECK(map(t) == doctest::Approx(t / 4.0).epsilon(1e-12));

    SUBCASE("round trip within interpolation round-off") {
        for (const double t : {0.05, 0.6, 1.4, 1.95})
            CHECK(map.clock_integral_at(map(t)) == doctest::Approx(t).epsilon(1e-10));
    }
    SUBCASE("horizon overrun names the attained bound") {
        CHECK_THROWS_WITH_AS(
            timechange::apply_time_change(w, map, TimeGrid(3.0, 64)),
            doctest::Contains("max attained"), std::invalid_argument);
    }
}

TEST_CASE("nonpositive clock density is rejected") {
    const TimeGrid grid(1.0, 64);
    Eigen::ArrayXd v(65);
    for (std::size_t i = 0; i <= 64; ++i)
        v[static_cast<Eigen::Index>(i)] = grid.time(i) - 0.5;  // crosses zero
    const SamplePath path(grid, v);
    CHECK_THROWS_AS(timechange::build_time_change(path, {[](double x) { return x; }}),
                    std::domain_error);
}

TEST_CASE("composition with a monotone map preserves monotonicity") {
    const TimeGrid grid(1.0, 512);
    Eigen::ArrayXd v(513);
    for (std::size_t i = 0; i <= 512; ++i) v[static_cast<Eigen::Index>(i)] = grid.time(i);
    const SamplePath ramp(grid, v);
    const auto map =
        timechange::build_time_change(ramp, {[](double x) { return 1.0 + x * x; }});
    const TimeGrid out(map.max_attained() * 0.999, 256);
    const auto changed = timechange::apply_time_change(ramp, map, out);
    for (std::size_t i = 0; i < changed.steps(); ++i)
        CHECK(changed.value(i + 1) >= changed.value(i));
}

TEST_CASE("DDS standardization: scaled wiener passes the wiener check") {
    // X = sigma W with clock g = sigma; exact landing grids keep the
    // subsampled increments genuinely Brownian
    for (const double sigma : {2.0, 0.5}) {
        const double source_horizon = sigma == 2.0 ? 0.5 : 4.0;
        const std::size_t source_steps = sigma == 2.0 ? (1u << 13) : (1u << 15);
        const SimulationConfig config{83, 2000, TimeGrid(source_horizon, source_steps)};
        const paths::ItoCoefficients coeffs{[](double) { return 0.0; },
                                            [sigma](double) { return sigma; }, 0.0};
        const TimeGrid out(1.0, 1u << 10);
        const auto report = verify::check_standard_wiener(
            [&](std::size_t r) {
                const auto x = paths::simulate_ito_path(coeffs, config, r);
                const auto map =
                    timechange::build_time_change(x, {[sigma](double) { return sigma; }});
                return timechange::apply_time_change(x, map, out);
            },
            config.replicates, config.seed);
        CHECK(report.pass());
    }
}

TEST_CASE("quadratic variation transforms along the clock") {
    SUBCASE("identity map: resampling noise only") {
        const SimulationConfig config{84, 1, TimeGrid(1.0, 1u << 13)};
        const auto w = paths::simulate_wiener_path(config, 0);
        const auto map = timechange::build_time_change(w, {[](double) { return 1.0; }});
        const auto gap = timechange::check_qv_transform(w, map);
        CHECK(gap.relative_gap < 1e-6);
    }
    SUBCASE("g = 2 on a wiener path: <X^C>_1 is 1/4") {
        const SimulationConfig config{85, 4, TimeGrid(0.5, 1u << 15)};
        double qv_mean = 0.0;
        double max_gap = 0.0;
        const TimeGrid out(1.0, 1u << 13);
        for (std::size_t r = 0; r < 4; ++r) {
            const auto w = paths::simulate_wiener_path(config, r);
            const auto map = timechange::build_time_change(w, {[](double) { return 2.0; }});
            max_gap = std::max(max_gap, timechange::check_qv_transform(w, map).relative_gap);
            qv_mean += paths::quadratic_variation(
                           timechange::apply_time_change(w, map, out))
                           .terminal();
        }
        qv_mean /= 4.0;
        CHECK(max_gap < 0.05);
        CHECK(std::abs(qv_mean / 0.25 - 1.0) < 0.05);
    }
    SUBCASE("smooth path: both sides are near zero") {
        const TimeGrid grid(1.0, 4096);
        Eigen::ArrayXd v(4097);
        for (std::size_t i = 0; i <= 4096; ++i)
            v[static_cast<Eigen::Index>(i)] = std::sin(grid.time(i));
        const SamplePath path(grid, v);
        const auto map = timechange::build_time_change(path, {[](double) { return 1.0; }});
        const auto gap = timechange::check_qv_transform(path, map);
        CHECK(gap.sup_gap < 1e-6);
    }
}

TEST_CASE("local time transforms along the clock") {
    SUBCASE("identity map gap is resampling noise") {
        const SimulationConfig config{86, 1, TimeGrid(1.0, 1u << 14)};
        const auto w = paths::simulate_wiener_path(config, 0);
        const auto map = timechange::build_time_change(w, {[](double) { return 1.0; }});
        const auto rep = timechange::check_localtime_transform(
            w, map, 0.0, BandConfig{localtime::default_bandwidth(w.grid())}, w.grid());
        CHECK(rep.relative_gap < 0.02);
    }
    SUBCASE("scaled wiener with g = 2, ensemble means agree within 10%") {
        const SimulationConfig config{87, 800, TimeGrid(0.5, 1u << 13)};
        const paths::ItoCoefficients coeffs{[](double) { return 0.0; },
                                            [](double) { return 2.0; }, 0.0};
        const TimeGrid out(1.0, 1u << 10);
        const BandConfig band{localtime::default_bandwidth(out)};
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t r = 0; r < config.replicates; ++r) {
            const auto x = paths::simulate_ito_path(coeffs, config, r);
            const auto map = timechange::build_time_change(x, {[](double) { return 2.0; }});
            const auto rep = timechange::check_localtime_transform(x, map, 0.0, band, out);
            lhs += rep.lhs_terminal;
            rhs += rep.rhs_terminal;
        }
        CHECK(std::abs(lhs / rhs - 1.0) < 0.10);
    }
    SUBCASE("level far outside the range gives zero on both sides") {
        const SimulationConfig config{88, 1, TimeGrid(1.0, 1024)};
        const auto w = paths::simulate_wiener_path(config, 0);
        const auto map = timechange::build_time_change(w, {[](double) { return 1.0; }});
        const auto rep = timechange::check_localtime_transform(
            w, map, 50.0, BandConfig{0.05}, w.grid());
        CHECK(rep.lhs_terminal == 0.0);
        CHECK(rep.rhs_terminal == 0.0);
    }
}

TEST_CASE("scaled integrals from a wiener source via the reciprocal clock") {
    // W-bar with clock 1/sigma realizes int sigma dW: the changed path must
    // carry quadratic variation sigma^2 t and terminal law N(0, sigma^2 T)
    const double sigma = 2.0;
    const SimulationConfig config{90, 1500, TimeGrid(4.0, 1u << 14)};
    const TimeGrid out(1.0, 1u << 10);
    double qv_mean = 0.0;
    Eigen::ArrayXd terminals(1500);
    for (std::size_t r = 0; r < config.replicates; ++r) {
        const auto w = paths::simulate_wiener_path(config, r);
        const auto map =
            timechange::build_time_change(w, {[sigma](double) { return 1.0 / sigma; }});
        const auto changed = timechange::apply_time_change(w, map, out);
        qv_mean += paths::quadratic_variation(changed).terminal();
        terminals[static_cast<Eigen::Index>(r)] = changed.terminal();
    }
    qv_mean /= static_cast<double>(config.replicates);
    CHECK(std::abs(qv_mean / (sigma * sigma) - 1.0) < 0.05);
    const auto ks = verify::ks_one_sample(
        verify::EmpiricalDistribution::from_samples(std::move(terminals)),
        [sigma](double x) { return verify::normal_cdf(x, sigma); }, 0.01, 2.0);
    CHECK(ks.pass);
}

TEST_CASE("time-changed OU drift follows mu / g^2") {
    const std::size_t n_rep = 400;
    const SimulationConfig config{89, n_rep, TimeGrid(1.0, 1u << 13)};
    const paths::ItoCoefficients ou{[](double x) { return -x; },
                                    [](double) { return 1.0; }, 0.0};
    const TimeGrid out(4.0, 1u << 13);
    double sum_ydy = 0.0, sum_yy = 0.0;
    for (std::size_t r = 0; r < n_rep; ++r) {
        const auto x = paths::simulate_ito_path(ou, config, r);
        const auto map = timechange::build_time_change(x, {[](double) { return 2.0; }});
        const auto y = timechange::apply_time_change(x, map, out);
        for (std::size_t i = 0; i < y.steps(); ++i) {
            sum_ydy += y.value(i) * y.increment(i);
            sum_yy += y.value(i) * y.value(i);
        }
    }
    const double slope = sum_ydy / (sum_yy * out.dt());
    const double se = 0.5 / std::sqrt(sum_yy * out.dt());
    CHECK(std::abs(slope + 0.25) < 3.0 * se);
}
