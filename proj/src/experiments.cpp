#include "ltlab/experiments.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "ltlab/convexcalc.hpp"
#include "ltlab/csv.hpp"
#include "ltlab/localtime.hpp"
#include "ltlab/occupation.hpp"
#include "ltlab/parallel.hpp"
#include "ltlab/reflection.hpp"
#include "ltlab/rng.hpp"
#include "ltlab/timechange.hpp"

namespace ltlab::experiments {

using localtime::BandConfig;
using occupation::OccupationWeight;
using paths::SimulationConfig;
using verify::CheckLine;
using verify::CheckReport;

namespace {

constexpr double kSqrt2OverPi = 0.79788456080286536;

CheckLine line(std::string name, double statistic, double threshold, std::size_t n,
               std::uint64_t seed) {
    return {std::move(name), statistic, threshold, statistic <= threshold, n, seed};
}

std::string fmt(double v) { return csv::format(v); }

double resolved_epsilon(const ExperimentConfig& config) {
    const TimeGrid grid(config.horizon, config.steps);
    return config.epsilon > 0.0 ? config.epsilon : localtime::default_bandwidth(grid);
}

void maybe_write(const std::filesystem::path& out_dir, const std::string& file,
                 const std::function<void(std::ostream&)>& writer) {
    if (out_dir.empty()) return;
    std::ofstream out(out_dir / file, std::ios::trunc);
    writer(out);
}

// config-supplied level grid when x_step is set, the fallback otherwise
Eigen::ArrayXd level_grid(const ExperimentConfig& config, double lo, double hi, double step) {
    if (config.x_step > 0.0) {
        lo = config.x_min;
        hi = config.x_max;
        step = config.x_step;
    }
    const auto nx = static_cast<Eigen::Index>(std::floor((hi - lo) / step + 1e-9)) + 1;
    Eigen::ArrayXd grid(nx);
    for (Eigen::Index j = 0; j < nx; ++j) grid[j] = lo + static_cast<double>(j) * step;
    return grid;
}

// ---------------------------------------------------------------- criterion 1

// Exact expectation of the discrete left-endpoint band estimator at level 0,
// E = (dt / 2 eps) * sum_i erf(eps / sqrt(2 t_i)); the independent oracle the
// measured ensemble mean is reported against.
double band_estimator_expectation(const TimeGrid& grid, double eps) {
    const double a = eps / std::sqrt(2.0);
    double sum = 1.0;  // t_0 = 0 term
    for (std::size_t i = 1; i < grid.steps(); ++i)
        sum += std::erf(a / std::sqrt(grid.time(i)));
    return sum * grid.dt() / (2.0 * eps);
}

ExperimentResult run_expected_localtime(const ExperimentConfig& config,
                                        const std::filesystem::path& out_dir) {
    const TimeGrid grid(config.horizon, config.steps);
    const double eps = resolved_epsilon(config);
    const BandConfig band{eps};
    const SimulationConfig sim{config.seed, config.replicates, grid};
    const std::vector<double> levels = {0.0, 0.5, 1.0};

    const Eigen::ArrayXd sums = parallel::reduce_sum(
        config.replicates, static_cast<Eigen::Index>(2 * levels.size()), [&](std::size_t r) {
            const SamplePath path = paths::simulate_wiener_path(sim, r);
            Eigen::ArrayXd acc(2 * levels.size());
            for (std::size_t j = 0; j < levels.size(); ++j) {
                const double value = localtime::band_local_time(path, levels[j], band,
                                                                OccupationWeight::lebesgue)
                                         .terminal();
                acc[static_cast<Eigen::Index>(2 * j)] = value;
                acc[static_cast<Eigen::Index>(2 * j + 1)] = value * value;
            }
            return acc;
        });

    const double n = static_cast<double>(config.replicates);
    ExperimentResult result;
    result.report.check = "expected_localtime";
    Eigen::ArrayXd means(levels.size()), errs(levels.size()), targets(levels.size());
    for (std::size_t j = 0; j < levels.size(); ++j) {
        const double mean = sums[static_cast<Eigen::Index>(2 * j)] / n;
        const double var =
            (sums[static_cast<Eigen::Index>(2 * j + 1)] - n * mean * mean) / (n - 1.0);
        means[static_cast<Eigen::Index>(j)] = mean;
        errs[static_cast<Eigen::Index>(j)] = std::sqrt(var / n);
        targets[static_cast<Eigen::Index>(j)] =
            localtime::expected_local_time_gaussian(grid.horizon(), levels[j]);
        std::ostringstream name;
        name << "band_mean_relative_error_x" << levels[j];
        result.report.lines.push_back(line(name.str(),
                                           std::abs(mean / targets[static_cast<Eigen::Index>(j)] -
                                                    1.0),
                                           0.02, config.replicates, config.seed));
    }

    const double oracle = band_estimator_expectation(grid, eps);
    result.extras = {
        {"band_mean_x0", fmt(means[0])},
        {"band_mean_x0_stderr", fmt(errs[0])},
        {"target_sqrt_2_over_pi", fmt(kSqrt2OverPi)},
        {"discrete_estimator_expectation_x0", fmt(oracle)},
        {"kink_bias_note",
         "E[L_1^y] has slope -1 at y = 0, so the band average is biased by -epsilon/2 = " +
             fmt(-eps / 2.0) + " at the pinned bandwidth"},
        {"epsilon", fmt(eps)},
    };
    maybe_write(out_dir, "ensemble_summary.csv", [&](std::ostream& out) {
        Eigen::ArrayXd xs(levels.size());
        for (std::size_t j = 0; j < levels.size(); ++j)
            xs[static_cast<Eigen::Index>(j)] = levels[j];
        csv::write_ensemble_summary(out, xs, means, errs, config.replicates);
    });
    return result;
}

// ---------------------------------------------------------------- criteria 2, 3

ExperimentResult run_localtime_maximum(const ExperimentConfig& config,
                                       const std::filesystem::path& out_dir) {
    const TimeGrid grid(config.horizon, config.steps);
    const SimulationConfig sim{config.seed, config.replicates, grid};
    const CheckReport check = verify::check_localtime_maximum_identity(sim);

    ExperimentResult result;
    result.report.check = "localtime_maximum";
    result.report.lines = check.lines;
    // pinned acceptance gate alongside the alpha-derived thresholds
    result.report.lines.push_back(line("criterion_two_sample_ks", check.lines[0].statistic, 0.03,
                                       config.replicates, config.seed));
    maybe_write(out_dir, "report.csv",
                [&](std::ostream& out) { csv::write_report(out, check); });
    maybe_write(out_dir, "sample_path.csv", [&](std::ostream& out) {
        csv::write_path(out, paths::simulate_wiener_path(sim, 0));
    });
    return result;
}

ExperimentResult run_joint_identity(const ExperimentConfig& config,
                                    const std::filesystem::path& out_dir) {
    const TimeGrid grid(config.horizon, config.steps);
    const SimulationConfig sim{config.seed, config.replicates, grid};
    const CheckReport check = verify::check_joint_identity(sim);

    ExperimentResult result;
    result.report.check = "joint_identity";
    result.report.lines = check.lines;
    result.report.lines.push_back(line("criterion_marginal1_ks", check.lines[0].statistic, 0.03,
                                       config.replicates, config.seed));
    result.report.lines.push_back(line("criterion_marginal2_ks", check.lines[1].statistic, 0.03,
                                       config.replicates, config.seed));
    maybe_write(out_dir, "report.csv",
                [&](std::ostream& out) { csv::write_report(out, check); });
    return result;
}

// ---------------------------------------------------------------- criterion 4

ExperimentResult run_abs_w_factor2(const ExperimentConfig& config,
                                   const std::filesystem::path& out_dir) {
    const TimeGrid grid(config.horizon, config.steps);
    const SimulationConfig sim{config.seed, config.replicates, grid};
    const BandConfig band{resolved_epsilon(config)};
    const CheckReport check = verify::check_abs_w_localtime(sim, band);
    ExperimentResult result;
    result.report.check = "abs_w_factor2";
    result.report.lines = check.lines;
    result.extras = {{"epsilon", fmt(band.epsilon)},
                     {"crossing_deficit_note",
                      "path-increment QV weights undercount reflected movement by "
                      "~0.53 sqrt(dt)/epsilon; the band is widened accordingly"}};
    maybe_write(out_dir, "report.csv",
                [&](std::ostream& out) { csv::write_report(out, check); });
    return result;
}

// ---------------------------------------------------------------- criterion 5

ExperimentResult run_occupation_density(const ExperimentConfig& config,
                                        const std::filesystem::path& out_dir) {
    const TimeGrid grid(config.horizon, config.steps);
    const SimulationConfig sim{config.seed, config.replicates, grid};
    const BandConfig band{resolved_epsilon(config)};

    double max_gap_one = 0.0, max_gap_bump = 0.0, max_indicator = 0.0;
    for (std::size_t r = 0; r < config.replicates; ++r) {
        const SamplePath path = paths::simulate_wiener_path(sim, r);
        max_gap_one = std::max(
            max_gap_one,
            verify::occupation_density_identity(path, "constant-one", band).relative_gap);
        max_gap_bump = std::max(
            max_gap_bump,
            verify::occupation_density_identity(path, "gaussian-bump", band).relative_gap);
        // indicator f: the weighted-occupation side is the occupation_time call itself
        const auto gap = verify::occupation_density_identity(path, "indicator-interval", band);
        const double direct = occupation::occupation_time(
            path, occupation::IntervalUnion({{0.0, 1.0}}),
            OccupationWeight::quadratic_variation, grid.horizon());
        max_indicator = std::max(max_indicator, std::abs(gap.lhs - direct));
    }

    ExperimentResult result;
    result.report.check = "occupation_density";
    result.report.lines.push_back(line("constant_one_max_gap", max_gap_one, 0.02,
                                       config.replicates, config.seed));
    result.report.lines.push_back(line("gaussian_bump_max_gap", max_gap_bump, 0.02,
                                       config.replicates, config.seed));
    result.report.lines.push_back(line("indicator_matches_occupation_time", max_indicator, 0.0,
                                       config.replicates, config.seed));
    maybe_write(out_dir, "histogram.csv", [&](std::ostream& out) {
        const SamplePath path = paths::simulate_wiener_path(sim, 0);
        const double lo = path.values().minCoeff(), hi = path.values().maxCoeff() + 1e-9;
        const Eigen::ArrayXd edges = level_grid(config, lo, hi, (hi - lo) / 40.0);
        csv::write_histogram(out, edges,
                             occupation::occupation_histogram(path, edges,
                                                              OccupationWeight::lebesgue));
    });
    return result;
}

// ---------------------------------------------------------------- criterion 6

// Lebesgue-weighted field: the local-time route measures occupation time, so
// the residual pits the realized QV against the occupation clock instead of
// cancelling against itself, and shrinks like sqrt(dt).
double square_residual_median(std::uint64_t seed, std::size_t steps, std::size_t replicates) {
    const TimeGrid grid(1.0, steps);
    const SimulationConfig sim{seed, replicates, grid};
    const BandConfig band{localtime::default_bandwidth(grid)};
    const double spacing = band.epsilon / 2.0;
    const auto square =
        convexcalc::make_combo(convexcalc::smooth_density("constant", 2.0), {}, 0.0, 0.0, 0.0);

    Eigen::ArrayXd residuals = parallel::collect(replicates, [&](std::size_t r) {
        const SamplePath path = paths::simulate_wiener_path(sim, r);
        const double lo = path.values().minCoeff() - band.epsilon - spacing;
        const double hi = path.values().maxCoeff() + band.epsilon + spacing;
        const auto nx = static_cast<Eigen::Index>(std::ceil((hi - lo) / spacing)) + 1;
        Eigen::ArrayXd x_grid(nx);
        for (Eigen::Index j = 0; j < nx; ++j)
            x_grid[j] = lo + static_cast<double>(j) * spacing;
        const auto field =
            localtime::local_time_field(path, x_grid, band, OccupationWeight::lebesgue);
        const SamplePath residual = convexcalc::ito_tanaka_residual(path, square, field);
        return std::abs(residual.terminal());
    });
    std::sort(residuals.data(), residuals.data() + residuals.size());
    return residuals[residuals.size() / 2];
}

ExperimentResult run_ito_tanaka_square(const ExperimentConfig& config,
                                       const std::filesystem::path& out_dir) {
    const double median_base =
        square_residual_median(config.seed, config.steps, config.replicates);
    const double median_fine =
        square_residual_median(rng::derive_seed(config.seed, 7), config.steps * 2,
                               config.replicates);

    // linear f on a dyadic walk: every term exactly representable, residual 0
    const TimeGrid dyadic_grid(1.0, 1u << 12);  // sqrt(dt) = 2^-6
    const SimulationConfig dyadic_sim{config.seed, 1, dyadic_grid};
    const SamplePath walk = paths::simulate_dyadic_walk(dyadic_sim, 0);
    const auto linear =
        convexcalc::make_combo(convexcalc::smooth_density("zero", 0.0), {}, 0.0, 0.0, 0.5);
    Eigen::ArrayXd tiny_grid(2);
    tiny_grid << walk.values().minCoeff() - 1.0, walk.values().maxCoeff() + 1.0;
    const auto tiny_field = localtime::local_time_field(
        walk, tiny_grid, BandConfig{localtime::default_bandwidth(dyadic_grid)},
        OccupationWeight::quadratic_variation);
    const SamplePath linear_residual = convexcalc::ito_tanaka_residual(walk, linear, tiny_field);
    const double linear_sup = linear_residual.values().abs().maxCoeff();

    ExperimentResult result;
    result.report.check = "ito_tanaka_square";
    result.report.lines.push_back(line("terminal_residual_median", median_base, 0.05,
                                       config.replicates, config.seed));
    result.report.lines.push_back(line("median_ratio_fine_over_base", median_fine / median_base,
                                       1.0, config.replicates, config.seed));
    result.report.lines.push_back(line("linear_residual_sup", linear_sup, 0.0, 1, config.seed));
    result.extras = {{"median_dt_base", fmt(median_base)}, {"median_dt_halved", fmt(median_fine)}};
    maybe_write(out_dir, "residual_path.csv", [&](std::ostream& out) {
        csv::write_path(out, linear_residual);
    });
    return result;
}

// ---------------------------------------------------------------- criterion 7

ExperimentResult run_skorohod_minimality(const ExperimentConfig& config,
                                         const std::filesystem::path& out_dir) {
    std::size_t oracle_mismatches = 0;
    std::size_t minimality_violations = 0;
    std::size_t idempotence_failures = 0;
    std::size_t feasible_candidates = 0;

    for (std::size_t trial = 0; trial < config.replicates; ++trial) {
        const std::size_t n = 2 + trial % 19;  // grid sizes 2..20
        const TimeGrid grid(1.0, n);
        rng::GaussianStream noise(config.seed, trial);
        Eigen::ArrayXd x(static_cast<Eigen::Index>(n) + 1);
        x[0] = 0.0;
        for (std::size_t i = 1; i <= n; ++i)
            x[static_cast<Eigen::Index>(i)] =
                x[static_cast<Eigen::Index>(i) - 1] + noise.next();
        const SamplePath path(grid, x);
        const auto pair = reflection::skorohod_map(path);

        // O(n^2) rescan oracle for the minimal regulator
        for (std::size_t i = 0; i <= n; ++i) {
            double best = 0.0;
            for (std::size_t j = 0; j <= i; ++j)
                best = std::max(best, -x[static_cast<Eigen::Index>(j)]);
            if (pair.f.value(i) != best) ++oracle_mismatches;
        }

        // randomized nondecreasing candidates: feasibility must imply g >= f
        for (int candidate = 0; candidate < 6; ++candidate) {
            Eigen::ArrayXd g(static_cast<Eigen::Index>(n) + 1);
            g[0] = 0.0;
            const bool shifted = candidate >= 3;  // guaranteed-feasible variants
            for (std::size_t i = 1; i <= n; ++i) {
                const double bump = std::abs(noise.next()) * 0.5;
                g[static_cast<Eigen::Index>(i)] = g[static_cast<Eigen::Index>(i) - 1] + bump;
            }
            if (shifted) g += pair.f.values();
            bool feasible = true;
            for (std::size_t i = 0; i <= n && feasible; ++i)
                if (x[static_cast<Eigen::Index>(i)] + g[static_cast<Eigen::Index>(i)] < 0.0)
                    feasible = false;
            if (!feasible) continue;
            ++feasible_candidates;
            for (std::size_t i = 0; i <= n; ++i)
                if (g[static_cast<Eigen::Index>(i)] < pair.f.value(i)) ++minimality_violations;
        }

        const auto again = reflection::skorohod_map(pair.z);
        if (again.f.values().abs().maxCoeff() != 0.0) ++idempotence_failures;
        if ((again.z.values() != pair.z.values()).any()) ++idempotence_failures;
    }

    // complementarity on a Wiener-driven pair at simulation scale
    const TimeGrid grid(config.horizon, config.steps);
    const SimulationConfig sim{config.seed, 1, grid};
    const SamplePath wiener = paths::simulate_wiener_path(sim, 0);
    const auto pair = reflection::skorohod_map(wiener);
    double max_step = 0.0;
    for (std::size_t i = 0; i < wiener.steps(); ++i)
        max_step = std::max(max_step, std::abs(wiener.increment(i)));
    const double tol = 2.0 * max_step / pair.z.values().maxCoeff();
    const auto skorohod_report = reflection::verify_skorohod(pair, tol);

    ExperimentResult result;
    result.report.check = "skorohod_minimality";
    result.report.lines.push_back(line("oracle_mismatches",
                                       static_cast<double>(oracle_mismatches), 0.0,
                                       config.replicates, config.seed));
    result.report.lines.push_back(line("minimality_violations",
                                       static_cast<double>(minimality_violations), 0.0,
                                       config.replicates, config.seed));
    result.report.lines.push_back(line("idempotence_failures",
                                       static_cast<double>(idempotence_failures), 0.0,
                                       config.replicates, config.seed));
    result.report.lines.push_back(line("wiener_pair_verifies",
                                       skorohod_report.pass() ? 0.0 : 1.0, 0.0, 1, config.seed));
    result.extras = {{"feasible_candidates", std::to_string(feasible_candidates)},
                     {"complementarity_sum", fmt(skorohod_report.complementarity_sum)},
                     {"complementarity_bound", fmt(skorohod_report.complementarity_bound)}};
    maybe_write(out_dir, "reflected_pair.csv",
                [&](std::ostream& out) { csv::write_reflected(out, pair); });
    return result;
}

// ---------------------------------------------------------------- criterion 8

ExperimentResult run_regulated_unit(const ExperimentConfig& config,
                                    const std::filesystem::path& out_dir) {
    const TimeGrid grid(config.horizon, config.steps);
    const SimulationConfig sim{config.seed, config.replicates, grid};
    const BandConfig band{resolved_epsilon(config)};
    const double root_t = std::sqrt(grid.horizon());
    const reflection::RegulatedSdeSpec spec{
        {coefficient(config.drift, config.drift_constant),
         coefficient(config.diffusion, config.diffusion_constant), 0.0},
        std::nullopt};

    Eigen::ArrayXd z_terminals(static_cast<Eigen::Index>(config.replicates));
    Eigen::ArrayXd f_terminals(static_cast<Eigen::Index>(config.replicates));
    const std::size_t n_blocks =
        (config.replicates + parallel::default_block - 1) / parallel::default_block;
    std::vector<Eigen::Array2d> partial(n_blocks, Eigen::Array2d::Zero());
    parallel::for_each_block(
        config.replicates, parallel::default_block,
        [&](std::size_t b, std::size_t lo, std::size_t hi) {
            Eigen::Array2d acc = Eigen::Array2d::Zero();
            for (std::size_t r = lo; r < hi; ++r) {
                const auto pair = reflection::simulate_regulated_sde_path(spec, sim, r);
                z_terminals[static_cast<Eigen::Index>(r)] = pair.z.terminal();
                f_terminals[static_cast<Eigen::Index>(r)] = pair.f.terminal();
                const auto gap = reflection::regulator_vs_localtime(pair, band);
                acc[0] += gap.regulator_terminal;
                acc[1] += gap.halfband_terminal;
            }
            partial[b] = acc;
        });
    Eigen::Array2d sums = Eigen::Array2d::Zero();
    for (const auto& p : partial) sums += p;
    const double mean_gap = std::abs(sums[0] - sums[1]) / std::abs(sums[0]);

    const auto z_dist = verify::EmpiricalDistribution::from_samples(std::move(z_terminals));
    const auto f_dist = verify::EmpiricalDistribution::from_samples(std::move(f_terminals));
    const auto folded = [root_t](double v) { return verify::folded_normal_cdf(v, root_t); };
    const auto ks_z = verify::ks_one_sample(z_dist, folded, 0.01, 2.0);
    const auto ks_f = verify::ks_one_sample(f_dist, folded, 0.01, 2.0);

    ExperimentResult result;
    result.report.check = "regulated_unit";
    result.report.lines.push_back(
        line("z_folded_normal_ks", ks_z.statistic, 0.03, config.replicates, config.seed));
    result.report.lines.push_back(
        line("f_half_normal_ks", ks_f.statistic, 0.03, config.replicates, config.seed));
    result.report.lines.push_back(line("regulator_vs_localtime_mean_gap", mean_gap, 0.10,
                                       config.replicates, config.seed));

    // every pair satisfies the Skorohod properties by construction; spot-check one
    const auto pair = reflection::simulate_regulated_sde_path(spec, sim, 0);
    double max_step = 0.0;
    for (std::size_t i = 0; i < pair.x.steps(); ++i)
        max_step = std::max(max_step, std::abs(pair.x.increment(i)));
    const double z_max = pair.z.values().maxCoeff();
    const auto skorohod_report = reflection::verify_skorohod(
        pair, z_max > 0.0 ? 2.0 * max_step / z_max : 0.0);
    result.report.lines.push_back(line("pair_verifies_skorohod",
                                       skorohod_report.pass() ? 0.0 : 1.0, 0.0, 1, config.seed));

    // deterministic pushing: sigma = 0, mu = -1 gives Z = 0 and F_t = t exactly
    {
        const TimeGrid small(1.0, 1u << 10);
        const reflection::RegulatedSdeSpec pushing{
            {coefficient("constant", -1.0), coefficient("constant", 0.0), 0.0}, std::nullopt};
        const auto det = reflection::simulate_regulated_sde_path(pushing,
                                                                 {config.seed, 1, small}, 0);
        double max_dev = det.z.values().abs().maxCoeff();
        for (std::size_t i = 0; i <= small.steps(); ++i)
            max_dev = std::max(max_dev, std::abs(det.f.value(i) - small.time(i)));
        result.report.lines.push_back(line("deterministic_pushing_exact", max_dev, 0.0, 1,
                                           config.seed));
        const auto degenerate = reflection::regulator_vs_localtime(det, band);
        result.extras.push_back({"degenerate_weight_gap", fmt(degenerate.relative_gap)});
        result.extras.push_back(
            {"degenerate_weight_note",
             "sigma = 0 pushing keeps F_t = t while the QV-weighted band estimate is ~0; the "
             "F = L identification presumes a nondegenerate diffusion"});
    }
    result.extras.push_back({"epsilon", fmt(band.epsilon)});
    result.extras.push_back({"mean_F", fmt(sums[0] / static_cast<double>(config.replicates))});
    result.extras.push_back(
        {"mean_halfband", fmt(sums[1] / static_cast<double>(config.replicates))});
    maybe_write(out_dir, "reflected_pair.csv",
                [&](std::ostream& out) { csv::write_reflected(out, pair); });
    return result;
}

// ---------------------------------------------------------------- criterion 9

struct StandardizationCase {
    double sigma;
    double source_horizon;
    std::size_t source_steps;
};

ExperimentResult run_timechange_standardize(const ExperimentConfig& config,
                                            const std::filesystem::path& out_dir) {
    ExperimentResult result;
    result.report.check = "timechange_standardize";

    const TimeGrid out_grid(1.0, 1u << 12);
    const std::vector<StandardizationCase> cases = {{2.0, 0.5, 1u << 15},
                                                    {0.5, 4.0, 1u << 16}};
    for (const auto& c : cases) {
        const TimeGrid src_grid(c.source_horizon, c.source_steps);
        const SimulationConfig sim{rng::derive_seed(config.seed, static_cast<std::uint64_t>(
                                                                     c.sigma * 16.0)),
                                   config.replicates, src_grid};
        const paths::ItoCoefficients coeffs{coefficient("zero", 0.0),
                                            coefficient("constant", c.sigma), 0.0};
        const timechange::ClockDensity clock{coefficient("constant", c.sigma)};
        const CheckReport wiener = verify::check_standard_wiener(
            [&](std::size_t r) {
                const SamplePath x = paths::simulate_ito_path(coeffs, sim, r);
                const auto map = timechange::build_time_change(x, clock);
                return timechange::apply_time_change(x, map, out_grid);
            },
            config.replicates, sim.seed);
        const std::string prefix = "sigma_" + fmt(c.sigma) + "_";
        for (const auto& l : wiener.lines)
            result.report.lines.push_back(
                line(prefix + l.name, l.statistic, l.threshold, l.n, l.seed));
    }

    // QV transform: sup_t |QV(X^C)_t - QV(X)_{C_t}| on the identity clock
    // and on the sigma = 2 scaling clock
    {
        const TimeGrid src_grid(1.0, 1u << 14);
        const SimulationConfig sim{config.seed, 1, src_grid};
        const SamplePath w = paths::simulate_wiener_path(sim, 0);
        const auto identity_map =
            timechange::build_time_change(w, {coefficient("constant", 1.0)});
        const auto identity_gap = timechange::check_qv_transform(w, identity_map);
        result.report.lines.push_back(line("identity_clock_qv_gap", identity_gap.relative_gap,
                                           1e-6, 1, config.seed));
    }
    {
        const TimeGrid src_grid(0.5, 1u << 15);
        const SimulationConfig sim{config.seed, 4, src_grid};
        double max_gap = 0.0;
        double qv_mean = 0.0;
        const TimeGrid qv_out(1.0, 1u << 13);
        for (std::size_t r = 0; r < 4; ++r) {
            const SamplePath w = paths::simulate_wiener_path(sim, r);
            const auto map = timechange::build_time_change(w, {coefficient("constant", 2.0)});
            max_gap = std::max(max_gap, timechange::check_qv_transform(w, map).relative_gap);
            const SamplePath changed = timechange::apply_time_change(w, map, qv_out);
            qv_mean += paths::quadratic_variation(changed).terminal();
        }
        qv_mean /= 4.0;
        result.report.lines.push_back(line("scaling_clock_qv_gap", max_gap, 0.05, 4,
                                           config.seed));
        result.report.lines.push_back(line("scaling_clock_qv_quarter",
                                           std::abs(qv_mean / 0.25 - 1.0), 0.05, 4,
                                           config.seed));
    }

    // local-time transform: ensemble-mean terminal local time of X^C at 0 vs the
    // source local time read at C_T; X = 2 W, g = 2
    {
        const TimeGrid src_grid(0.5, 1u << 15);
        const TimeGrid transform_out(1.0, 1u << 12);
        const BandConfig band{localtime::default_bandwidth(transform_out)};
        const std::size_t n_rep = std::max<std::size_t>(config.replicates / 4, 500);
        const SimulationConfig sim{rng::derive_seed(config.seed, 99), n_rep, src_grid};
        const paths::ItoCoefficients coeffs{coefficient("zero", 0.0),
                                            coefficient("constant", 2.0), 0.0};
        const Eigen::ArrayXd sums = parallel::reduce_sum(n_rep, 2, [&](std::size_t r) {
            const SamplePath x = paths::simulate_ito_path(coeffs, sim, r);
            const auto map = timechange::build_time_change(x, {coefficient("constant", 2.0)});
            const auto rep = timechange::check_localtime_transform(x, map, 0.0, band, transform_out);
            Eigen::ArrayXd acc(2);
            acc[0] = rep.lhs_terminal;
            acc[1] = rep.rhs_terminal;
            return acc;
        });
        result.report.lines.push_back(line("localtime_transform_mean_gap",
                                           std::abs(sums[0] / sums[1] - 1.0), 0.10, n_rep,
                                           config.seed));

        // identity map: the same comparison is pure resampling noise
        const SamplePath x = paths::simulate_ito_path(coeffs, sim, 0);
        const auto identity_map =
            timechange::build_time_change(x, {coefficient("constant", 1.0)});
        const TimeGrid same(src_grid.horizon(), src_grid.steps());
        const auto rep = timechange::check_localtime_transform(
            x, identity_map, 0.0, BandConfig{localtime::default_bandwidth(src_grid)}, same);
        result.report.lines.push_back(line("identity_map_localtime_gap", rep.relative_gap, 0.02,
                                           1, config.seed));

        // level far outside the path range: both sides exactly zero
        const auto far = timechange::check_localtime_transform(
            x, identity_map, 1e6, BandConfig{localtime::default_bandwidth(src_grid)}, same);
        result.report.lines.push_back(line("far_level_both_zero",
                                           std::abs(far.lhs_terminal) + std::abs(far.rhs_terminal),
                                           0.0, 1, config.seed));
    }

    // drift transform: OU source, g = 2; the time-changed drift is -y/4
    {
        const TimeGrid src_grid(1.0, 1u << 14);
        const TimeGrid drift_out(4.0, 1u << 14);
        const std::size_t n_rep = 1500;
        const SimulationConfig sim{rng::derive_seed(config.seed, 55), n_rep, src_grid};
        const paths::ItoCoefficients ou{coefficient("linear", -1.0),
                                        coefficient("constant", 1.0), 0.0};
        const Eigen::ArrayXd sums = parallel::reduce_sum(n_rep, 2, [&](std::size_t r) {
            const SamplePath x = paths::simulate_ito_path(ou, sim, r);
            const auto map = timechange::build_time_change(x, {coefficient("constant", 2.0)});
            const SamplePath y = timechange::apply_time_change(x, map, drift_out);
            Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(2);
            for (std::size_t i = 0; i < y.steps(); ++i) {
                acc[0] += y.value(i) * y.increment(i);
                acc[1] += y.value(i) * y.value(i);
            }
            return acc;
        });
        const double dt_out = drift_out.dt();
        const double slope = sums[0] / (sums[1] * dt_out);
        const double se = 0.5 / std::sqrt(sums[1] * dt_out);
        result.report.lines.push_back(line("ou_drift_transform_error", std::abs(slope + 0.25),
                                           3.0 * se, n_rep, config.seed));
        result.extras.push_back({"ou_slope", fmt(slope)});
        result.extras.push_back({"ou_slope_se", fmt(se)});
    }

    maybe_write(out_dir, "timechange_map.csv", [&](std::ostream& out) {
        const TimeGrid src_grid(0.5, 1u << 12);
        const SimulationConfig sim{config.seed, 1, src_grid};
        const SamplePath w = paths::simulate_wiener_path(sim, 0);
        csv::write_time_change(out, timechange::build_time_change(
                                        w, {coefficient("constant", 2.0)}));
    });
    return result;
}

// ---------------------------------------------------------------- criterion 10

ExperimentResult run_deterministic_ramp(const ExperimentConfig& config,
                                        const std::filesystem::path& out_dir) {
    ExperimentResult result;
    result.report.check = "deterministic_ramp";

    const TimeGrid grid(1.0, 1u << 12);
    Eigen::ArrayXd ramp_values(static_cast<Eigen::Index>(grid.points()));
    for (std::size_t i = 0; i < grid.points(); ++i)
        ramp_values[static_cast<Eigen::Index>(i)] = grid.time(i);
    const SamplePath ramp(grid, ramp_values);

    const BandConfig band{0.05};
    const SamplePath ramp_band =
        localtime::band_local_time(ramp, 0.5, band, OccupationWeight::lebesgue);
    result.report.lines.push_back(line("ramp_band_error", std::abs(ramp_band.terminal() - 1.0),
                                       band.epsilon, 1, config.seed));

    const occupation::DifferentiablePathSpec ramp_spec{[](double t) { return t; },
                                                       [](double) { return 1.0; }};
    result.report.lines.push_back(
        line("ramp_closed_form_error",
             std::abs(occupation::deterministic_local_time(ramp_spec, 0.5, 1.0) - 1.0), 0.0, 1,
             config.seed));

    const occupation::DifferentiablePathSpec double_ramp{[](double t) { return 2.0 * t; },
                                                         [](double) { return 2.0; }};
    result.report.lines.push_back(
        line("double_slope_closed_form_error",
             std::abs(occupation::deterministic_local_time(double_ramp, 0.5, 1.0) - 0.5), 0.0, 1,
             config.seed));

    const double two_pi = 2.0 * 3.14159265358979323846;
    const occupation::DifferentiablePathSpec sine{
        [two_pi](double t) { return std::sin(two_pi * t); },
        [two_pi](double t) { return two_pi * std::cos(two_pi * t); }};
    const double sine_value = occupation::deterministic_local_time(sine, 0.0, 1.0);
    result.report.lines.push_back(line("sine_closed_form_error",
                                       std::abs(sine_value - 1.0 / 3.14159265358979323846),
                                       1e-6, 1, config.seed));

    // constant path: all histogram mass in one bin, band columns ramp at 1/(2 eps)
    {
        const double a = 0.7;
        Eigen::ArrayXd constant = Eigen::ArrayXd::Constant(
            static_cast<Eigen::Index>(grid.points()), a);
        const SamplePath flat(grid, constant);
        Eigen::ArrayXd edges(5);
        edges << a - 2.0, a - 1.0, a - 0.25, a + 0.75, a + 2.0;
        const Eigen::ArrayXd mass =
            occupation::occupation_histogram(flat, edges, OccupationWeight::lebesgue);
        double off_bin = 0.0;
        for (Eigen::Index b = 0; b < mass.size(); ++b)
            if (b != 2) off_bin += mass[b];
        result.report.lines.push_back(line("constant_path_single_bin",
                                           off_bin + std::abs(mass[2] - grid.horizon()), 0.0, 1,
                                           config.seed));
        const SamplePath flat_band =
            localtime::band_local_time(flat, a, band, OccupationWeight::lebesgue);
        result.report.lines.push_back(
            line("constant_path_band_blowup",
                 std::abs(flat_band.terminal() * 2.0 * band.epsilon - grid.horizon()), 0.0, 1,
                 config.seed));
        const SamplePath flat_far =
            localtime::band_local_time(flat, a + 3.0 * band.epsilon, band,
                                       OccupationWeight::lebesgue);
        result.report.lines.push_back(line("constant_path_far_band_zero",
                                           flat_far.values().abs().maxCoeff(), 0.0, 1,
                                           config.seed));
    }

    // ramp field: interior columns within grid quantization of 1
    {
        const Eigen::ArrayXd x_grid = level_grid(config, 0.2, 0.8, 0.075);
        const auto field =
            localtime::local_time_field(ramp, x_grid, band, OccupationWeight::lebesgue);
        double worst = 0.0;
        for (Eigen::Index j = 0; j < x_grid.size(); ++j)
            worst = std::max(worst,
                             std::abs(field.values(field.values.rows() - 1, j) - 1.0));
        result.report.lines.push_back(line("ramp_field_interior_error", worst, band.epsilon, 1,
                                           config.seed));
        maybe_write(out_dir, "ramp_field.csv",
                    [&](std::ostream& out) { csv::write_field(out, field); });
    }

    const CheckReport controls = verify::negative_controls(config.seed);
    for (const auto& l : controls.lines) result.report.lines.push_back(l);

    maybe_write(out_dir, "ramp_band.csv",
                [&](std::ostream& out) { csv::write_path(out, ramp_band); });
    return result;
}

using Runner = ExperimentResult (*)(const ExperimentConfig&, const std::filesystem::path&);

struct Entry {
    ExperimentInfo info;
    Runner run;
};

ExperimentConfig defaults(std::string name, std::uint64_t seed, double horizon,
                          std::size_t steps, std::size_t replicates, double epsilon = 0.0) {
    ExperimentConfig c;
    c.experiment = std::move(name);
    c.seed = seed;
    c.horizon = horizon;
    c.steps = steps;
    c.replicates = replicates;
    c.epsilon = epsilon;
    return c;
}

const std::vector<Entry>& entries() {
    static const std::vector<Entry> table = [] {
        std::vector<Entry> t;
        t.push_back({{"expected_localtime",
                      "ensemble mean of band local time at 0 against the Gaussian quadrature",
                      defaults("expected_localtime", 42, 1.0, 1u << 14, 50000)},
                     run_expected_localtime});
        t.push_back({{"localtime_maximum",
                      "L^0_T(W) =d S_T: Tanaka samples vs an independent running-max ensemble",
                      defaults("localtime_maximum", 42, 1.0, 1u << 14, 20000)},
                     run_localtime_maximum});
        t.push_back({{"joint_identity",
                      "(S-W, S)_T =d (|W|, L^0)_T: marginal KS plus correlation agreement",
                      defaults("joint_identity", 42, 1.0, 1u << 14, 20000)},
                     run_joint_identity});
        t.push_back({{"abs_w_factor2",
                      "L^0(|W|) = 2 L^0(W) via the one-sided band convention",
                      defaults("abs_w_factor2", 42, 1.0, 1u << 14, 20000, 0.15)},
                     run_abs_w_factor2});
        t.push_back({{"occupation_density",
                      "int f(X) d<X> against sum_x f(x) L_T^x dx for registry functions",
                      defaults("occupation_density", 42, 1.0, 1u << 14, 20)},
                     run_occupation_density});
        t.push_back({{"ito_tanaka_square",
                      "extended Ito-Tanaka residual for f(x) = x^2 and exactness for linear f",
                      defaults("ito_tanaka_square", 42, 1.0, 1u << 14, 101)},
                     run_ito_tanaka_square});
        t.push_back({{"skorohod_minimality",
                      "prefix-scan regulator against the brute-force minimal staircase",
                      defaults("skorohod_minimality", 42, 1.0, 1u << 12, 1000)},
                     run_skorohod_minimality});
        t.push_back({{"regulated_unit",
                      "projected Euler regulated SDE: folded-normal laws and F vs local time",
                      defaults("regulated_unit", 42, 1.0, 1u << 14, 20000, 0.09)},
                     run_regulated_unit});
        t.push_back({{"timechange_standardize",
                      "random time change: standardization, QV and local-time transforms",
                      defaults("timechange_standardize", 42, 1.0, 1u << 12, 8000)},
                     run_timechange_standardize});
        t.push_back({{"deterministic_ramp",
                      "closed-form deterministic local times and negative controls",
                      defaults("deterministic_ramp", 42, 1.0, 1u << 12, 1)},
                     run_deterministic_ramp});
        return t;
    }();
    return table;
}

}  // namespace

const std::vector<ExperimentInfo>& registry() {
    static const std::vector<ExperimentInfo> infos = [] {
        std::vector<ExperimentInfo> out;
        for (const auto& e : entries()) out.push_back(e.info);
        return out;
    }();
    return infos;
}

const ExperimentInfo* find_experiment(const std::string& name) {
    for (const auto& info : registry())
        if (info.name == name) return &info;
    return nullptr;
}

std::function<double(double)> coefficient(const std::string& id, double c) {
    if (id == "zero") return [](double) { return 0.0; };
    if (id == "constant") return [c](double) { return c; };
    if (id == "linear") return [c](double x) { return c * x; };
    throw ConfigError("unknown coefficient id '" + id + "'");
}

void validate(const ExperimentConfig& config) {
    if (find_experiment(config.experiment) == nullptr)
        throw ConfigError("unknown experiment '" + config.experiment + "'");
    if (!(config.horizon > 0.0) || !std::isfinite(config.horizon))
        throw ConfigError("horizon must be positive");
    if (config.steps < 1) throw ConfigError("steps must be >= 1");
    if (config.replicates < 1) throw ConfigError("replicates must be >= 1");
    if (config.epsilon < 0.0 || !std::isfinite(config.epsilon))
        throw ConfigError("epsilon must be >= 0");
    if (config.x_step < 0.0 || !std::isfinite(config.x_step))
        throw ConfigError("x_step must be >= 0");
    if (config.x_step > 0.0 && !(config.x_min < config.x_max))
        throw ConfigError("x_min must be below x_max when an x-grid is given");
    coefficient(config.drift, config.drift_constant);
    coefficient(config.diffusion, config.diffusion_constant);
}

namespace {

ExperimentConfig apply_key(ExperimentConfig config, const std::string& key,
                           const std::string& value) {
    auto parse_double = [&](const char* name) {
        try {
            std::size_t used = 0;
            const double v = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
            return v;
        } catch (const std::exception&) {
            throw ConfigError(std::string("invalid numeric value for '") + name + "': " + value);
        }
    };
    auto parse_count = [&](const char* name) {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(value, &used);
            if (used != value.size() || v < 0) throw std::invalid_argument(value);
            return static_cast<std::uint64_t>(v);
        } catch (const std::exception&) {
            throw ConfigError(std::string("invalid integer value for '") + name + "': " + value);
        }
    };
    if (key == "experiment") {
        config.experiment = value;
    } else if (key == "seed") {
        config.seed = parse_count("seed");
    } else if (key == "horizon") {
        config.horizon = parse_double("horizon");
    } else if (key == "steps") {
        config.steps = static_cast<std::size_t>(parse_count("steps"));
    } else if (key == "replicates") {
        config.replicates = static_cast<std::size_t>(parse_count("replicates"));
    } else if (key == "epsilon") {
        config.epsilon = parse_double("epsilon");
    } else if (key == "x_min") {
        config.x_min = parse_double("x_min");
    } else if (key == "x_max") {
        config.x_max = parse_double("x_max");
    } else if (key == "x_step") {
        config.x_step = parse_double("x_step");
    } else if (key == "drift") {
        config.drift = value;
    } else if (key == "drift_constant") {
        config.drift_constant = parse_double("drift_constant");
    } else if (key == "diffusion") {
        config.diffusion = value;
    } else if (key == "diffusion_constant") {
        config.diffusion_constant = parse_double("diffusion_constant");
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
    return config;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    // first pass: find the experiment name so defaults can seed the rest
    std::map<std::string, std::string> pairs;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        const std::string stripped = trim(raw);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("malformed config line (expected key = value): " + stripped);
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("malformed config line (empty key or value): " + stripped);
        if (pairs.count(key)) throw ConfigError("duplicate config key '" + key + "'");
        pairs[key] = value;
    }
    if (!pairs.count("experiment")) throw ConfigError("config is missing 'experiment'");
    const ExperimentInfo* info = find_experiment(pairs.at("experiment"));
    if (info == nullptr)
        throw ConfigError("unknown experiment '" + pairs.at("experiment") + "'");
    ExperimentConfig config = info->defaults;
    for (const auto& [key, value] : pairs) config = apply_key(std::move(config), key, value);
    validate(config);
    return config;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::filesystem::path& out_dir) {
    validate(config);
    for (const auto& e : entries())
        if (e.info.name == config.experiment) return e.run(config, out_dir);
    throw ConfigError("unknown experiment '" + config.experiment + "'");
}

namespace {

void echo_config(std::ostream& out, const ExperimentConfig& c) {
    out << "experiment = " << c.experiment << '\n'
        << "seed = " << c.seed << '\n'
        << "horizon = " << fmt(c.horizon) << '\n'
        << "steps = " << c.steps << '\n'
        << "replicates = " << c.replicates << '\n'
        << "epsilon = " << fmt(c.epsilon) << '\n'
        << "x_min = " << fmt(c.x_min) << '\n'
        << "x_max = " << fmt(c.x_max) << '\n'
        << "x_step = " << fmt(c.x_step) << '\n'
        << "drift = " << c.drift << '\n'
        << "drift_constant = " << fmt(c.drift_constant) << '\n'
        << "diffusion = " << c.diffusion << '\n'
        << "diffusion_constant = " << fmt(c.diffusion_constant) << '\n';
}

}  // namespace

int run_and_write(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
    validate(config);
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> created;
    try {
        const ExperimentResult result = run_experiment(config, out_dir);

        const auto summary_path = out_dir / "summary.txt";
        created.push_back(summary_path);
        {
            std::ofstream summary(summary_path, std::ios::app);
            summary << "experiment = " << config.experiment << '\n';
            summary << "seed = " << config.seed << '\n';
            for (const auto& l : result.report.lines) {
                summary << result.report.check << '.' << l.name << ".statistic = "
                        << fmt(l.statistic) << '\n';
                summary << result.report.check << '.' << l.name << ".threshold = "
                        << fmt(l.threshold) << '\n';
                summary << result.report.check << '.' << l.name << ".pass = "
                        << (l.pass ? 1 : 0) << '\n';
            }
            for (const auto& [key, value] : result.extras)
                summary << key << " = " << value << '\n';
            summary << "pass = " << (result.pass() ? 1 : 0) << '\n';
        }
        {
            const auto report_path = out_dir / "checks.csv";
            created.push_back(report_path);
            std::ofstream report(report_path, std::ios::trunc);
            csv::write_report(report, result.report);
        }
        {
            const auto echo_path = out_dir / "config_echo.txt";
            created.push_back(echo_path);
            std::ofstream echo(echo_path, std::ios::trunc);
            echo_config(echo, config);
        }
        return result.pass() ? 0 : 1;
    } catch (...) {
        for (const auto& p : created) std::filesystem::remove(p);
        throw;
    }
}

}  // namespace ltlab::experiments
