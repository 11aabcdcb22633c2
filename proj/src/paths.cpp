#include "ltlab/paths.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ltlab/rng.hpp"

namespace ltlab::paths {

void validate(const SimulationConfig& config) {
    if (config.replicates < 1)
        throw std::invalid_argument("SimulationConfig: replicates must be >= 1");
    // TimeGrid validated on construction (horizon > 0, steps >= 1).
}

SamplePath simulate_wiener_path(const SimulationConfig& config, std::size_t replicate) {
    validate(config);
    const std::size_t n = config.grid.steps();
    const double sqrt_dt = std::sqrt(config.grid.dt());
    rng::GaussianStream noise(config.seed, replicate);
    Eigen::ArrayXd values(static_cast<Eigen::Index>(n) + 1);
    Eigen::ArrayXd increments(static_cast<Eigen::Index>(n));
    values[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dw = sqrt_dt * noise.next();
        increments[static_cast<Eigen::Index>(i)] = dw;
        values[static_cast<Eigen::Index>(i) + 1] = values[static_cast<Eigen::Index>(i)] + dw;
    }
    return SamplePath(config.grid, std::move(values), std::move(increments));
}

std::vector<SamplePath> simulate_wiener(const SimulationConfig& config) {
    validate(config);
    std::vector<SamplePath> out;
    out.reserve(config.replicates);
    for (std::size_t r = 0; r < config.replicates; ++r)
        out.push_back(simulate_wiener_path(config, r));
    return out;
}

SamplePath simulate_ito_path(const ItoCoefficients& coeffs, const SimulationConfig& config,
                             std::size_t replicate) {
    validate(config);
    const std::size_t n = config.grid.steps();
    const double dt = config.grid.dt();
    const double sqrt_dt = std::sqrt(dt);
    rng::GaussianStream noise(config.seed, replicate);
    Eigen::ArrayXd values(static_cast<Eigen::Index>(n) + 1);
    Eigen::ArrayXd increments(static_cast<Eigen::Index>(n));
    values[0] = coeffs.initial;
    double x = coeffs.initial;
    for (std::size_t i = 0; i < n; ++i) {
        const double dw = sqrt_dt * noise.next();
        increments[static_cast<Eigen::Index>(i)] = dw;
        x = x + coeffs.drift(x) * dt + coeffs.diffusion(x) * dw;
        if (!std::isfinite(x))
            throw std::runtime_error("simulate_ito: divergence at step " + std::to_string(i + 1) +
                                     " (replicate " + std::to_string(replicate) + ")");
        values[static_cast<Eigen::Index>(i) + 1] = x;
    }
    return SamplePath(config.grid, std::move(values), std::move(increments));
}

std::vector<SamplePath> simulate_ito(const ItoCoefficients& coeffs,
                                     const SimulationConfig& config) {
    validate(config);
    std::vector<SamplePath> out;
    out.reserve(config.replicates);
    for (std::size_t r = 0; r < config.replicates; ++r)
        out.push_back(simulate_ito_path(coeffs, config, r));
    return out;
}

SamplePath simulate_dyadic_walk(const SimulationConfig& config, std::size_t replicate) {
    validate(config);
    const std::size_t n = config.grid.steps();
    const double step = std::sqrt(config.grid.dt());
    Eigen::ArrayXd values(static_cast<Eigen::Index>(n) + 1);
    Eigen::ArrayXd increments(static_cast<Eigen::Index>(n));
    values[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto word = rng::Philox4x32::block(config.seed, replicate, i)[0];
        const double d = (word & 1u) ? step : -step;
        increments[static_cast<Eigen::Index>(i)] = d;
        values[static_cast<Eigen::Index>(i) + 1] = values[static_cast<Eigen::Index>(i)] + d;
    }
    return SamplePath(config.grid, std::move(values), std::move(increments));
}

SamplePath quadratic_variation(const SamplePath& path) {
    const std::size_t n = path.steps();
    Eigen::ArrayXd qv(static_cast<Eigen::Index>(n) + 1);
    qv[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = path.increment(i);
        qv[static_cast<Eigen::Index>(i) + 1] = qv[static_cast<Eigen::Index>(i)] + d * d;
    }
    return SamplePath(path.grid(), std::move(qv));
}

std::pair<SamplePath, SamplePath> running_extremes(const SamplePath& path) {
    const auto& v = path.values();
    Eigen::ArrayXd hi(v.size()), lo(v.size());
    hi[0] = v[0];
    lo[0] = v[0];
    for (Eigen::Index i = 1; i < v.size(); ++i) {
        hi[i] = std::max(hi[i - 1], v[i]);
        lo[i] = std::min(lo[i - 1], v[i]);
    }
    return {SamplePath(path.grid(), std::move(hi)), SamplePath(path.grid(), std::move(lo))};
}

}  // namespace ltlab::paths
