#include "ltlab/reflection.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ltlab/rng.hpp"

namespace ltlab::reflection {

namespace {

ReflectedPair assemble(const TimeGrid& grid, Eigen::ArrayXd x, Eigen::ArrayXd f) {
    Eigen::ArrayXd z = x + f;
    return {SamplePath(grid, std::move(x)), SamplePath(grid, std::move(z)),
            SamplePath(grid, std::move(f))};
}

}  // namespace

ReflectedPair skorohod_map(const SamplePath& path) {
    if (path.value(0) != 0.0)
        throw std::invalid_argument("skorohod_map: path must start at 0, got " +
                                    std::to_string(path.value(0)));
    const auto& v = path.values();
    Eigen::ArrayXd f(v.size());
    double running = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        running = std::max(running, -v[i]);
        f[i] = running;
    }
    return assemble(path.grid(), v, std::move(f));
}

SkorohodReport verify_skorohod(const ReflectedPair& pair, double complementarity_tolerance) {
    SkorohodReport report{};
    const auto& z = pair.z.values();
    const auto& f = pair.f.values();
    const auto& x = pair.x.values();

    report.nonnegative = (z >= 0.0).all();
    report.regulator_monotone = f[0] == 0.0;
    for (Eigen::Index i = 1; i < f.size() && report.regulator_monotone; ++i)
        if (f[i] < f[i - 1]) report.regulator_monotone = false;
    report.additive = ((x + f) == z).all();

    double sum = 0.0;
    for (Eigen::Index i = 0; i + 1 < z.size(); ++i) sum += z[i] * (f[i + 1] - f[i]);
    const double f_total = f[f.size() - 1];
    const double z_max = z.maxCoeff();
    report.complementarity_sum = sum;
    report.complementarity_bound = complementarity_tolerance * f_total * z_max;
    report.complementarity_ok = sum <= report.complementarity_bound ||
                                (f_total == 0.0 && sum == 0.0);
    return report;
}

ReflectedPair simulate_regulated_sde_path(const RegulatedSdeSpec& spec,
                                          const paths::SimulationConfig& config,
                                          std::size_t replicate) {
    paths::validate(config);
    if (spec.coeffs.initial != 0.0)
        throw std::invalid_argument("simulate_regulated_sde: initial value must be 0");
    const std::size_t n = config.grid.steps();
    const double dt = config.grid.dt();
    const double sqrt_dt = std::sqrt(dt);
    rng::GaussianStream noise(config.seed, replicate);

    Eigen::ArrayXd x(static_cast<Eigen::Index>(n) + 1), f(static_cast<Eigen::Index>(n) + 1);
    x[0] = 0.0;
    f[0] = 0.0;
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dw = sqrt_dt * noise.next();
        const double inc = spec.coeffs.drift(z) * dt + spec.coeffs.diffusion(z) * dw;
        const auto k = static_cast<Eigen::Index>(i);
        x[k + 1] = x[k] + inc;
        if (!std::isfinite(x[k + 1]))
            throw std::runtime_error("simulate_regulated_sde: divergence at step " +
                                     std::to_string(i + 1));
        f[k + 1] = std::max(f[k], -x[k + 1]);
        z = x[k + 1] + f[k + 1];
    }
    return assemble(config.grid, std::move(x), std::move(f));
}

std::vector<ReflectedPair> simulate_regulated_sde(const RegulatedSdeSpec& spec,
                                                  const paths::SimulationConfig& config) {
    std::vector<ReflectedPair> out;
    out.reserve(config.replicates);
    for (std::size_t r = 0; r < config.replicates; ++r)
        out.push_back(simulate_regulated_sde_path(spec, config, r));
    return out;
}

RegulatorGapReport regulator_vs_localtime(const ReflectedPair& pair,
                                          const localtime::BandConfig& band) {
    localtime::validate(band);
    const double eps = band.epsilon;
    const auto& z = pair.z.values();
    double occ = 0.0;
    for (std::size_t i = 0; i < pair.x.steps(); ++i) {
        if (z[static_cast<Eigen::Index>(i)] >= 0.0 && z[static_cast<Eigen::Index>(i)] < eps) {
            const double d = pair.x.increment(i);
            occ += d * d;
        }
    }
    const double halfband = 0.5 * occ / eps;
    const double f_total = pair.f.terminal();
    const double denom = std::max(std::abs(f_total), 1e-300);
    return {f_total, halfband, std::abs(f_total - halfband) / denom, eps};
}

}  // namespace ltlab::reflection
