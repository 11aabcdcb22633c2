#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "ltlab/grid.hpp"

namespace ltlab::paths {

struct SimulationConfig {
    std::uint64_t seed;
    std::size_t replicates;
    TimeGrid grid;
};

void validate(const SimulationConfig& config);

struct ItoCoefficients {
    std::function<double(double)> drift;
    std::function<double(double)> diffusion;
    double initial = 0.0;
};

// Single replicate; the noise is keyed on (seed, replicate, step), so one
// replicate can be produced without generating the ones before it.
SamplePath simulate_wiener_path(const SimulationConfig& config, std::size_t replicate);
std::vector<SamplePath> simulate_wiener(const SimulationConfig& config);

// Euler-Maruyama: X_{i+1} = X_i + mu(X_i) dt + sigma(X_i) dW_i.
// Throws with the step index if the state leaves the finite range.
SamplePath simulate_ito_path(const ItoCoefficients& coeffs, const SimulationConfig& config,
                             std::size_t replicate);
std::vector<SamplePath> simulate_ito(const ItoCoefficients& coeffs,
                                     const SimulationConfig& config);

// Symmetric random walk with steps +-sqrt(dt). On grids where sqrt(dt) is a
// power of two every value, increment and partial sum is exactly
// representable, which makes telescoping identities hold to the bit.
SamplePath simulate_dyadic_walk(const SimulationConfig& config, std::size_t replicate);

// Running sum of squared increments over the grid partition.
SamplePath quadratic_variation(const SamplePath& path);

// (running maximum, running infimum)
std::pair<SamplePath, SamplePath> running_extremes(const SamplePath& path);

}  // namespace ltlab::paths
