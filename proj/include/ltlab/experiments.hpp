#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ltlab/paths.hpp"
#include "ltlab/verify.hpp"

namespace ltlab::experiments {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key-value configuration; every experiment fills unspecified fields
// from its registry defaults before validation.
struct ExperimentConfig {
    std::string experiment;
    std::uint64_t seed = 42;
    double horizon = 1.0;
    std::size_t steps = 1u << 14;
    std::size_t replicates = 1;
    double epsilon = 0.0;  // 0 selects the dt^(1/3) default
    // optional level grid for field/histogram experiments; x_step = 0 lets
    // the experiment choose its own grid
    double x_min = 0.0;
    double x_max = 0.0;
    double x_step = 0.0;
    std::string drift = "zero";
    double drift_constant = 0.0;
    std::string diffusion = "constant";
    double diffusion_constant = 1.0;
};

// Keys: experiment, seed, horizon, steps, replicates, epsilon, x_min, x_max,
// x_step, drift, drift_constant, diffusion, diffusion_constant. Unknown keys
// are rejected.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

void validate(const ExperimentConfig& config);

// Drift/diffusion registry: zero, constant (c), linear (c*x).
std::function<double(double)> coefficient(const std::string& id, double c);

struct ExperimentResult {
    verify::CheckReport report;
    std::vector<std::pair<std::string, std::string>> extras;  // summary key-values
    bool pass() const { return report.pass(); }
};

struct ExperimentInfo {
    std::string name;
    std::string description;
    ExperimentConfig defaults;
};

const std::vector<ExperimentInfo>& registry();
const ExperimentInfo* find_experiment(const std::string& name);

// Runs the named experiment; when out_dir is non-empty, writes its CSV
// artifacts there as a side effect.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::filesystem::path& out_dir = {});

// Full CLI semantics: validate, run, write summary/report/config echo.
// Returns 0 when all checks pass, 1 on check failure. Throws ConfigError on
// invalid configuration.
int run_and_write(const ExperimentConfig& config, const std::filesystem::path& out_dir);

}  // namespace ltlab::experiments
