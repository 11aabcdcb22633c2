// Acceptance suite: one criterion per registry experiment, each printed as a
// single PASS/FAIL line with the measured statistics behind the verdict.

#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "ltlab/experiments.hpp"

namespace {

namespace ex = ltlab::experiments;

struct Criterion {
    int number;
    std::string experiment;
    std::string title;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> table = {
        {1, "expected_localtime",
         "ensemble mean of band L_1^0 within 2% of sqrt(2/pi) at dt = 2^-14, eps = dt^(1/3)"},
        {2, "localtime_maximum", "L^0 =d S: two-sample KS < 0.03 and half-normal law of S"},
        {3, "joint_identity", "(S-W, S) =d (|W|, L^0): marginals < 0.03, correlations"},
        {4, "abs_w_factor2", "L^0(|W|) / L^0(W) in [1.9, 2.1]; zero mass below the support"},
        {5, "occupation_density", "occupation-density identity gaps < 2%"},
        {6, "ito_tanaka_square", "x^2 residual median < 0.05, decreasing in dt; linear exact"},
        {7, "skorohod_minimality", "skorohod map: exactness, minimality oracle, idempotence"},
        {8, "regulated_unit", "regulated SDE laws < 0.03; regulator vs local time < 10%"},
        {9, "timechange_standardize", "time change: standardization, QV and local-time laws"},
        {10, "deterministic_ramp", "deterministic oracles and negative controls"},
    };
    return table;
}

int run_criterion(const Criterion& criterion) {
    const auto* info = ex::find_experiment(criterion.experiment);
    const ex::ExperimentResult result = ex::run_experiment(info->defaults);
    const bool pass = result.pass();
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion.number << " ("
              << criterion.experiment << "): " << criterion.title << '\n';
    for (const auto& line : result.report.lines) {
        std::cout << "    " << (line.pass ? "ok  " : "FAIL") << ' ' << line.name << ": "
                  << line.statistic << " vs " << line.threshold << '\n';
    }
    for (const auto& [key, value] : result.extras)
        std::cout << "    note " << key << " = " << value << '\n';
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[i + 1]);
            ++i;
        } else if (std::strcmp(argv[i], "--list") == 0) {
            for (const auto& c : criteria())
                std::cout << c.number << ": " << c.experiment << " - " << c.title << '\n';
            return 0;
        } else {
            std::cerr << "usage: acceptance [--criterion N] [--list]\n";
            return 2;
        }
    }

    int failures = 0;
    for (const auto& criterion : criteria()) {
        if (only != 0 && criterion.number != only) continue;
        failures += run_criterion(criterion);
    }
    if (only == 0)
        std::cout << (failures == 0 ? "all criteria passed"
                                    : std::to_string(failures) + " criterion(s) failed")
                  << '\n';
    return failures == 0 ? 0 : 1;
}
