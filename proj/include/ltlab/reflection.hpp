#pragma once

#include <optional>
#include <vector>

#include "ltlab/grid.hpp"
#include "ltlab/localtime.hpp"
#include "ltlab/paths.hpp"

namespace ltlab::reflection {

// (input, regulated, regulator): z = x + f pointwise, f nondecreasing from 0,
// z >= 0. z is stored as the literal sum x + f so additivity is exact.
struct ReflectedPair {
    SamplePath x;
    SamplePath z;
    SamplePath f;
};

// Minimal regulator of a path started at 0: f_t = max_{s<=t} (-x_s)^+.
// Rejects paths with X_0 != 0.
ReflectedPair skorohod_map(const SamplePath& path);

struct SkorohodReport {
    bool nonnegative;          // z >= 0 everywhere, exact
    bool regulator_monotone;   // f nondecreasing with f_0 = 0, exact
    bool additive;             // z == x + f, exact
    bool complementarity_ok;   // sum z_i df_i <= tol * f_T * max z
    double complementarity_sum;
    double complementarity_bound;
    bool pass() const {
        return nonnegative && regulator_monotone && additive && complementarity_ok;
    }
};

SkorohodReport verify_skorohod(const ReflectedPair& pair, double complementarity_tolerance);

struct RegulatedSdeSpec {
    paths::ItoCoefficients coeffs;  // initial must be 0
    std::optional<double> lipschitz_hint;
};

// Projected Euler: the discrete Skorohod map applied stepwise to the
// accumulated increments, with coefficients evaluated at the regulated state.
ReflectedPair simulate_regulated_sde_path(const RegulatedSdeSpec& spec,
                                          const paths::SimulationConfig& config,
                                          std::size_t replicate);
std::vector<ReflectedPair> simulate_regulated_sde(const RegulatedSdeSpec& spec,
                                                  const paths::SimulationConfig& config);

struct RegulatorGapReport {
    double regulator_terminal;  // F_T
    double halfband_terminal;   // (1/2) * one-sided band estimate of L^0(Z)
    double relative_gap;
    double epsilon;
};

// F_T against half the one-sided band estimate (band [0, eps), mass 1/eps) of
// local time at zero of Z. The quadratic clock uses the pair's semimartingale
// increments dz - df = dx, the realized QV of Z with its finite-variation
// part removed; the censored increments dz alone undercount movement at the
// boundary by O(sqrt(dt)/eps).
RegulatorGapReport regulator_vs_localtime(const ReflectedPair& pair,
                                          const localtime::BandConfig& band);

}  // namespace ltlab::reflection
