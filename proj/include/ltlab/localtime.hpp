#pragma once

#include <utility>

#include "ltlab/grid.hpp"
#include "ltlab/occupation.hpp"

namespace ltlab::localtime {

// Band half-width for the occupation-density estimator. Ensemble means are
// unbiased for any epsilon > 0, but per-path estimates want epsilon at a few
// multiples of the step displacement.
struct BandConfig {
    double epsilon;  // > 0
};

void validate(const BandConfig& band);

// Bias-vs-noise calibration default: epsilon = dt^(1/3).
double default_bandwidth(const TimeGrid& grid);

// sgn(x) with sgn(0) = -1; equals the left derivative of |x|.
inline double sign_convention(double x) { return x <= 0.0 ? -1.0 : 1.0; }

// Partial sums S_k = sum_{i<k} g(X_i) * (X_{i+1} - X_i), left endpoints.
// Shared by the Tanaka estimators and the extended Ito-Tanaka residual so
// that cross-module identities hold to the last bit.
template <class G>
Eigen::ArrayXd ito_partial_sums(const SamplePath& path, G g) {
    const std::size_t n = path.steps();
    Eigen::ArrayXd sums(static_cast<Eigen::Index>(n) + 1);
    double acc = 0.0;
    sums[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += g(path.value(i)) * path.increment(i);
        sums[static_cast<Eigen::Index>(i) + 1] = acc;
    }
    return sums;
}

// L_t ~= (1/2eps) * occupation of [x - eps, x + eps) up to t; nondecreasing,
// starts at 0, same grid as the input path.
SamplePath band_local_time(const SamplePath& path, double level, const BandConfig& band,
                           occupation::OccupationWeight weight);

// Discrete Tanaka sum L_t = |X_t - a| - |X_0 - a| - sum_{i<t} sgn(X_i - a) dX_i.
// Not clipped: raw sums expose the discretization error.
SamplePath tanaka_local_time(const SamplePath& path, double level);

struct TanakaPositiveParts {
    SamplePath reconstructed;            // (X_0-x)^+ + sum 1{X>x} dX + (1/2) L_tanaka
    SamplePath implied_half_local_time;  // (X_t-x)^+ - (X_0-x)^+ - sum 1{X>x} dX
};

TanakaPositiveParts tanaka_positive_part(const SamplePath& path, double level);

// Estimates of L_t^x on (path grid) x (x_grid); column x is exactly
// band_local_time(path, x, band, weight).
struct LocalTimeField {
    TimeGrid t_grid;
    Eigen::ArrayXd x_grid;
    Eigen::MatrixXd values;  // rows: time, cols: level
    BandConfig band;
    occupation::OccupationWeight weight;
};

LocalTimeField local_time_field(const SamplePath& path, const Eigen::ArrayXd& x_grid,
                                const BandConfig& band, occupation::OccupationWeight weight);

// Row integral sum_j L[t,j] * cell_j with midpoint cell widths.
double field_row_integral(const LocalTimeField& field, std::size_t t_index);

// E[L_t^x] for a standard Wiener path: integral of the N(0,s) density at x
// over s in (0, t], adaptive quadrature, relative accuracy ~1e-9.
double expected_local_time_gaussian(double t, double x);

}  // namespace ltlab::localtime
