#include "ltlab/localtime.hpp"

#include <cmath>
#include <stdexcept>

#include "ltlab/quadrature.hpp"

namespace ltlab::localtime {

using occupation::OccupationWeight;

void validate(const BandConfig& band) {
    if (!(band.epsilon > 0.0) || !std::isfinite(band.epsilon))
        throw std::invalid_argument("BandConfig: epsilon must be positive");
}

double default_bandwidth(const TimeGrid& grid) { return std::cbrt(grid.dt()); }

SamplePath band_local_time(const SamplePath& path, double level, const BandConfig& band,
                           OccupationWeight weight) {
    validate(band);
    const double eps = band.epsilon;
    const double lo = level - eps;
    const double hi = level + eps;
    const double dt = path.grid().dt();
    const double scale = 1.0 / (2.0 * eps);
    const std::size_t n = path.steps();

    Eigen::ArrayXd values(static_cast<Eigen::Index>(n) + 1);
    double occ = 0.0;
    values[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = path.value(i);
        if (x >= lo && x < hi) {
            if (weight == OccupationWeight::lebesgue) {
                occ += dt;
            } else {
                const double d = path.increment(i);
                occ += d * d;
            }
        }
        values[static_cast<Eigen::Index>(i) + 1] = occ * scale;
    }
    return SamplePath(path.grid(), std::move(values));
}

SamplePath tanaka_local_time(const SamplePath& path, double level) {
    const Eigen::ArrayXd sums =
        ito_partial_sums(path, [level](double x) { return sign_convention(x - level); });
    const Eigen::ArrayXd abs_dev = (path.values() - level).abs();
    Eigen::ArrayXd values = (abs_dev - abs_dev[0]) - sums;
    return SamplePath(path.grid(), std::move(values));
}

TanakaPositiveParts tanaka_positive_part(const SamplePath& path, double level) {
    const Eigen::ArrayXd indicator_sums =
        ito_partial_sums(path, [level](double x) { return x > level ? 1.0 : 0.0; });
    const Eigen::ArrayXd pos = (path.values() - level).max(0.0);
    const Eigen::ArrayXd implied_half = (pos - pos[0]) - indicator_sums;

    const SamplePath tanaka = tanaka_local_time(path, level);
    Eigen::ArrayXd recon = pos[0] + indicator_sums + 0.5 * tanaka.values();
    return {SamplePath(path.grid(), std::move(recon)),
            SamplePath(path.grid(), Eigen::ArrayXd(implied_half))};
}

LocalTimeField local_time_field(const SamplePath& path, const Eigen::ArrayXd& x_grid,
                                const BandConfig& band, OccupationWeight weight) {
    validate(band);
    if (x_grid.size() < 1) throw std::invalid_argument("local_time_field: empty x_grid");
    for (Eigen::Index j = 1; j < x_grid.size(); ++j)
        if (!(x_grid[j - 1] < x_grid[j]))
            throw std::invalid_argument("local_time_field: x_grid must be strictly increasing");

    LocalTimeField field{path.grid(), x_grid,
                         Eigen::MatrixXd(static_cast<Eigen::Index>(path.grid().points()),
                                         x_grid.size()),
                         band, weight};
    for (Eigen::Index j = 0; j < x_grid.size(); ++j) {
        const SamplePath column = band_local_time(path, x_grid[j], band, weight);
        field.values.col(j) = column.values().matrix();
    }
    return field;
}

double field_row_integral(const LocalTimeField& field, std::size_t t_index) {
    const auto& x = field.x_grid;
    const Eigen::Index nx = x.size();
    if (nx == 1) return 0.0;
    double total = 0.0;
    for (Eigen::Index j = 0; j < nx; ++j) {
        const double left = (j == 0) ? x[0] : 0.5 * (x[j - 1] + x[j]);
        const double right = (j == nx - 1) ? x[nx - 1] : 0.5 * (x[j] + x[j + 1]);
        total += field.values(static_cast<Eigen::Index>(t_index), j) * (right - left);
    }
    return total;
}

double expected_local_time_gaussian(double t, double x) {
    if (t < 0.0) throw std::invalid_argument("expected_local_time_gaussian: t < 0");
    if (t == 0.0) return 0.0;
    // substitute s = u^2: integral becomes sqrt(2/pi) * int_0^sqrt(t) exp(-x^2/(2u^2)) du,
    // which removes the s^{-1/2} singularity at the origin.
    const double xsq = x * x;
    auto integrand = [xsq](double u) {
        if (u == 0.0) return xsq == 0.0 ? 1.0 : 0.0;
        return std::exp(-xsq / (2.0 * u * u));
    };
    const double root_t = std::sqrt(t);
    const double scale = std::sqrt(2.0 / 3.14159265358979323846);
    const double integral = quadrature::integrate(integrand, 0.0, root_t, 1e-11 * root_t, 48);
    return scale * integral;
}

}  // namespace ltlab::localtime
