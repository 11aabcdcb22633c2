#include "ltlab/convexcalc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ltlab/quadrature.hpp"

namespace ltlab::convexcalc {

ConvexCombo make_combo(std::function<double(double)> smooth_second,
                       std::vector<std::pair<double, double>> atoms, double anchor_x,
                       double anchor_value, double anchor_left_derivative) {
    std::sort(atoms.begin(), atoms.end());
    return {std::move(smooth_second), std::move(atoms), anchor_x, anchor_value,
            anchor_left_derivative};
}

ConvexCombo abs_combo(double a) {
    return make_combo([](double) { return 0.0; }, {{a, 2.0}}, a, 0.0, -1.0);
}

std::function<double(double)> smooth_density(const std::string& name, double c) {
    if (name == "zero") return [](double) { return 0.0; };
    if (name == "constant") return [c](double) { return c; };
    if (name == "gaussian-bump") return [c](double x) { return c * std::exp(-x * x); };
    throw std::invalid_argument("smooth_density: unknown name '" + name + "'");
}

namespace {
constexpr double quad_tol = 1e-12;
}

double eval_f(const ConvexCombo& combo, double x) {
    const double x0 = combo.anchor_x;
    double result = combo.anchor_value + combo.anchor_left_derivative * (x - x0);
    if (x > x0) {
        result += quadrature::integrate(
            [&](double v) { return combo.smooth_second(v) * (x - v); }, x0, x,
            quad_tol * std::max(1.0, x - x0));
        for (const auto& [a, c] : combo.atoms)
            if (a >= x0 && a < x) result += c * (x - a);
    } else if (x < x0) {
        result += quadrature::integrate(
            [&](double v) { return combo.smooth_second(v) * (v - x); }, x, x0,
            quad_tol * std::max(1.0, x0 - x));
        for (const auto& [a, c] : combo.atoms)
            if (a >= x && a < x0) result += c * (a - x);
    }
    return result;
}

double eval_left_derivative(const ConvexCombo& combo, double x) {
    const double x0 = combo.anchor_x;
    double result = combo.anchor_left_derivative;
    if (x > x0) {
        result += quadrature::integrate(combo.smooth_second, x0, x,
                                        quad_tol * std::max(1.0, x - x0));
        for (const auto& [a, c] : combo.atoms)
            if (a >= x0 && a < x) result += c;
    } else if (x < x0) {
        result -= quadrature::integrate(combo.smooth_second, x, x0,
                                        quad_tol * std::max(1.0, x0 - x));
        for (const auto& [a, c] : combo.atoms)
            if (a >= x && a < x0) result -= c;
    }
    return result;
}

double second_derivative_measure(const ConvexCombo& combo, double x, double y) {
    if (!(x < y)) throw std::invalid_argument("second_derivative_measure: need x < y");
    double mass = quadrature::integrate(combo.smooth_second, x, y,
                                        quad_tol * std::max(1.0, y - x));
    for (const auto& [a, c] : combo.atoms)
        if (a >= x && a < y) mass += c;
    return mass;
}

SamplePath ito_tanaka_residual(const SamplePath& path, const ConvexCombo& combo,
                               const localtime::LocalTimeField& field) {
    if (!(field.t_grid == path.grid()))
        throw std::invalid_argument("ito_tanaka_residual: field t-grid differs from path grid");
    const double path_min = path.values().minCoeff();
    const double path_max = path.values().maxCoeff();
    if (field.x_grid[0] > path_min || field.x_grid[field.x_grid.size() - 1] < path_max)
        throw std::invalid_argument("ito_tanaka_residual: field x-grid does not cover path range");

    const Eigen::ArrayXd ito_sums = localtime::ito_partial_sums(
        path, [&](double x) { return eval_left_derivative(combo, x); });

    const auto n_points = static_cast<Eigen::Index>(path.grid().points());
    Eigen::ArrayXd f_vals(n_points);
    for (Eigen::Index k = 0; k < n_points; ++k)
        f_vals[k] = eval_f(combo, path.values()[k]);

    // midpoint-rule cell widths of the field's x-grid
    const auto& xg = field.x_grid;
    const Eigen::Index nx = xg.size();
    Eigen::ArrayXd cell(nx);
    for (Eigen::Index j = 0; j < nx; ++j) {
        const double left = (j == 0) ? xg[0] : 0.5 * (xg[j - 1] + xg[j]);
        const double right = (j == nx - 1) ? xg[nx - 1] : 0.5 * (xg[j] + xg[j + 1]);
        cell[j] = right - left;
    }
    Eigen::ArrayXd g_weights(nx);
    for (Eigen::Index j = 0; j < nx; ++j) g_weights[j] = combo.smooth_second(xg[j]) * cell[j];

    std::vector<SamplePath> atom_columns;
    atom_columns.reserve(combo.atoms.size());
    for (const auto& [a, c] : combo.atoms)
        atom_columns.push_back(localtime::band_local_time(path, a, field.band, field.weight));

    Eigen::ArrayXd base = (f_vals - f_vals[0]) - ito_sums;
    Eigen::ArrayXd residual(n_points);
    for (Eigen::Index k = 0; k < n_points; ++k) {
        double smooth = 0.0;
        for (Eigen::Index j = 0; j < nx; ++j) smooth += g_weights[j] * field.values(k, j);
        double atom_sum = 0.0;
        for (std::size_t i = 0; i < combo.atoms.size(); ++i)
            atom_sum += combo.atoms[i].second *
                        atom_columns[i].values()[k];
        residual[k] = base[k] - 0.5 * (smooth + atom_sum);
    }
    return SamplePath(path.grid(), std::move(residual));
}

}  // namespace ltlab::convexcalc
