#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ltlab/grid.hpp"
#include "ltlab/localtime.hpp"

namespace ltlab::convexcalc {

// Difference-of-convex function represented by its second-derivative data
// f''(dx) = g(x) dx + sum_i c_i delta_{a_i}(dx), plus a two-constant anchor
// (x0, f(x0), f'_-(x0)) fixing the integration constants. The measure is the
// source of truth; f and f'_- are reconstructed from it.
struct ConvexCombo {
    std::function<double(double)> smooth_second;     // density g
    std::vector<std::pair<double, double>> atoms;    // (location, mass), sorted
    double anchor_x = 0.0;
    double anchor_value = 0.0;
    double anchor_left_derivative = 0.0;
};

ConvexCombo make_combo(std::function<double(double)> smooth_second,
                       std::vector<std::pair<double, double>> atoms, double anchor_x,
                       double anchor_value, double anchor_left_derivative);

// Named smooth-density registry for experiment configs (no code-as-config):
// zero, constant (c), gaussian-bump (c * exp(-x^2)).
std::function<double(double)> smooth_density(const std::string& name, double c);

// f for |x - a|: point mass of size 2 at a, anchored at a itself so that the
// reconstruction reproduces |x - a| bit-for-bit.
ConvexCombo abs_combo(double a);

double eval_f(const ConvexCombo& combo, double x);

// f'_-(x) = f'_-(x0) + int_(x0,x] g + atom masses in [x0, x); left-continuous,
// jump c_i exactly at a_i.
double eval_left_derivative(const ConvexCombo& combo, double x);

// f''-measure of [x, y), which must equal f'_-(y) - f'_-(x).
double second_derivative_measure(const ConvexCombo& combo, double x, double y);

// Pathwise residual of f(X_t) = f(X_0) + sum f'_-(X_i) dX_i
//                              + (1/2)( sum_x g(x) L_t^x dx + sum_i c_i L_t^{a_i} ).
// The smooth part integrates g against the field rows (midpoint rule); atom
// columns are band estimates at the exact atom locations, not the nearest
// field column.
SamplePath ito_tanaka_residual(const SamplePath& path, const ConvexCombo& combo,
                               const localtime::LocalTimeField& field);

}  // namespace ltlab::convexcalc
