#pragma once

#include <cmath>
#include <functional>

namespace ltlab::quadrature {

namespace detail {

inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive(F& f, double a, double m, double b, double fa, double fm, double fb, double whole,
                double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson on [a, b]; tol is treated as an absolute tolerance on the
// result, so callers wanting relative accuracy scale it by a magnitude guess.
template <class F>
double integrate(F f, double a, double b, double tol = 1e-10, int max_depth = 40) {
    if (a == b) return 0.0;
    const double sign = (a <= b) ? 1.0 : -1.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    const double m = 0.5 * (lo + hi);
    const double fa = f(lo), fm = f(m), fb = f(hi);
    const double whole = detail::simpson(lo, hi, fa, fm, fb);
    return sign * detail::adaptive(f, lo, m, hi, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace ltlab::quadrature
