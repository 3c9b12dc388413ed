#pragma once

#include <cmath>
#include <concepts>

#include "lifecycle/assert.hpp"

namespace lifecycle {

namespace detail {

template <std::invocable<double> F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // Richardson: S(h/2) + delta/15 has one order more than S(h/2).
    if (std::abs(delta) <= 15.0 * tol || (b - a) < 1e-14)
        return left + right + delta / 15.0;
    LC_NUMERIC_REQUIRE(depth > 0, "adaptive quadrature failed to converge on ["
                                      << a << "," << b << "]");
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson rule with absolute tolerance. Suited to the smooth
// discounted-survival integrands used throughout; throws NumericError
// if the recursion depth is exhausted before the tolerance is met.
template <std::invocable<double> F>
double integrate(const F& f, double a, double b, double abs_tol = 1e-12, int max_depth = 48) {
    LC_REQUIRE(abs_tol > 0.0, "integrate: tolerance must be positive");
    if (a == b)
        return 0.0;
    LC_REQUIRE(b > a, "integrate: need b >= a, got [" << a << "," << b << "]");
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

}  // namespace lifecycle
