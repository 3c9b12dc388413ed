#include "lifecycle/special.hpp"

#include <cmath>
#include <limits>

#include "lifecycle/assert.hpp"

namespace lifecycle {

namespace {

constexpr int kMaxIter = 400;
constexpr double kAccuracy = 1e-15;

// Series for the regularized lower gamma P(a,x), x < a+1.
double lower_regularized_series(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int n = 1; n <= kMaxIter; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kAccuracy)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    LC_NUMERIC_REQUIRE(false, "incomplete gamma series did not converge, a=" << a << " x=" << x);
    return 0.0;
}

// Modified Lentz continued fraction for the regularized upper gamma
// Q(a,x), x >= a+1.
double upper_regularized_cf(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / kAccuracy;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kAccuracy)
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
    LC_NUMERIC_REQUIRE(false, "incomplete gamma continued fraction did not converge, a=" << a
                                                                            << " x=" << x);
    return 0.0;
}

double upper_gamma_positive_order(double a, double x) {
    if (x == 0.0)
        return std::tgamma(a);
    if (x < a + 1.0)
        return std::tgamma(a) * (1.0 - lower_regularized_series(a, x));
    return std::tgamma(a) * upper_regularized_cf(a, x);
}

}  // namespace

double exponential_integral_e1(double x) {
    LC_REQUIRE(x > 0.0, "E1 requires x > 0, got " << x);
    if (x <= 1.0) {
        // E1(x) = -gamma - ln x + sum (-1)^{n+1} x^n / (n n!)
        constexpr double euler = 0.57721566490153286060651209008240243;
        double sum = 0.0;
        double term = 1.0;
        for (int n = 1; n <= kMaxIter; ++n) {
            term *= -x / n;
            const double add = -term / n;
            sum += add;
            if (std::abs(add) < kAccuracy * std::abs(sum))
                break;
        }
        return -euler - std::log(x) + sum;
    }
    // Continued fraction E1(x) = e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...))).
    const double tiny = std::numeric_limits<double>::min() / kAccuracy;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kAccuracy)
            return h * std::exp(-x);
    }
    LC_NUMERIC_REQUIRE(false, "E1 continued fraction did not converge, x=" << x);
    return 0.0;
}

double upper_incomplete_gamma(double a, double x) {
    LC_REQUIRE(x >= 0.0, "upper_incomplete_gamma requires x >= 0, got " << x);
    if (a > 0.0)
        return upper_gamma_positive_order(a, x);

    LC_REQUIRE(x > 0.0, "upper_incomplete_gamma diverges at x=0 for order " << a);
    if (std::abs(a) < 1e-14)
        return exponential_integral_e1(x);
    const double r = std::round(a);
    const bool integer_order = std::abs(a - r) < 1e-14;
    LC_REQUIRE(!integer_order || r == 0.0,
               "upper_incomplete_gamma: negative integer order " << a << " not supported");

    // Climb to a base order in (0,1] (or exactly 0, handled by E1), then
    // recurse down: Gamma(s-1,x) = (Gamma(s,x) - x^{s-1} e^{-x}) / (s-1).
    int n = 0;
    double a0 = a;
    while (a0 < 0.0) {
        a0 += 1.0;
        ++n;
    }
    double g = (std::abs(a0) < 1e-14) ? exponential_integral_e1(x)
                                      : upper_gamma_positive_order(a0, x);
    const double emx = std::exp(-x);
    for (int k = 1; k <= n; ++k) {
        const double s = a0 - k;
        g = (g - std::pow(x, s) * emx) / s;
    }
    return g;
}

}  // namespace lifecycle
