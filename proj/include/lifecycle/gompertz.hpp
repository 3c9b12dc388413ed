#pragma once

#include <cmath>

#include "lifecycle/assert.hpp"

namespace lifecycle {

// Gompertz law of mortality for an individual aged x at time 0:
//   lambda(t) = (1/b) exp((x + t - m)/b) = lambda0 * exp(eta t)
// with modal age m and dispersion b.
struct GompertzParams {
    double x = 65.0;    // age at time 0, years
    double m = 89.335;  // modal age at death, years
    double b = 9.5;     // dispersion, years

    double eta() const { return 1.0 / b; }
    double lambda0() const { return std::exp((x - m) / b) / b; }

    void require_valid() const {
        LC_REQUIRE(b > 0.0, "Gompertz dispersion b must be positive, got " << b);
        LC_REQUIRE(m > 0.0, "Gompertz modal age m must be positive, got " << m);
        LC_REQUIRE(x >= 0.0, "age x must be non-negative, got " << x);
    }
};

inline double hazard(const GompertzParams& g, double t) {
    LC_REQUIRE(t >= 0.0, "hazard: t must be non-negative, got " << t);
    return g.lambda0() * std::exp(g.eta() * t);
}

// p(t) = exp(-integral of lambda) = exp(b lambda0 (1 - e^{t/b})).
// expm1 keeps the exponent accurate for small t.
inline double survival(const GompertzParams& g, double t) {
    LC_REQUIRE(t >= 0.0, "survival: t must be non-negative, got " << t);
    return std::exp(-g.b * g.lambda0() * std::expm1(t / g.b));
}

inline double conditional_survival(const GompertzParams& g, double t, double s) {
    LC_REQUIRE(s >= t, "conditional_survival: need s >= t, got t=" << t << " s=" << s);
    if (s == t)
        return 1.0;
    return survival(g, s) / survival(g, t);
}

// Raising p(t) to the power 1/gamma is the same Gompertz curve with the
// initial hazard scaled to lambda0/gamma, i.e. the mode shifted to
// m + b ln(gamma).
inline double shifted_mode(const GompertzParams& g, double gamma) {
    LC_REQUIRE(gamma > 0.0, "shifted_mode: gamma must be positive, got " << gamma);
    return g.m + g.b * std::log(gamma);
}

}  // namespace lifecycle
