#pragma once

#include <cmath>
#include <limits>

#include "lifecycle/gompertz.hpp"

namespace lifecycle {

struct EconParams {
    double r = 0.02;      // risk-free real rate
    double rho = 0.02;    // subjective discount rate
    double gamma = 3.0;   // relative risk aversion
    double pi0 = 0.0;     // pension income rate
    double F0 = 100.0;    // initial wealth
    double D = 55.0;      // horizon
    double tau = std::numeric_limits<double>::quiet_NaN();  // wealth depletion time

    // Without pension income wealth is depleted exactly at the horizon;
    // with pi0 > 0 the caller must supply tau.
    double depletion_time() const { return std::isnan(tau) ? D : tau; }

    void require_valid() const {
        LC_REQUIRE(gamma > 0.0, "gamma must be positive, got " << gamma);
        LC_REQUIRE(F0 > 0.0, "initial wealth must be positive, got " << F0);
        LC_REQUIRE(pi0 >= 0.0, "pension income must be non-negative, got " << pi0);
        LC_REQUIRE(D > 0.0, "horizon must be positive, got " << D);
        const double t = depletion_time();
        LC_REQUIRE(t > 0.0 && t <= D, "depletion time " << t << " outside (0, D=" << D << "]");
        if (pi0 == 0.0)
            LC_REQUIRE(std::isnan(tau) || tau == D,
                       "without pension income the depletion time is the horizon");
    }
};

// Optimal consumption under the deterministic hazard:
//   c*(t) = c*(0) e^{(r-rho)t/gamma} p(t)^{1/gamma}.
struct ConsumptionPath {
    double c0 = 0.0;
    EconParams econ;
    GompertzParams mortality;

    double operator()(double t) const {
        LC_REQUIRE(t >= 0.0, "consumption path: t must be non-negative");
        const double shape = (econ.r - econ.rho) * t / econ.gamma -
                             mortality.b * mortality.lambda0() / econ.gamma *
                                 std::expm1(t / mortality.b);
        return c0 * std::exp(shape);
    }
};

// (r - rho - lambda(t)) / gamma, the log-slope of the optimal path.
double k_rate(const EconParams& econ, const GompertzParams& g, double t);

ConsumptionPath consumption_path(const EconParams& econ, const GompertzParams& g);

// Explicit wealth trajectory consistent with the optimal path; satisfies
// F(0) = F0, F(tau) = 0 and the budget ODE F' = rF + pi0 - c*(t).
double wealth_path(const EconParams& econ, const GompertzParams& g, const ConsumptionPath& cpath,
                   double t);

// Initial withdrawal rate c*(0)/F0 (fraction per year); requires the
// no-pension, rho = r setting.
double iwr_dfm(const EconParams& econ, const GompertzParams& g);

}  // namespace lifecycle
