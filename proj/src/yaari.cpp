#include "lifecycle/yaari.hpp"

#include <cmath>

#include "lifecycle/annuity.hpp"

namespace lifecycle {

namespace {

// integral_0^t e^{-rs} ds with the r -> 0 limit handled.
double discount_certain(double r, double t) {
    if (std::abs(r) < 1e-14)
        return t;
    return -std::expm1(-r * t) / r;
}

// Discounted annuity with the full optimal-path shape folded into the
// integrand: integral_0^t e^{-rs} e^{(r-rho)s/gamma} p(s)^{1/gamma} ds.
// The survival power is again Gompertz, with the mode shifted by
// b ln(gamma), so this is a plain GPV factor at an adjusted rate.
double path_annuity(const EconParams& econ, const GompertzParams& g, double t) {
    if (t == 0.0)
        return 0.0;
    const double rate = econ.r - (econ.r - econ.rho) / econ.gamma;
    return gpv_quadrature(g, rate, shifted_mode(g, econ.gamma), t);
}

}  // namespace

double k_rate(const EconParams& econ, const GompertzParams& g, double t) {
    LC_REQUIRE(t >= 0.0, "k_rate: t must be non-negative");
    LC_REQUIRE(econ.gamma > 0.0, "k_rate: gamma must be positive");
    return (econ.r - econ.rho - hazard(g, t)) / econ.gamma;
}

ConsumptionPath consumption_path(const EconParams& econ, const GompertzParams& g) {
    econ.require_valid();
    g.require_valid();
    if (econ.pi0 > 0.0)
        LC_REQUIRE(!std::isnan(econ.tau),
                   "with pension income the caller must supply the depletion time");

    const double tau = econ.depletion_time();
    const double budget = econ.F0 + econ.pi0 * discount_certain(econ.r, tau);
    const double c0 = budget / path_annuity(econ, g, tau);

    ConsumptionPath path;
    path.c0 = c0;
    path.econ = econ;
    path.mortality = g;
    return path;
}

double wealth_path(const EconParams& econ, const GompertzParams& g, const ConsumptionPath& cpath,
                   double t) {
    const double tau = econ.depletion_time();
    LC_REQUIRE(t >= 0.0 && t <= tau, "wealth_path: t=" << t << " outside [0, " << tau << "]");
    const double value = econ.F0 + econ.pi0 * discount_certain(econ.r, t) -
                         cpath.c0 * path_annuity(econ, g, t);
    return std::exp(econ.r * t) * value;
}

double iwr_dfm(const EconParams& econ, const GompertzParams& g) {
    LC_REQUIRE(econ.pi0 == 0.0, "withdrawal rate is defined for the no-pension case");
    LC_REQUIRE(econ.rho == econ.r, "withdrawal rate is defined for rho = r");
    return consumption_path(econ, g).c0 / econ.F0;
}

}  // namespace lifecycle
