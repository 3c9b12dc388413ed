#include "lifecycle/annuity.hpp"

#include <cmath>

#include "lifecycle/quadrature.hpp"
#include "lifecycle/special.hpp"

namespace lifecycle {

namespace {

double lambda_at_mode(const GompertzParams& g, double m_star) {
    return std::exp((g.x - m_star) / g.b) / g.b;
}

}  // namespace

double gpv_quadrature(const GompertzParams& g, double rate, double m_star, double T,
                      double abs_tol) {
    g.require_valid();
    LC_REQUIRE(T > 0.0, "annuity term must be positive, got " << T);
    const double lam = lambda_at_mode(g, m_star);
    const double b = g.b;
    auto f = [&](double s) {
        return std::exp(-rate * s - b * lam * std::expm1(s / b));
    };
    return integrate(f, 0.0, T, abs_tol);
}

double gpv_gamma(const GompertzParams& g, double rate, double m_star, double T) {
    g.require_valid();
    LC_REQUIRE(T > 0.0, "annuity term must be positive, got " << T);
    const double b = g.b;
    const double lam = lambda_at_mode(g, m_star);
    // Substituting u = b lam e^{s/b} turns the integral into
    //   b e^{b lam} (b lam)^{rate b} [Gamma(-rate b, b lam) - Gamma(-rate b, b lam e^{T/b})].
    const double c = b * lam;
    const double a = -rate * b;
    const double g_lo = upper_incomplete_gamma(a, c);
    const double g_hi = upper_incomplete_gamma(a, c * std::exp(T / b));
    return b * std::exp(c + rate * b * std::log(c)) * (g_lo - g_hi);
}

double gpv_annuity(const GompertzParams& g, double rate, double m_star, double T) {
    const double quad = gpv_quadrature(g, rate, m_star, T);
    const double closed = gpv_gamma(g, rate, m_star, T);
    LC_NUMERIC_REQUIRE(std::abs(quad - closed) <= 1e-8 * std::abs(quad),
                       "annuity cross-check failed: quadrature=" << quad << " gamma=" << closed
                                                                 << " (rate=" << rate << " T=" << T
                                                                 << ")");
    return quad;
}

double deferred_annuity(const GompertzParams& g, double r, double t, double T) {
    g.require_valid();
    LC_REQUIRE(t >= 0.0, "deferred_annuity: t must be non-negative");
    LC_REQUIRE(t <= T, "deferred_annuity: need t <= T, got t=" << t << " T=" << T);
    if (t == T)
        return 0.0;
    const double lam = g.lambda0();
    auto f = [&](double s) {
        return std::exp(-r * s - g.b * lam * std::expm1(s / g.b));
    };
    return integrate(f, t, T, 1e-11);
}

}  // namespace lifecycle
