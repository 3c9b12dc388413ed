#include <cmath>

#include "doctest.h"

#include "lifecycle/annuity.hpp"
#include "lifecycle/reference_values.hpp"
#include "lifecycle/yaari.hpp"

using namespace lifecycle;

namespace {
const GompertzParams kG{};

EconParams base_econ(double gamma) {
    EconParams econ;
    econ.r = 0.025;
    econ.rho = 0.025;
    econ.gamma = gamma;
    econ.pi0 = 0.0;
    econ.F0 = 100.0;
    econ.D = 55.0;
    return econ;
}
}  // namespace

TEST_CASE("initial consumption matches the benchmarks") {
    const auto p4 = consumption_path(base_econ(4.0), kG);
    const auto p8 = consumption_path(base_econ(8.0), kG);
    CHECK(std::abs(p4.c0 - ref::kInitialConsumptionGamma4) <= 0.005);
    CHECK(std::abs(p8.c0 - ref::kInitialConsumptionGamma8) <= 0.005);

    for (std::size_t k = 0; k < ref::kNumPathPoints; ++k)
        CHECK(std::abs(p4(ref::kPathTimesGamma4[k]) - ref::kPathConsumptionGamma4[k]) <= 0.005);
}

TEST_CASE("budget constraint: initial value, depletion, ODE residual") {
    for (double gamma : {0.5, 1.0, 4.0, 8.0}) {
        const auto econ = base_econ(gamma);
        const auto path = consumption_path(econ, kG);
        CHECK(wealth_path(econ, kG, path, 0.0) == doctest::Approx(100.0).epsilon(1e-12));
        CHECK(std::abs(wealth_path(econ, kG, path, 55.0)) <= 1e-6 * econ.F0);

        const double h = 1e-4;
        for (double t : {1.0, 10.0, 30.0, 50.0}) {
            const double fp = (wealth_path(econ, kG, path, t + h) -
                               wealth_path(econ, kG, path, t - h)) /
                              (2 * h);
            const double resid =
                fp - (econ.r * wealth_path(econ, kG, path, t) + econ.pi0 - path(t));
            CHECK(std::abs(resid) <= 1e-6 * econ.F0);
        }
    }
}

TEST_CASE("Euler-Lagrange second-order form holds along the wealth path") {
    const auto econ = base_econ(4.0);
    const auto path = consumption_path(econ, kG);
    const double h = 1e-3;
    for (int i = 1; i < 100; ++i) {
        const double t = 55.0 * i / 100.0;
        const double fm = wealth_path(econ, kG, path, t - h);
        const double f0 = wealth_path(econ, kG, path, t);
        const double fp = wealth_path(econ, kG, path, t + h);
        const double ft = (fp - fm) / (2 * h);
        const double ftt = (fp - 2 * f0 + fm) / (h * h);
        const double k = k_rate(econ, kG, t);
        const double resid = ftt - (k + econ.r) * ft + econ.r * k * f0 + k * econ.pi0;
        CHECK(std::abs(resid) <= 1e-6 * econ.F0);
    }
}

TEST_CASE("consumption path solves c' = k c") {
    const auto econ = base_econ(4.0);
    const auto path = consumption_path(econ, kG);
    const double h = 1e-5;
    for (double t : {0.5, 5.0, 20.0, 45.0}) {
        const double cp = (path(t + h) - path(t - h)) / (2 * h);
        const double k = k_rate(econ, kG, t);
        CHECK(std::abs(k * path(t) - cp) <= 1e-8 * std::abs(cp));
    }
}

TEST_CASE("normalized path rises pointwise with gamma") {
    const auto lo = consumption_path(base_econ(2.0), kG);
    const auto mid = consumption_path(base_econ(4.0), kG);
    const auto hi = consumption_path(base_econ(8.0), kG);
    for (double t : {1.0, 10.0, 30.0, 54.0}) {
        CHECK(lo(t) / lo.c0 < mid(t) / mid.c0);
        CHECK(mid(t) / mid.c0 < hi(t) / hi.c0);
    }
}

TEST_CASE("withdrawal rate decreases with risk aversion and matches the sigma=0 row") {
    double prev = 1e300;
    for (std::size_t gi = 0; gi < ref::kNumGammas; ++gi) {
        EconParams econ = base_econ(ref::kWithdrawalGammas[gi]);
        econ.r = econ.rho = 0.02;
        econ.D = 30.0;
        const double pct = 100.0 * iwr_dfm(econ, kG);
        CHECK(pct < prev);
        CHECK(std::abs(pct - ref::kWithdrawalPct[0][gi]) <= 0.03);
        prev = pct;
    }
}

TEST_CASE("withdrawal rate is scale invariant in wealth") {
    for (double f0 : {50.0, 100.0, 400.0}) {
        EconParams econ = base_econ(3.0);
        econ.F0 = f0;
        const double iwr = iwr_dfm(econ, kG);
        EconParams unit = base_econ(3.0);
        unit.F0 = 1.0;
        CHECK(iwr == doctest::Approx(iwr_dfm(unit, kG)).epsilon(1e-14));
        // and c0 is exactly linear in F0
        CHECK(consumption_path(econ, kG).c0 ==
              doctest::Approx(f0 * consumption_path(unit, kG).c0).epsilon(1e-14));
    }
}

TEST_CASE("vanishing hazard reduces to the certain annuity") {
    const GompertzParams immortal{65.0, 500.0, 9.5};
    const auto econ = base_econ(4.0);
    const auto path = consumption_path(econ, immortal);
    const double certain = econ.F0 * econ.r / (1.0 - std::exp(-econ.r * econ.D));
    CHECK(path.c0 == doctest::Approx(certain).epsilon(1e-10));
    for (double t : {5.0, 25.0, 54.0})
        CHECK(path(t) == doctest::Approx(path.c0).epsilon(1e-10));
}

TEST_CASE("parameter and domain validation") {
    EconParams econ = base_econ(4.0);
    econ.pi0 = 1.0;  // pension without a depletion time
    CHECK_THROWS_AS(consumption_path(econ, kG), ValidationError);

    EconParams bad = base_econ(-1.0);
    CHECK_THROWS_AS(consumption_path(bad, kG), ValidationError);

    const auto ok = base_econ(4.0);
    const auto path = consumption_path(ok, kG);
    CHECK_THROWS_AS(wealth_path(ok, kG, path, -1.0), ValidationError);
    CHECK_THROWS_AS(wealth_path(ok, kG, path, 56.0), ValidationError);

    EconParams tilted = base_econ(4.0);
    tilted.rho = 0.03;  // iwr needs rho = r
    CHECK_NOTHROW(consumption_path(tilted, kG));
    CHECK_THROWS_AS(iwr_dfm(tilted, kG), ValidationError);
}

TEST_CASE("consumption declines whenever hazard outweighs the rate wedge") {
    // with r = rho the slope is -lambda/gamma < 0 everywhere
    const auto econ = base_econ(4.0);
    const auto path = consumption_path(econ, kG);
    double prev = path(0.0);
    for (double t = 1.0; t <= 55.0; t += 1.0) {
        CHECK(path(t) < prev);
        prev = path(t);
    }
}
