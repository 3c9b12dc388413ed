#include <cmath>
#include <cstddef>
#include <vector>

#include "doctest.h"
#include "lifecycle/annuity.hpp"
#include "lifecycle/calibration.hpp"
#include "lifecycle/gompertz.hpp"
#include "lifecycle/hjb.hpp"
#include "lifecycle/quadrature.hpp"
#include "lifecycle/reference_values.hpp"
#include "lifecycle/yaari.hpp"

using namespace lifecycle;

namespace {

const GompertzParams kG{65.0, 89.335, 9.5};
constexpr double kR = 0.02;
constexpr double kT = 30.0;

EconParams econ30(double gamma) {
    EconParams e;
    e.r = kR;
    e.rho = kR;
    e.gamma = gamma;
    e.D = kT;
    return e;
}

HjbGrid lean_grid() {
    HjbGrid g;
    g.store_every = 0;  // keep only the t = 0 slice
    return g;
}

// Calibrations are the expensive inputs; solve each once per process.
const CalibrationResult& calib0() {
    static const CalibrationResult res = calibrate(kG, 0.0, CalibGrid{}, 55.0);
    return res;
}

const CalibrationResult& calib015() {
    static const CalibrationResult res = calibrate(kG, 0.15, CalibGrid{}, 55.0);
    return res;
}

const PolicySurface& surf3() {
    static const PolicySurface s = solve_policy(calib015().model, econ30(3.0), HjbGrid{});
    return s;
}

double annuity_certain(double r, double tau) { return -std::expm1(-r * tau) / r; }

}  // namespace

TEST_CASE("zero-volatility policy solve reproduces the deterministic closed form") {
    for (double gamma : {0.5, 3.0, 10.0}) {
        CAPTURE(gamma);
        const EconParams econ = econ30(gamma);
        const double pde = solve_policy(calib0().model, econ, lean_grid()).initial_fraction();
        const double closed = iwr_dfm(econ, kG);
        CHECK(std::abs(pde - closed) <= 3e-4);
    }
}

TEST_CASE("policy error shrinks at first order under joint grid refinement") {
    const EconParams econ = econ30(3.0);
    const double closed = iwr_dfm(econ, kG);

    HjbGrid coarse = lean_grid();
    coarse.nodes = 800;
    coarse.dt = 2.0 / 365.0;
    HjbGrid fine = lean_grid();
    fine.nodes = 1600;
    fine.dt = 1.0 / 365.0;

    const double err_c =
        std::abs(solve_policy(calib0().model, econ, coarse).initial_fraction() - closed);
    const double err_f =
        std::abs(solve_policy(calib0().model, econ, fine).initial_fraction() - closed);
    CHECK(err_f < err_c);
    CHECK(err_c / err_f >= 1.8);
}

TEST_CASE("stochastic-hazard withdrawal fractions hit the published cells") {
    const auto& calib = calib015();
    // sigma = 0.15 row; columns follow ref::kWithdrawalGammas
    const double got_half =
        100.0 * solve_policy(calib.model, econ30(0.5), lean_grid()).initial_fraction();
    const double got_three =
        100.0 * solve_policy(calib.model, econ30(3.0), lean_grid()).initial_fraction();
    const double got_log = 100.0 * log_utility_fraction(calib.survival, kR, 0.0, kT);
    CHECK(std::abs(got_half - ref::kWithdrawalPct[1][0]) <= 0.05);
    CHECK(std::abs(got_log - ref::kWithdrawalPct[1][1]) <= 0.05);
    CHECK(std::abs(got_three - ref::kWithdrawalPct[1][3]) <= 0.05);
}

TEST_CASE("log-utility rule matches the gamma = 1 annuity closed form at sigma = 0") {
    const double closed = iwr_dfm(econ30(1.0), kG);
    const double frac = log_utility_fraction(calib0().survival, kR, 0.0, kT);
    CHECK(frac == doctest::Approx(closed).epsilon(1e-5));

    // at interior t the rule is the reciprocal forward annuity
    for (double t : {5.0, 10.0, 20.0}) {
        CAPTURE(t);
        const double lhs = 1.0 / log_utility_fraction(calib0().survival, kR, t, kT);
        const double rhs = std::exp(kR * t) * forward_annuity(calib0(), kR, t, kT);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    }
}

TEST_CASE("policy solve approaches the log-utility rule as gamma approaches one") {
    const auto& calib = calib015();
    const double log_frac = log_utility_fraction(calib.survival, kR, 0.0, kT);
    const double lo = solve_policy(calib.model, econ30(1.02), lean_grid()).initial_fraction();
    const double hi = solve_policy(calib.model, econ30(0.98), lean_grid()).initial_fraction();
    // withdrawal fraction is decreasing in gamma near one
    CHECK(hi > log_frac);
    CHECK(log_frac > lo);
    CHECK(std::abs(hi - log_frac) <= 1e-3);
    CHECK(std::abs(lo - log_frac) <= 1e-3);
}

TEST_CASE("forward annuity obeys the tower identity and elementary bounds") {
    const auto& calib = calib015();
    const double t = 10.0;
    const double whole = forward_annuity(calib, kR, 0.0, kT);
    const double head = forward_annuity(calib, kR, 0.0, t);
    const double tail = forward_annuity(calib, kR, t, kT);
    CHECK(whole == doctest::Approx(head + calib.survival(t) * tail).epsilon(1e-8));

    CHECK(forward_annuity(calib, kR, kT, kT) == 0.0);
    CHECK(whole > head);
    // positive hazard keeps every annuity below the certain one
    CHECK(whole < annuity_certain(kR, kT));
    CHECK(std::exp(kR * t) * tail < annuity_certain(kR, kT - t));
}

TEST_CASE("forward annuity at sigma = 0 is the deferred annuity over current survival") {
    for (double t : {0.0, 10.0, 20.0}) {
        CAPTURE(t);
        const double fwd = forward_annuity(calib0(), kR, t, kT);
        const double closed = deferred_annuity(kG, kR, t, kT) / survival(kG, t);
        CHECK(fwd == doctest::Approx(closed).epsilon(1e-6));
    }
}

TEST_CASE("theorem ordering of withdrawal fractions across gamma") {
    const auto rows =
        compare_theorem1(calib015(), kG, {0.5, 1.0, 3.0, 10.0}, kR, kT, lean_grid());
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        CAPTURE(row.gamma);
        CHECK(row.ordering_ok);
    }
    CHECK(rows[0].c_sfm < rows[0].c_dfm);                  // gamma < 1
    CHECK(std::abs(rows[1].c_sfm - rows[1].c_dfm) <= 2e-4);  // gamma = 1
    CHECK(rows[2].c_sfm > rows[2].c_dfm);                  // gamma > 1
    CHECK(rows[3].c_sfm > rows[3].c_dfm);
    CHECK(rows[2].c_sfm == doctest::Approx(ref::kWithdrawalPct[1][3] / 100.0).epsilon(1e-4));
}

TEST_CASE("policy surface boundary structure") {
    const auto& surf = surf3();
    const auto& ts = surf.slice_times();
    REQUIRE(ts.size() >= 2);
    CHECK(ts.front() == 0.0);
    CHECK(ts.back() == doctest::Approx(kT).epsilon(1e-12));
    for (std::size_t j = 1; j < ts.size(); ++j)
        CHECK(ts[j] > ts[j - 1]);

    // terminal condition is stored exactly
    for (double b : surf.slices().back())
        CHECK(b == 0.0);
    CHECK(surf.beta(kT, calib015().model.lambda0) == 0.0);
    CHECK_THROWS_AS(surf.consumption_fraction(kT, 0.01), NumericError);

    // hazard floor is pinned to the annuity-certain line
    const double lam_floor = calib015().model.lambda0 * 1e-3;
    CHECK(surf.beta(0.0, 0.5 * lam_floor) ==
          doctest::Approx(annuity_certain(kR, kT)).epsilon(1e-12));

    // zero top slope: the last two nodes of a slice coincide
    const auto& first = surf.slices().front();
    CHECK(first[first.size() - 1] == doctest::Approx(first[first.size() - 2]).epsilon(1e-12));
}

TEST_CASE("policy surface evaluation identities") {
    const auto& surf = surf3();
    const double lam0 = calib015().model.lambda0;

    CHECK(surf.gamma() == 3.0);
    CHECK(surf.initial_fraction() == surf.consumption_fraction(0.0, lam0));

    for (double t : {0.0, 7.123, 15.0, 29.5}) {
        for (double lam : {0.005, lam0, 0.05, 0.4}) {
            CAPTURE(t);
            CAPTURE(lam);
            const double b = surf.beta(t, lam);
            CHECK(surf.consumption_fraction(t, lam) * b == doctest::Approx(1.0).epsilon(1e-14));
            std::size_t j;
            double w;
            surf.time_weight(t, j, w);
            CHECK(surf.beta_on_slice_pair(j, w, std::log(lam)) == b);
        }
    }
}

TEST_CASE("beta declines as the hazard rises") {
    const double lam0 = calib015().model.lambda0;
    auto non_increasing = [&](const PolicySurface& surf, double t) {
        double prev = surf.beta(t, lam0 * 1e-2);
        for (double f = 1e-2; f <= 2e3; f *= 1.6) {
            const double b = surf.beta(t, lam0 * f);
            CHECK(b <= prev + 1e-9);
            prev = b;
        }
    };
    non_increasing(surf3(), 0.0);
    non_increasing(surf3(), 15.0);
    const PolicySurface half = solve_policy(calib015().model, econ30(0.5), lean_grid());
    non_increasing(half, 0.0);
}

TEST_CASE("policy preconditions are validated") {
    const SfmModel& model = calib0().model;

    EconParams bad = econ30(3.0);
    bad.rho = 0.03;
    CHECK_THROWS_AS(solve_policy(model, bad, lean_grid()), ValidationError);

    bad = econ30(3.0);
    bad.pi0 = 1.0;
    bad.tau = 25.0;
    CHECK_THROWS_AS(solve_policy(model, bad, lean_grid()), ValidationError);

    bad = econ30(1.0);
    CHECK_THROWS_AS(solve_policy(model, bad, lean_grid()), ValidationError);

    bad = econ30(3.0);
    bad.D = model.D + 1.0;
    CHECK_THROWS_AS(solve_policy(model, bad, lean_grid()), ValidationError);

    HjbGrid tiny;
    tiny.nodes = 4;
    CHECK_THROWS_AS(solve_policy(model, econ30(3.0), tiny), ValidationError);

    CHECK_THROWS_AS(log_utility_fraction(calib0().survival, kR, kT, kT), ValidationError);
    CHECK_THROWS_AS(forward_annuity(calib0(), kR, -1.0, kT), ValidationError);
    CHECK_THROWS_AS(forward_annuity(calib0(), kR, 20.0, 10.0), ValidationError);
    CHECK_THROWS_AS(forward_annuity(calib0(), kR, 0.0, model.D + 1.0), ValidationError);
}
