#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>

#include "doctest.h"

#include "lifecycle/gompertz.hpp"
#include "lifecycle/reference_values.hpp"
#include "lifecycle/survival_curve.hpp"

using namespace lifecycle;

namespace {
const GompertzParams kG{};  // 65, 89.335, 9.5
}

TEST_CASE("survival table matches the reference to 1e-4") {
    for (std::size_t i = 0; i < ref::kNumAges; ++i) {
        const GompertzParams gi{ref::kAges[i], kG.m, kG.b};
        for (std::size_t j = i; j < ref::kNumAges; ++j) {
            const double p = survival(gi, ref::kAges[j] - ref::kAges[i]);
            CAPTURE(ref::kAges[i]);
            CAPTURE(ref::kAges[j]);
            CHECK(std::abs(p - ref::kSurvival[i][j]) <= 1e-4);
        }
        CHECK(std::abs(gi.lambda0() - ref::kHazard[i]) <= 1e-4);
    }
}

TEST_CASE("hazard is exponential with rate eta") {
    CHECK(kG.eta() == doctest::Approx(1.0 / 9.5).epsilon(1e-15));
    CHECK(kG.lambda0() == doctest::Approx(0.008124502804143447).epsilon(1e-14));
    for (double t : {0.0, 1.0, 7.3, 20.0, 54.0}) {
        CHECK(hazard(kG, t) == doctest::Approx(kG.lambda0() * std::exp(t / 9.5)).epsilon(1e-14));
        // d/dt ln lambda = eta
        const double h = 1e-5;
        const double slope = (std::log(hazard(kG, t + h)) - std::log(hazard(kG, t))) / h;
        CHECK(slope == doctest::Approx(kG.eta()).epsilon(1e-6));
    }
}

TEST_CASE("survival is the exponential of the integrated hazard") {
    // p(t) from direct trapezoid integration of lambda
    for (double t : {1.0, 10.0, 35.0}) {
        const int n = 200000;
        const double h = t / n;
        double acc = 0.5 * (hazard(kG, 0.0) + hazard(kG, t));
        for (int k = 1; k < n; ++k)
            acc += hazard(kG, k * h);
        CHECK(survival(kG, t) == doctest::Approx(std::exp(-acc * h)).epsilon(1e-9));
    }
}

TEST_CASE("multiplicative survival rule") {
    for (double t : {0.0, 3.0, 12.5, 30.0})
        for (double s : {0.0, 5.0, 17.5, 25.0}) {
            const double lhs = survival(kG, t + s);
            const GompertzParams aged{kG.x + t, kG.m, kG.b};
            const double rhs = survival(kG, t) * survival(aged, s);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
}

TEST_CASE("survival is strictly decreasing and in (0, 1]") {
    double prev = 1.0;
    CHECK(survival(kG, 0.0) == 1.0);
    for (double t = 0.5; t <= 60.0; t += 0.5) {
        const double p = survival(kG, t);
        CHECK(p > 0.0);
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("conditional survival normalizes at s = t") {
    CHECK(conditional_survival(kG, 10.0, 10.0) == 1.0);
    CHECK(conditional_survival(kG, 10.0, 20.0) ==
          doctest::Approx(survival(kG, 20.0) / survival(kG, 10.0)).epsilon(1e-14));
    CHECK_THROWS_AS(conditional_survival(kG, 20.0, 10.0), ValidationError);
}

TEST_CASE("shifted mode reproduces the gamma-power of survival") {
    for (double gamma : {0.5, 1.0, 4.0, 10.0}) {
        const GompertzParams shifted{kG.x, shifted_mode(kG, gamma), kG.b};
        for (double t : {1.0, 10.0, 30.0, 55.0})
            CHECK(survival(shifted, t) ==
                  doctest::Approx(std::pow(survival(kG, t), 1.0 / gamma)).epsilon(1e-12));
    }
}

TEST_CASE("analytic curve derivatives match finite differences") {
    const GompertzSurvival curve(kG, 55.0);
    const double h = 1e-5;
    for (double t : {0.5, 5.0, 20.0, 40.0}) {
        const double fd1 = (curve.p(t + h) - curve.p(t - h)) / (2 * h);
        const double fd2 = (curve.p(t + h) - 2 * curve.p(t) + curve.p(t - h)) / (h * h);
        CHECK(curve.p_t(t) == doctest::Approx(fd1).epsilon(1e-8));
        CHECK(curve.p_tt(t) == doctest::Approx(fd2).epsilon(1e-4));
        // for Gompertz the log-hazard slope is exactly eta
        CHECK(curve.log_hazard_slope(t) == doctest::Approx(kG.eta()).epsilon(1e-12));
        // and -p_t/p is the hazard
        CHECK(-curve.p_t(t) / curve.p(t) == doctest::Approx(hazard(kG, t)).epsilon(1e-12));
    }
}

TEST_CASE("tabulated curve reproduces a sampled Gompertz") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "lifecycle_test_survival.csv";
    {
        std::ofstream out(path);
        out << "t,p\n";
        for (double t = 0.0; t <= 55.0 + 1e-9; t += 0.25)
            out << t << "," << std::setprecision(17) << survival(kG, t) << "\n";
    }
    const auto curve = load_survival_csv(path.string());
    for (double t : {0.3, 7.7, 23.1, 49.9}) {
        CHECK(curve->p(t) == doctest::Approx(survival(kG, t)).epsilon(1e-7));
        CHECK(curve->log_hazard_slope(t) == doctest::Approx(kG.eta()).epsilon(5e-2));
    }
    fs::remove(path);
}

TEST_CASE("tabulated curve rejects malformed input") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "lifecycle_test_bad.csv";
    auto write = [&](const char* text) {
        std::ofstream out(path);
        out << text;
    };
    write("t,p\n0,1\n1,1.2\n");  // survival above 1
    CHECK_THROWS_AS(load_survival_csv(path.string()), ValidationError);
    write("t,p\n0,1\n1,0.9\n0.5,0.95\n");  // non-monotone time
    CHECK_THROWS_AS(load_survival_csv(path.string()), ValidationError);
    write("time,prob\n0,1\n1,0.9\n");  // wrong header
    CHECK_THROWS_AS(load_survival_csv(path.string()), ValidationError);
    write("t,p\n0,1\n1,0.95\n2,0.97\n");  // increasing survival
    CHECK_THROWS_AS(load_survival_csv(path.string()), ValidationError);
    fs::remove(path);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((GompertzParams{65.0, 89.335, 0.0}.require_valid()), ValidationError);
    CHECK_THROWS_AS((GompertzParams{-1.0, 89.335, 9.5}.require_valid()), ValidationError);
    CHECK_THROWS_AS(hazard(kG, -0.5), ValidationError);
    CHECK_THROWS_AS(survival(kG, -0.5), ValidationError);
}
