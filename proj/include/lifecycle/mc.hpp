#pragma once

#include <cstdint>
#include <vector>

#include "lifecycle/calibration.hpp"
#include "lifecycle/hjb.hpp"
#include "lifecycle/yaari.hpp"

namespace lifecycle {

struct SimConfig {
    std::size_t n_paths = 100000;
    double dt_sim = 1.0 / 52.0;
    std::uint64_t seed = 20260819;
    bool antithetic = true;
    bool bernoulli_deaths = false;  // draw actual death times instead of e^{-int lambda}

    void require_valid() const {
        LC_REQUIRE(n_paths >= 1, "simulation needs at least one path");
        LC_REQUIRE(dt_sim > 0.0, "simulation step must be positive");
        if (antithetic)
            LC_REQUIRE(n_paths % 2 == 0, "antithetic simulation needs an even path count");
    }
};

struct MeanStdErr {
    double value = 0.0;
    double se = 0.0;
};

// Sample mean and standard error of survival to each requested time
// (times are snapped to the nearest simulation step). Hazard paths take
// exact lognormal increments with the drift frozen at step midpoints;
// the path integral of lambda is trapezoidal. With antithetics the
// standard error is computed over pair means.
std::vector<MeanStdErr> estimate_survival(const SfmModel& model, const SimConfig& cfg,
                                          const std::vector<double>& ts);

// Expected discounted utility of following c = scale * F / beta(t, lambda)
// until econ.D. Requires rho = r and no pension income.
MeanStdErr estimate_policy_value(const SfmModel& model, const PolicySurface& policy,
                                 const EconParams& econ, const SimConfig& cfg,
                                 double scale = 1.0);

struct PerturbationSide {
    double scale = 0.0;
    double value = 0.0;        // mean utility of the scaled policy
    double mean_diff = 0.0;    // unscaled minus scaled, path-paired
    double se_diff = 0.0;
    double z = 0.0;
    bool base_better = false;  // one-sided 99%: z > 2.326
};

struct PerturbationReport {
    double base_value = 0.0;
    double base_se = 0.0;
    PerturbationSide up, down;
    double min_wealth = 0.0;  // over every simulated step of every path
};

// Common-random-number comparison of the candidate policy against the
// same policy with consumption scaled by (1 +/- delta).
PerturbationReport perturbation_test(const SfmModel& model, const PolicySurface& policy,
                                     const EconParams& econ, const SimConfig& cfg,
                                     double delta = 0.05);

}  // namespace lifecycle
