#pragma once

#include <cstddef>
#include <vector>

#include "lifecycle/calibration.hpp"
#include "lifecycle/yaari.hpp"

namespace lifecycle {

struct HjbGrid {
    std::size_t nodes = 1600;
    double dt = 1.0 / 365.0;
    double floor_ratio = 1e-3;
    double lambda_cap = 20.0;
    std::size_t store_every = 7;  // 0 keeps only the t = 0 slice

    void require_valid() const {
        LC_REQUIRE(nodes >= 16, "policy grid too small: " << nodes);
        LC_REQUIRE(dt > 0.0, "policy dt must be positive");
    }
};

// Discretized wealth-to-consumption ratio beta(t, lambda); the optimal
// consumption rule is c = F / beta. Slices are stored at increasing t
// with t = 0 and t = T always present; beta(T, .) = 0.
class PolicySurface {
  public:
    PolicySurface(std::vector<double> slice_times, std::vector<double> ygrid,
                  std::vector<std::vector<double>> beta, double gamma, double lambda_ref);

    double beta(double t, double lambda) const;
    double consumption_fraction(double t, double lambda) const;

    // Withdrawal fraction at the anchor hazard, time zero.
    double initial_fraction() const;

    double gamma() const { return gamma_; }
    const std::vector<double>& slice_times() const { return ts_; }
    const std::vector<double>& ygrid() const { return y_; }
    const std::vector<std::vector<double>>& slices() const { return beta_; }

    // Time bracketing for hot loops: slice index j and weight w such that
    // beta(t, .) = (1-w) * slice[j] + w * slice[j+1].
    void time_weight(double t, std::size_t& j, double& w) const;
    double beta_on_slice_pair(std::size_t j, double w, double y) const;

  private:
    std::vector<double> ts_, y_;
    std::vector<std::vector<double>> beta_;
    double gamma_, lambda_ref_, y0_, dy_;
};

// Backward IMEX finite-difference solve of the quasi-linear equation for
// beta in y = ln(lambda):
//   beta_t + 1 - (r + e^y/gamma) beta + (mu - s^2/2) beta_y
//          + (s^2/2) beta_yy + ((gamma-1) s^2 / (2 beta)) beta_y^2 = 0
// from beta(T, .) = 0, with the lambda -> 0 line pinned to the annuity
// ODE solution and zero slope at the upper boundary. econ.D is the
// policy horizon T; requires rho = r, pi0 = 0, gamma != 1.
PolicySurface solve_policy(const SfmModel& model, const EconParams& econ, const HjbGrid& grid);

// Logarithmic utility consumes the inverse annuity factor; no PDE.
// The curve argument is the model survival S(s) from (0, lambda0).
double log_utility_fraction(const MonotoneCubic& model_survival, double r, double t, double T);

// Same rule from an arbitrary state (t, lambda): one frozen-drift forward
// solve supplies the conditional survival.
double log_utility_policy(const SfmModel& model, const CalibGrid& cfg, double r, double t,
                          double lambda, double T);

struct Theorem1Row {
    double gamma = 0.0;
    double c_sfm = 0.0;  // fraction per year
    double c_dfm = 0.0;
    bool ordering_ok = false;
};

// Time-zero withdrawal fractions under both mortality models for each
// gamma, with the predicted ordering (higher under the stochastic model
// iff gamma > 1, equal at gamma = 1) checked to `equal_tol`.
std::vector<Theorem1Row> compare_theorem1(const CalibrationResult& calib,
                                          const GompertzParams& g,
                                          const std::vector<double>& gammas, double r, double T,
                                          const HjbGrid& grid, double equal_tol = 2e-4);

// integral_t^T e^{-rs} E[p(t, s, lambda(t))] ds with the expectation over
// the calibrated pseudo-density conditional on survival. By linearity of
// the killed forward flow this is integral e^{-rs} S(s) ds / S(t) on the
// model survival curve.
double forward_annuity(const CalibrationResult& calib, double r, double t, double T);

}  // namespace lifecycle
