#pragma once

#include <cstddef>
#include <vector>

#include "lifecycle/gompertz.hpp"
#include "lifecycle/interp.hpp"
#include "lifecycle/survival_curve.hpp"
#include "lifecycle/tridiag.hpp"

namespace lifecycle {

// Tabulated hazard drift mu(t) with clamped monotone-cubic evaluation.
class DriftCurve {
  public:
    DriftCurve() = default;
    DriftCurve(std::vector<double> ts, std::vector<double> mus)
        : interp_(std::move(ts), std::move(mus)) {}

    double operator()(double t) const { return interp_(t); }
    const std::vector<double>& times() const { return interp_.abscissas(); }
    const std::vector<double>& values() const { return interp_.ordinates(); }

    static DriftCurve constant(double mu, double horizon) {
        return DriftCurve({0.0, horizon}, {mu, mu});
    }

  private:
    MonotoneCubic interp_;
};

// Lognormal hazard model d(ln lambda) = (mu(t) - sigma^2/2) dt + sigma dB.
struct SfmModel {
    double lambda0 = 0.0;
    double sigma = 0.0;
    double D = 55.0;
    DriftCurve mu;
};

struct CalibGrid {
    std::size_t nodes = 3200;       // lambda-grid size target
    double dt = 1.0 / 2920.0;       // forward-solver time step, years
    double floor_ratio = 1e-3;      // lambda_min = lambda0 * floor_ratio
    double lambda_cap = 20.0;       // per year; mass above is negligible
    double t0 = 1e-3;               // delta mollification horizon, years

    void require_valid() const {
        LC_REQUIRE(nodes >= 16, "calibration grid too small: " << nodes);
        LC_REQUIRE(dt > 0.0, "calibration dt must be positive");
        LC_REQUIRE(floor_ratio > 0.0 && floor_ratio < 1.0, "floor ratio must be in (0,1)");
        LC_REQUIRE(t0 > 0.0, "mollification time must be positive");
    }
};

// Uniform grid in y = ln(lambda) snapped so that ln(lambda_ref) is exactly
// a node (index `anchor`); spans [lambda_ref*floor_ratio, >= lambda_cap].
struct LogGrid {
    std::vector<double> y;
    double dy = 0.0;
    std::size_t anchor = 0;
};

LogGrid build_log_grid(double lambda_ref, double floor_ratio, double lambda_cap,
                       std::size_t n_target);

// Survival-weighted density of y = ln(lambda): integrates to the survival
// probability, never to 1. Values are per unit y; moments below are the
// pseudo-moments in lambda.
struct PseudoDensity {
    std::vector<double> y;
    std::vector<double> q;
    double dy = 0.0;
    double t = 0.0;

    double survival() const;       // integral q dy
    double moment1() const;        // integral lambda q dy
    double moment2() const;        // integral lambda^2 q dy
};

// Forward solver for q_t = -d_y[(mu - s^2/2) q] + (s^2/2) q_yy - e^y q on
// the log grid: exponentially fitted (Scharfetter-Gummel) implicit flux,
// zero flux at both ends, killing applied exactly in Strang halves.
class ForwardSolver {
  public:
    ForwardSolver(double lambda0, double sigma, const CalibGrid& cfg);

    const LogGrid& grid() const { return grid_; }
    double sigma() const { return sigma_; }

    // Delta at lambda_point mollified by one exact lognormal step of
    // length t0 under local drift mu_local, discounted by the killing
    // accrued along it.
    PseudoDensity point_density(double t_start, double lambda_point, double mu_local,
                                double t0) const;

    void step_forward(PseudoDensity& q, double mu, double dt) const;

    // Drift that keeps the model's conditional expected hazard on the
    // target's hazard curve: mu = d/dt ln(-p_t/p) + Var[lambda|alive]/E[lambda|alive].
    double extract_mu(const PseudoDensity& q, const SurvivalCurve& target) const;

  private:
    double lambda0_, sigma_;
    CalibGrid cfg_;
    LogGrid grid_;
    std::vector<double> lam_, lam2_;

    mutable std::vector<double> lower_, diag_, upper_, rhs_, next_;
    mutable TridiagWorkspace ws_;
    mutable std::vector<double> kill_half_;
    mutable double kill_dt_ = -1.0;
};

struct CalibrationResult {
    SfmModel model;
    std::vector<double> ts;
    std::vector<double> survival_model;
    std::vector<double> survival_target;
    double max_abs_err = 0.0;
    double max_top_node_mass = 0.0;  // truncation diagnostic
    MonotoneCubic survival;          // model survival, interpolated
};

CalibrationResult calibrate(const GompertzParams& g, double sigma, const CalibGrid& cfg = {},
                            double horizon = 55.0);

// Survival of the calibrated model restarted from hazard `lambda` at time
// t, tabulated on [t, D]. The drift stays frozen at the calibrated curve.
MonotoneCubic forward_survival_curve(const SfmModel& model, const CalibGrid& cfg, double t,
                                     double lambda);

}  // namespace lifecycle
