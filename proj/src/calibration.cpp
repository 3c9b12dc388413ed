#include "lifecycle/calibration.hpp"

#include <algorithm>
#include <cmath>

namespace lifecycle {

namespace {

// B(w) = w / (e^w - 1), the Bernoulli function of exponential fitting.
// B(-w) = B(w) + w; both stay positive, which makes the implicit step an
// M-matrix for every cell Peclet number.
double bernoulli_b(double w) {
    if (std::abs(w) < 1e-10)
        return 1.0 - 0.5 * w;
    if (w > 500.0)
        return 0.0;
    if (w < -500.0)
        return -w;
    return w / std::expm1(w);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

LogGrid build_log_grid(double lambda_ref, double floor_ratio, double lambda_cap,
                       std::size_t n_target) {
    LC_REQUIRE(lambda_ref > 0.0, "log grid: reference hazard must be positive");
    LC_REQUIRE(lambda_cap > lambda_ref, "log grid: cap must exceed the reference hazard");
    const double span_lo = -std::log(floor_ratio);
    const double span_hi = std::log(lambda_cap / lambda_ref);
    const double frac = span_lo / (span_lo + span_hi);
    const auto k_lo = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                   std::lround(frac * double(n_target))));
    LogGrid grid;
    grid.dy = span_lo / double(k_lo);
    const auto k_hi = static_cast<std::size_t>(std::ceil(span_hi / grid.dy));
    grid.anchor = k_lo;
    const double y0 = std::log(lambda_ref);
    grid.y.resize(k_lo + k_hi + 1);
    for (std::size_t i = 0; i < grid.y.size(); ++i)
        grid.y[i] = y0 + (double(i) - double(k_lo)) * grid.dy;
    return grid;
}

double PseudoDensity::survival() const {
    double s = 0.0;
    for (double v : q)
        s += v;
    return s * dy;
}

double PseudoDensity::moment1() const {
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
        s += q[i] * std::exp(y[i]);
    return s * dy;
}

double PseudoDensity::moment2() const {
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
        s += q[i] * std::exp(2.0 * y[i]);
    return s * dy;
}

ForwardSolver::ForwardSolver(double lambda0, double sigma, const CalibGrid& cfg)
    : lambda0_(lambda0), sigma_(sigma), cfg_(cfg) {
    LC_REQUIRE(lambda0 > 0.0, "forward solver: lambda0 must be positive");
    LC_REQUIRE(sigma >= 0.0, "forward solver: sigma must be non-negative");
    cfg.require_valid();
    grid_ = build_log_grid(lambda0, cfg.floor_ratio, cfg.lambda_cap, cfg.nodes);
    const std::size_t n = grid_.y.size();
    lam_.resize(n);
    lam2_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        lam_[i] = std::exp(grid_.y[i]);
        lam2_[i] = lam_[i] * lam_[i];
    }
    lower_.resize(n);
    diag_.resize(n);
    upper_.resize(n);
    rhs_.resize(n);
    next_.resize(n);
}

PseudoDensity ForwardSolver::point_density(double t_start, double lambda_point, double mu_local,
                                           double t0) const {
    LC_REQUIRE(t0 > 0.0, "point density: mollification time must be positive");
    LC_REQUIRE(lambda_point > 0.0, "point density: hazard must be positive");
    PseudoDensity out;
    out.y = grid_.y;
    out.dy = grid_.dy;
    out.t = t_start + t0;
    out.q.assign(grid_.y.size(), 0.0);

    const double mass = std::exp(-lambda_point * t0);
    const double mean = std::log(lambda_point) + (mu_local - 0.5 * sigma_ * sigma_) * t0;

    if (sigma_ == 0.0) {
        // Deterministic limit: a grid delta at the transported location.
        const double pos = (mean - grid_.y.front()) / grid_.dy;
        auto idx = static_cast<std::size_t>(std::clamp(
            std::lround(pos), long(0), long(grid_.y.size() - 1)));
        out.q[idx] = mass / grid_.dy;
        return out;
    }

    // Cell averages of the exact one-step lognormal law.
    const double sd = sigma_ * std::sqrt(t0);
    double cdf_left = normal_cdf((grid_.y.front() - 0.5 * grid_.dy - mean) / sd);
    for (std::size_t i = 0; i < out.q.size(); ++i) {
        const double cdf_right = normal_cdf((grid_.y[i] + 0.5 * grid_.dy - mean) / sd);
        out.q[i] = mass * (cdf_right - cdf_left) / grid_.dy;
        cdf_left = cdf_right;
    }
    return out;
}

void ForwardSolver::step_forward(PseudoDensity& q, double mu, double dt) const {
    LC_REQUIRE(dt > 0.0, "step_forward: dt must be positive");
    const std::size_t n = q.q.size();
    LC_REQUIRE(n == grid_.y.size(), "step_forward: density not on this solver's grid");

    if (kill_dt_ != dt) {
        kill_half_.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            kill_half_[i] = std::exp(-0.5 * lam_[i] * dt);
        kill_dt_ = dt;
    }

    for (std::size_t i = 0; i < n; ++i)
        q.q[i] *= kill_half_[i];

    const double dy = grid_.dy;
    const double adv = mu - 0.5 * sigma_ * sigma_;
    const double dif = 0.5 * sigma_ * sigma_;
    double cm, cp;  // couplings to the lower and upper neighbour
    if (dif > 0.0) {
        const double w = adv * dy / dif;
        cm = dif / (dy * dy) * bernoulli_b(-w);
        cp = dif / (dy * dy) * bernoulli_b(w);
    } else {
        cm = std::max(adv, 0.0) / dy;
        cp = std::max(-adv, 0.0) / dy;
    }

    for (std::size_t i = 0; i < n; ++i) {
        lower_[i] = -dt * cm;
        upper_[i] = -dt * cp;
        diag_[i] = 1.0 + dt * (cm + cp);
        rhs_[i] = q.q[i];
    }
    // Zero-flux ends: drop the boundary face from the divergence.
    diag_[0] = 1.0 + dt * cm;
    diag_[n - 1] = 1.0 + dt * cp;

    solve_tridiagonal(lower_, diag_, upper_, rhs_, next_, ws_);

    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = next_[i] * kill_half_[i];
        LC_NUMERIC_REQUIRE(v > -1e-12, "step_forward: negative density " << v << " at node " << i);
        if (v < 0.0)
            v = 0.0;
        q.q[i] = v;
        mass += v;
    }
    LC_NUMERIC_REQUIRE(mass * dy <= 1.0 + 1e-12, "step_forward: mass exceeds 1");
    q.t += dt;
}

double ForwardSolver::extract_mu(const PseudoDensity& q, const SurvivalCurve& target) const {
    const std::size_t n = q.q.size();
    double s = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = q.q[i];
        s += v;
        m1 += v * lam_[i];
        m2 += v * lam2_[i];
    }
    s *= q.dy;
    m1 *= q.dy;
    m2 *= q.dy;
    LC_NUMERIC_REQUIRE(m1 > 1e-300, "extract_mu: survival numerically extinct at t=" << q.t);
    const double mean = m1 / s;
    const double var = std::max(0.0, m2 / s - mean * mean);
    return target.log_hazard_slope(q.t) + var / mean;
}

CalibrationResult calibrate(const GompertzParams& g, double sigma, const CalibGrid& cfg,
                            double horizon) {
    g.require_valid();
    LC_REQUIRE(sigma >= 0.0, "calibrate: sigma must be non-negative");
    LC_REQUIRE(horizon > 0.0, "calibrate: horizon must be positive");
    GompertzSurvival target(g, horizon);

    CalibrationResult res;
    res.model.lambda0 = g.lambda0();
    res.model.sigma = sigma;
    res.model.D = horizon;

    if (sigma == 0.0) {
        // The deterministic limit needs no solve: mu is the Gompertz
        // log-hazard slope and survival matches by construction.
        res.model.mu = DriftCurve::constant(g.eta(), horizon);
        const auto n = static_cast<std::size_t>(std::ceil(horizon / cfg.dt / 64.0)) + 1;
        const double dt_out = horizon / double(n - 1);
        res.ts.resize(n);
        res.survival_model.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            res.ts[i] = double(i) * dt_out;
            res.survival_model[i] = target.p(res.ts[i]);
        }
        res.survival_target = res.survival_model;
        res.max_abs_err = 0.0;
        res.survival = MonotoneCubic(res.ts, res.survival_model);
        return res;
    }

    ForwardSolver solver(g.lambda0(), sigma, cfg);
    PseudoDensity q =
        solver.point_density(0.0, g.lambda0(), target.log_hazard_slope(0.0), cfg.t0);

    std::vector<double> mu_ts, mus;
    const auto n_steps = static_cast<std::size_t>(std::ceil((horizon - cfg.t0) / cfg.dt));
    mu_ts.reserve(n_steps);
    mus.reserve(n_steps);
    res.ts.reserve(n_steps + 1);
    res.survival_model.reserve(n_steps + 1);

    res.ts.push_back(q.t);
    res.survival_model.push_back(q.survival());

    const std::size_t n_top = q.q.size() - 1;
    while (q.t < horizon - 1e-12) {
        const double dt = std::min(cfg.dt, horizon - q.t);
        const double mu = solver.extract_mu(q, target);
        mu_ts.push_back(q.t);
        mus.push_back(mu);
        solver.step_forward(q, mu, dt);
        res.ts.push_back(q.t);
        res.survival_model.push_back(q.survival());
        res.max_top_node_mass = std::max(res.max_top_node_mass, q.q[n_top] * q.dy);
    }

    res.survival_target.resize(res.ts.size());
    for (std::size_t i = 0; i < res.ts.size(); ++i) {
        res.survival_target[i] = target.p(res.ts[i]);
        res.max_abs_err =
            std::max(res.max_abs_err, std::abs(res.survival_model[i] - res.survival_target[i]));
    }
    res.model.mu = DriftCurve(std::move(mu_ts), std::move(mus));
    res.survival = MonotoneCubic(res.ts, res.survival_model);
    return res;
}

MonotoneCubic forward_survival_curve(const SfmModel& model, const CalibGrid& cfg, double t,
                                     double lambda) {
    LC_REQUIRE(t >= 0.0 && t < model.D, "forward survival: t=" << t << " outside [0, D)");
    LC_REQUIRE(lambda > 0.0, "forward survival: hazard must be positive");
    ForwardSolver solver(model.lambda0, model.sigma, cfg);
    PseudoDensity q = solver.point_density(t, lambda, model.mu(t), cfg.t0);

    std::vector<double> ts{t, q.t};
    // Survival is measured relative to being alive at t.
    std::vector<double> surv{1.0, q.survival()};
    while (q.t < model.D - 1e-12) {
        const double dt = std::min(cfg.dt, model.D - q.t);
        solver.step_forward(q, model.mu(q.t + 0.5 * dt), dt);
        ts.push_back(q.t);
        surv.push_back(q.survival());
    }
    return MonotoneCubic(std::move(ts), std::move(surv));
}

}  // namespace lifecycle
