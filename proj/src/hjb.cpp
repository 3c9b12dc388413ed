#include "lifecycle/hjb.hpp"

#include <algorithm>
#include <cmath>

#include "lifecycle/quadrature.hpp"

namespace lifecycle {

namespace {

// Solution of beta_t + 1 - r beta = 0 with beta(T) = 0, tau = T - t.
double annuity_certain(double r, double tau) {
    if (std::abs(r) < 1e-14)
        return tau;
    return -std::expm1(-r * tau) / r;
}

}  // namespace

PolicySurface::PolicySurface(std::vector<double> slice_times, std::vector<double> ygrid,
                             std::vector<std::vector<double>> beta, double gamma,
                             double lambda_ref)
    : ts_(std::move(slice_times)),
      y_(std::move(ygrid)),
      beta_(std::move(beta)),
      gamma_(gamma),
      lambda_ref_(lambda_ref) {
    LC_REQUIRE(ts_.size() == beta_.size() && !ts_.empty(), "policy surface: slice mismatch");
    LC_REQUIRE(y_.size() >= 2, "policy surface: grid too small");
    y0_ = y_.front();
    dy_ = y_[1] - y_[0];
}

void PolicySurface::time_weight(double t, std::size_t& j, double& w) const {
    if (t <= ts_.front()) {
        j = 0;
        w = 0.0;
        return;
    }
    if (t >= ts_.back()) {
        j = ts_.size() - 2;
        w = 1.0;
        return;
    }
    auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
    j = static_cast<std::size_t>(it - ts_.begin()) - 1;
    w = (t - ts_[j]) / (ts_[j + 1] - ts_[j]);
}

double PolicySurface::beta_on_slice_pair(std::size_t j, double w, double y) const {
    const double pos = std::clamp((y - y0_) / dy_, 0.0, double(y_.size() - 1));
    const auto i = std::min(static_cast<std::size_t>(pos), y_.size() - 2);
    const double u = pos - double(i);
    const double lo = beta_[j][i] * (1.0 - u) + beta_[j][i + 1] * u;
    if (w == 0.0)
        return lo;
    const double hi = beta_[j + 1][i] * (1.0 - u) + beta_[j + 1][i + 1] * u;
    return lo * (1.0 - w) + hi * w;
}

double PolicySurface::beta(double t, double lambda) const {
    LC_REQUIRE(lambda > 0.0, "policy surface: hazard must be positive");
    std::size_t j;
    double w;
    time_weight(t, j, w);
    return beta_on_slice_pair(j, w, std::log(lambda));
}

double PolicySurface::consumption_fraction(double t, double lambda) const {
    const double b = beta(t, lambda);
    LC_NUMERIC_REQUIRE(b > 0.0, "policy surface: beta vanished at t=" << t);
    return 1.0 / b;
}

double PolicySurface::initial_fraction() const {
    return consumption_fraction(ts_.front(), lambda_ref_);
}

PolicySurface solve_policy(const SfmModel& model, const EconParams& econ, const HjbGrid& grid) {
    econ.require_valid();
    grid.require_valid();
    LC_REQUIRE(econ.rho == econ.r, "policy solve assumes rho = r");
    LC_REQUIRE(econ.pi0 == 0.0, "policy solve assumes no pension income");
    LC_REQUIRE(std::abs(econ.gamma - 1.0) > 1e-12,
               "gamma = 1 is served by the annuity closed form, not the PDE");
    const double T = econ.D;
    LC_REQUIRE(T <= model.D + 1e-9, "policy horizon exceeds the calibrated drift range");

    const LogGrid lg =
        build_log_grid(model.lambda0, grid.floor_ratio, grid.lambda_cap, grid.nodes);
    const std::size_t n = lg.y.size();
    const double dy = lg.dy;

    const auto n_steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(T / grid.dt)));
    const double dt = T / double(n_steps);

    const double r = econ.r;
    const double gamma = econ.gamma;
    const double dif = 0.5 * model.sigma * model.sigma;
    const double gl = (gamma - 1.0) * dif;

    std::vector<double> lam(n), react(n);
    for (std::size_t i = 0; i < n; ++i) {
        lam[i] = std::exp(lg.y[i]);
        react[i] = r + lam[i] / gamma;
    }

    std::vector<double> beta(n, 0.0), lagged(n), work(n);
    std::vector<double> lower(n), diag(n), upper(n), rhs(n);
    TridiagWorkspace ws;

    std::vector<double> slice_ts;
    std::vector<std::vector<double>> slices;
    auto store = [&](double t) {
        slice_ts.push_back(t);
        slices.push_back(beta);
    };
    store(T);  // terminal condition

    // First step away from expiry: the advection and diffusion terms act
    // on a flat profile, so the reaction ODE beta' = 1 - c beta is exact.
    for (std::size_t i = 0; i < n; ++i)
        beta[i] = -std::expm1(-react[i] * dt) / react[i];
    if (grid.store_every != 0 && n_steps > 1 && (n_steps - 1) % grid.store_every == 0)
        store(T - dt);

    const bool nonlinear = gl != 0.0 && model.sigma > 0.0;

    for (std::size_t k = 2; k <= n_steps; ++k) {
        const double t_new = T - double(k) * dt;
        const double tau_new = T - t_new;
        const double mu_mid = model.mu(t_new + 0.5 * dt);
        const double adv = mu_mid - dif;

        const double lo_c = -dt * (-adv / (2.0 * dy) + dif / (dy * dy));
        const double up_c = -dt * (adv / (2.0 * dy) + dif / (dy * dy));
        const double di_c = 2.0 * dif * dt / (dy * dy);

        lagged = beta;
        // One fixed-point correction on the lagged beta_y^2 source.
        const int passes = nonlinear ? 2 : 1;
        for (int pass = 0; pass < passes; ++pass) {
            for (std::size_t i = 1; i + 1 < n; ++i) {
                lower[i] = lo_c;
                upper[i] = up_c;
                diag[i] = 1.0 + dt * react[i] + di_c;
                double source = 1.0;
                if (nonlinear) {
                    const double by = (lagged[i + 1] - lagged[i - 1]) / (2.0 * dy);
                    source += gl * by * by / std::max(lagged[i], 1e-10);
                }
                rhs[i] = beta[i] + dt * source;
            }
            // lambda -> 0: the annuity-certain line.
            lower[0] = 0.0;
            diag[0] = 1.0;
            upper[0] = 0.0;
            rhs[0] = annuity_certain(r, tau_new);
            // beta_y = 0 at the top.
            lower[n - 1] = -1.0;
            diag[n - 1] = 1.0;
            upper[n - 1] = 0.0;
            rhs[n - 1] = 0.0;

            solve_tridiagonal(lower, diag, upper, rhs, work, ws);
            if (pass + 1 < passes)
                lagged = work;
        }
        for (std::size_t i = 0; i < n; ++i) {
            LC_NUMERIC_REQUIRE(work[i] >= 0.0,
                               "policy solve: negative beta at node " << i << ", t=" << t_new);
            beta[i] = work[i];
        }
        if (grid.store_every != 0 && (n_steps - k) % grid.store_every == 0 && k != n_steps)
            store(t_new);
    }
    if (slice_ts.empty() || slice_ts.back() != 0.0)
        store(0.0);

    std::reverse(slice_ts.begin(), slice_ts.end());
    std::reverse(slices.begin(), slices.end());
    return PolicySurface(std::move(slice_ts), lg.y, std::move(slices), gamma, model.lambda0);
}

double log_utility_fraction(const MonotoneCubic& model_survival, double r, double t, double T) {
    LC_REQUIRE(T > t, "log utility rule: need T > t");
    const double st = (t == 0.0) ? 1.0 : model_survival(t);
    LC_NUMERIC_REQUIRE(st > 0.0, "log utility rule: extinct survival at t=" << t);
    const double a = integrate(
        [&](double s) { return std::exp(-r * (s - t)) * model_survival(s) / st; }, t, T, 1e-10);
    return 1.0 / a;
}

double log_utility_policy(const SfmModel& model, const CalibGrid& cfg, double r, double t,
                          double lambda, double T) {
    LC_REQUIRE(T > t, "log utility rule: need T > t");
    LC_REQUIRE(T <= model.D + 1e-9, "log utility rule: horizon beyond the calibrated drift");
    const MonotoneCubic surv = forward_survival_curve(model, cfg, t, lambda);
    const double a =
        integrate([&](double s) { return std::exp(-r * (s - t)) * surv(s); }, t, T, 1e-10);
    return 1.0 / a;
}

std::vector<Theorem1Row> compare_theorem1(const CalibrationResult& calib,
                                          const GompertzParams& g,
                                          const std::vector<double>& gammas, double r, double T,
                                          const HjbGrid& grid, double equal_tol) {
    std::vector<Theorem1Row> rows;
    rows.reserve(gammas.size());
    for (double gamma : gammas) {
        EconParams econ;
        econ.r = r;
        econ.rho = r;
        econ.gamma = gamma;
        econ.pi0 = 0.0;
        econ.F0 = 1.0;
        econ.D = T;

        Theorem1Row row;
        row.gamma = gamma;
        if (std::abs(gamma - 1.0) < 1e-12) {
            row.c_sfm = log_utility_fraction(calib.survival, r, 0.0, T);
        } else {
            HjbGrid cell = grid;
            cell.store_every = 0;  // only the t = 0 slice is needed
            row.c_sfm = solve_policy(calib.model, econ, cell).initial_fraction();
        }
        row.c_dfm = iwr_dfm(econ, g);

        if (std::abs(gamma - 1.0) < 1e-12)
            row.ordering_ok = std::abs(row.c_sfm - row.c_dfm) <= equal_tol;
        else if (gamma > 1.0)
            row.ordering_ok = row.c_sfm >= row.c_dfm - equal_tol;
        else
            row.ordering_ok = row.c_sfm <= row.c_dfm + equal_tol;
        rows.push_back(row);
    }
    return rows;
}

double forward_annuity(const CalibrationResult& calib, double r, double t, double T) {
    LC_REQUIRE(t >= 0.0 && t <= T, "forward annuity: need 0 <= t <= T");
    LC_REQUIRE(T <= calib.model.D + 1e-9, "forward annuity: horizon beyond the model");
    if (t == T)
        return 0.0;
    const double st = (t == 0.0) ? 1.0 : calib.survival(t);
    LC_NUMERIC_REQUIRE(st > 1e-300, "forward annuity: extinct survival at t=" << t);
    return integrate([&](double s) { return std::exp(-r * s) * calib.survival(s); }, t, T,
                     1e-10) /
           st;
}

}  // namespace lifecycle
