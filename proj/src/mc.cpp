#include "lifecycle/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

namespace lifecycle {

namespace {

constexpr double kZ99 = 2.3263478740408408;  // one-sided 99% normal quantile

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Counter-based per-path stream: the state is a hash of (seed, index),
// then advances by the splitmix64 increment. Paths can be simulated in
// any order, on any number of workers, with identical draws.
struct SplitMix64 {
    std::uint64_t state = 0;

    static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
        return {mix64(seed + (index + 1) * 0x9E3779B97F4A7C15ull)};
    }
    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        return mix64(state);
    }
};

struct NormalGen {
    SplitMix64 rng;
    bool has_spare = false;
    double spare = 0.0;

    double uniform() {  // in (0,1)
        return double(rng.next() >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }
    double normal() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double a = 2.0 * std::numbers::pi * uniform();
        spare = r * std::sin(a);
        has_spare = true;
        return r * std::cos(a);
    }
};

struct Accum {
    double sum = 0.0, sum2 = 0.0;
    std::size_t n = 0;

    void add(double v) {
        sum += v;
        sum2 += v * v;
        ++n;
    }
    void merge(const Accum& o) {
        sum += o.sum;
        sum2 += o.sum2;
        n += o.n;
    }
    MeanStdErr finalize() const {
        LC_REQUIRE(n >= 2, "estimator needs at least two sampling units");
        const double mean = sum / double(n);
        const double var = std::max(0.0, (sum2 - sum * sum / double(n)) / double(n - 1));
        return {mean, std::sqrt(var / double(n))};
    }
};

// Fixed-size blocks of sampling units; each block's partial sums land in
// a dedicated slot and the slots are merged in index order, so the result
// does not depend on how many workers ran.
template <class Work>
void run_blocked(std::size_t n_units, std::size_t n_quantities, Work&& work,
                 std::vector<Accum>& totals, double& min_wealth) {
    constexpr std::size_t kBlock = 4096;
    const std::size_t n_blocks = (n_units + kBlock - 1) / kBlock;
    std::vector<std::vector<Accum>> partials(n_blocks, std::vector<Accum>(n_quantities));
    std::vector<double> block_min(n_blocks, std::numeric_limits<double>::infinity());

    auto run_block = [&](std::size_t b) {
        const std::size_t lo = b * kBlock;
        const std::size_t hi = std::min(lo + kBlock, n_units);
        work(lo, hi, partials[b], block_min[b]);
    };

    const unsigned hw = std::thread::hardware_concurrency();
    const unsigned n_threads = std::min<unsigned>(std::max(hw, 1u), 8u);
    if (n_threads <= 1 || n_blocks <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b)
            run_block(b);
    } else {
        std::atomic<std::size_t> cursor{0};
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned w = 0; w < n_threads; ++w)
            pool.emplace_back([&] {
                for (std::size_t b = cursor.fetch_add(1); b < n_blocks;
                     b = cursor.fetch_add(1))
                    run_block(b);
            });
        for (auto& th : pool)
            th.join();
    }

    totals.assign(n_quantities, Accum{});
    min_wealth = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < n_blocks; ++b) {
        for (std::size_t qi = 0; qi < n_quantities; ++qi)
            totals[qi].merge(partials[b][qi]);
        min_wealth = std::min(min_wealth, block_min[b]);
    }
}

enum class Utility { log_u, sqrt_u, inv_u, general_u };

Utility utility_kind(double gamma) {
    if (gamma == 1.0)
        return Utility::log_u;
    if (gamma == 0.5)
        return Utility::sqrt_u;
    if (gamma == 3.0)
        return Utility::inv_u;
    return Utility::general_u;
}

inline double crra(double c, Utility kind, double one_minus_gamma, double inv_omg) {
    switch (kind) {
        case Utility::log_u:
            return std::log(c);
        case Utility::sqrt_u:
            return 2.0 * std::sqrt(c);
        case Utility::inv_u:  // gamma = 3
            return -0.5 / (c * c);
        default:
            return std::pow(c, one_minus_gamma) * inv_omg;
    }
}

}  // namespace

std::vector<MeanStdErr> estimate_survival(const SfmModel& model, const SimConfig& cfg,
                                          const std::vector<double>& ts) {
    cfg.require_valid();
    LC_REQUIRE(!ts.empty(), "estimate_survival: no times requested");
    const double h = cfg.dt_sim;
    std::vector<std::size_t> kcheck(ts.size());
    std::size_t n_steps = 0;
    for (std::size_t j = 0; j < ts.size(); ++j) {
        LC_REQUIRE(ts[j] >= 0.0 && ts[j] <= model.D + 1e-9,
                   "estimate_survival: t=" << ts[j] << " outside [0, D]");
        kcheck[j] = static_cast<std::size_t>(std::lround(ts[j] / h));
        n_steps = std::max(n_steps, kcheck[j]);
    }

    std::vector<double> gdrift(n_steps);
    const double half_s2 = 0.5 * model.sigma * model.sigma;
    for (std::size_t k = 0; k < n_steps; ++k)
        gdrift[k] = (model.mu((double(k) + 0.5) * h) - half_s2) * h;
    const double vol = model.sigma * std::sqrt(h);

    const bool anti = cfg.antithetic;
    const std::size_t n_units = anti ? cfg.n_paths / 2 : cfg.n_paths;
    const double lam0 = model.lambda0;

    std::vector<Accum> totals;
    double min_wealth;
    run_blocked(
        n_units, ts.size(),
        [&](std::size_t lo, std::size_t hi, std::vector<Accum>& acc, double&) {
            for (std::size_t u = lo; u < hi; ++u) {
                NormalGen gen{SplitMix64::stream(cfg.seed, u)};
                double thr_a = 0.0, thr_b = 0.0;
                if (cfg.bernoulli_deaths) {
                    thr_a = -std::log(gen.uniform());
                    thr_b = -std::log(gen.uniform());
                }
                double la = lam0, lb = lam0;
                double ca = 0.0, cb = 0.0;
                std::size_t jc = 0;
                std::vector<double> rec(ts.size());
                for (std::size_t k = 0;; ++k) {
                    while (jc < ts.size() && kcheck[jc] == k) {
                        double wa, wb;
                        if (cfg.bernoulli_deaths) {
                            wa = (ca <= thr_a) ? 1.0 : 0.0;
                            wb = (cb <= thr_b) ? 1.0 : 0.0;
                        } else {
                            wa = std::exp(-ca);
                            wb = std::exp(-cb);
                        }
                        rec[jc++] = anti ? 0.5 * (wa + wb) : wa;
                        // duplicate checkpoint times share the step index
                        while (jc < ts.size() && kcheck[jc] == k) {
                            rec[jc] = rec[jc - 1];
                            ++jc;
                        }
                    }
                    if (k == n_steps)
                        break;
                    const double z = (model.sigma > 0.0) ? gen.normal() : 0.0;
                    const double ga = std::exp(gdrift[k] + vol * z);
                    const double la2 = la * ga;
                    ca += 0.5 * (la + la2) * h;
                    la = la2;
                    if (anti) {
                        const double lb2 = lb * std::exp(gdrift[k] - vol * z);
                        cb += 0.5 * (lb + lb2) * h;
                        lb = lb2;
                    }
                }
                for (std::size_t j = 0; j < ts.size(); ++j)
                    acc[j].add(rec[j]);
            }
        },
        totals, min_wealth);

    std::vector<MeanStdErr> out(ts.size());
    for (std::size_t j = 0; j < ts.size(); ++j)
        out[j] = (kcheck[j] == 0) ? MeanStdErr{1.0, 0.0} : totals[j].finalize();
    return out;
}

namespace {

// Shared engine: runs one hazard path per unit (pair of paths with
// antithetics) and accumulates the discounted utility of c = s F / beta
// for every requested scale, plus paired differences against scales[0].
struct PolicySimOut {
    std::vector<MeanStdErr> values, diffs;
    double min_wealth = 0.0;
};

PolicySimOut simulate_policies(const SfmModel& model, const PolicySurface& policy,
                               const EconParams& econ, const SimConfig& cfg,
                               const std::vector<double>& scales) {
    cfg.require_valid();
    econ.require_valid();
    LC_REQUIRE(econ.rho == econ.r, "policy simulation assumes rho = r");
    LC_REQUIRE(econ.pi0 == 0.0, "policy simulation assumes no pension income");
    LC_REQUIRE(econ.D <= model.D + 1e-9, "policy horizon beyond the calibrated drift");
    LC_REQUIRE(std::abs(policy.gamma() - econ.gamma) < 1e-12,
               "policy surface was solved for gamma=" << policy.gamma() << ", econ has "
                                                      << econ.gamma);
    for (double s : scales)
        LC_REQUIRE(s > 0.0, "consumption scale must be positive");

    const double h = cfg.dt_sim;
    const double T = econ.D;
    const auto n_steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(T / h)));

    std::vector<double> gdrift(n_steps), disc(n_steps);
    std::vector<std::size_t> slice_j(n_steps);
    std::vector<double> slice_w(n_steps);
    const double half_s2 = 0.5 * model.sigma * model.sigma;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = double(k) * h;
        gdrift[k] = (model.mu(t + 0.5 * h) - half_s2) * h;
        disc[k] = std::exp(-econ.r * t);
        policy.time_weight(t, slice_j[k], slice_w[k]);
    }
    const double vol = model.sigma * std::sqrt(h);

    const Utility ukind = utility_kind(econ.gamma);
    const double omg = 1.0 - econ.gamma;
    const double inv_omg = (ukind == Utility::general_u) ? 1.0 / omg : 0.0;

    const bool anti = cfg.antithetic;
    const std::size_t n_units = anti ? cfg.n_paths / 2 : cfg.n_paths;
    const std::size_t ns = scales.size();
    const std::size_t legs = anti ? 2 : 1;
    const double lam0 = model.lambda0;
    const double r = econ.r;

    std::vector<Accum> totals;
    double min_wealth;
    run_blocked(
        n_units, 2 * ns - 1,  // values for each scale, diffs vs scales[0]
        [&](std::size_t lo, std::size_t hi, std::vector<Accum>& acc, double& wmin) {
            std::vector<double> F(legs * ns), U(legs * ns);
            for (std::size_t u = lo; u < hi; ++u) {
                NormalGen gen{SplitMix64::stream(cfg.seed, u)};
                double lam[2] = {lam0, lam0};
                double cum[2] = {0.0, 0.0};
                std::fill(F.begin(), F.end(), econ.F0);
                std::fill(U.begin(), U.end(), 0.0);

                for (std::size_t k = 0; k < n_steps; ++k) {
                    const std::size_t j = slice_j[k];
                    const double w = slice_w[k];
                    for (std::size_t leg = 0; leg < legs; ++leg) {
                        const double beta =
                            policy.beta_on_slice_pair(j, w, std::log(lam[leg]));
                        LC_NUMERIC_REQUIRE(beta > 0.0, "simulated policy hit beta <= 0");
                        const double sw = disc[k] * std::exp(-cum[leg]) * h;
                        for (std::size_t si = 0; si < ns; ++si) {
                            double& f = F[leg * ns + si];
                            const double cf = scales[si] / beta;
                            U[leg * ns + si] += sw * crra(f * cf, ukind, omg, inv_omg);
                            f *= std::exp((r - cf) * h);
                            LC_NUMERIC_REQUIRE(f > 0.0 && std::isfinite(f),
                                               "simulated wealth left (0, inf)");
                            if (f < wmin)
                                wmin = f;
                        }
                    }
                    const double z = (model.sigma > 0.0) ? gen.normal() : 0.0;
                    for (std::size_t leg = 0; leg < legs; ++leg) {
                        const double zz = (leg == 0) ? z : -z;
                        const double l2 = lam[leg] * std::exp(gdrift[k] + vol * zz);
                        cum[leg] += 0.5 * (lam[leg] + l2) * h;
                        lam[leg] = l2;
                    }
                }
                for (std::size_t si = 0; si < ns; ++si) {
                    double v = U[si];
                    if (anti)
                        v = 0.5 * (v + U[ns + si]);
                    acc[si].add(v);
                    if (si > 0) {
                        double d = U[0] - U[si];
                        if (anti)
                            d = 0.5 * (d + U[ns] - U[ns + si]);
                        acc[ns + si - 1].add(d);
                    }
                }
            }
        },
        totals, min_wealth);

    PolicySimOut out;
    out.values.resize(ns);
    out.diffs.resize(ns);
    for (std::size_t si = 0; si < ns; ++si)
        out.values[si] = totals[si].finalize();
    out.diffs[0] = {0.0, 0.0};
    for (std::size_t si = 1; si < ns; ++si)
        out.diffs[si] = totals[ns + si - 1].finalize();
    out.min_wealth = min_wealth;
    return out;
}

}  // namespace

MeanStdErr estimate_policy_value(const SfmModel& model, const PolicySurface& policy,
                                 const EconParams& econ, const SimConfig& cfg, double scale) {
    return simulate_policies(model, policy, econ, cfg, {scale}).values[0];
}

PerturbationReport perturbation_test(const SfmModel& model, const PolicySurface& policy,
                                     const EconParams& econ, const SimConfig& cfg,
                                     double delta) {
    LC_REQUIRE(delta > 0.0 && delta < 1.0, "perturbation delta must be in (0,1)");
    const auto sim = simulate_policies(model, policy, econ, cfg, {1.0, 1.0 + delta, 1.0 - delta});

    PerturbationReport rep;
    rep.base_value = sim.values[0].value;
    rep.base_se = sim.values[0].se;
    rep.min_wealth = sim.min_wealth;
    auto side = [&](std::size_t si, double scale) {
        PerturbationSide s;
        s.scale = scale;
        s.value = sim.values[si].value;
        s.mean_diff = sim.diffs[si].value;
        s.se_diff = sim.diffs[si].se;
        LC_NUMERIC_REQUIRE(s.se_diff > 0.0, "perturbation test: degenerate difference");
        s.z = s.mean_diff / s.se_diff;
        s.base_better = s.z > kZ99;
        return s;
    };
    rep.up = side(1, 1.0 + delta);
    rep.down = side(2, 1.0 - delta);
    return rep;
}

}  // namespace lifecycle
