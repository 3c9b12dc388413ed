#pragma once

#include <memory>
#include <string>

#include "lifecycle/gompertz.hpp"
#include "lifecycle/interp.hpp"

namespace lifecycle {

// A time-zero survival curve p(t) on [0, D] with its first two time
// derivatives. The Gompertz implementation is analytic; tabulated curves
// fall back to spline derivatives.
class SurvivalCurve {
  public:
    virtual ~SurvivalCurve() = default;
    virtual double horizon() const = 0;
    virtual double p(double t) const = 0;
    virtual double p_t(double t) const = 0;
    virtual double p_tt(double t) const = 0;

    // Log-derivative of the hazard h = -p_t/p, used by the drift extractor.
    double log_hazard_slope(double t) const;
};

class GompertzSurvival final : public SurvivalCurve {
  public:
    GompertzSurvival(const GompertzParams& g, double horizon);

    double horizon() const override { return horizon_; }
    double p(double t) const override { return survival(g_, t); }
    double p_t(double t) const override { return -hazard(g_, t) * survival(g_, t); }
    double p_tt(double t) const override {
        const double lam = hazard(g_, t);
        return survival(g_, t) * lam * (lam - g_.eta());
    }
    const GompertzParams& params() const { return g_; }

  private:
    GompertzParams g_;
    double horizon_;
};

class TabulatedSurvival final : public SurvivalCurve {
  public:
    TabulatedSurvival(std::vector<double> ts, std::vector<double> ps);

    double horizon() const override { return spline_.abscissas().back(); }
    double p(double t) const override { return spline_(t); }
    double p_t(double t) const override { return spline_.derivative(t); }
    double p_tt(double t) const override { return spline_.second_derivative(t); }

  private:
    MonotoneCubic spline_;
};

inline std::unique_ptr<SurvivalCurve> survival_curve_of(const GompertzParams& g,
                                                        double horizon = 55.0) {
    return std::make_unique<GompertzSurvival>(g, horizon);
}

// CSV with header "t,p", strictly increasing t starting at 0 with p = 1.
std::unique_ptr<SurvivalCurve> load_survival_csv(const std::string& path);

}  // namespace lifecycle
