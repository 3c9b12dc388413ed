#include "lifecycle/interp.hpp"

#include <algorithm>
#include <cmath>

#include "lifecycle/assert.hpp"

namespace lifecycle {

MonotoneCubic::MonotoneCubic(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    LC_REQUIRE(xs_.size() == ys_.size(), "interpolation: size mismatch");
    LC_REQUIRE(xs_.size() >= 2, "interpolation: need at least two points");
    const std::size_t n = xs_.size();
    for (std::size_t i = 1; i < n; ++i)
        LC_REQUIRE(xs_[i] > xs_[i - 1], "interpolation: abscissas must be strictly increasing");

    std::vector<double> d(n - 1);  // secant slopes
    for (std::size_t i = 0; i + 1 < n; ++i)
        d[i] = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);

    slopes_.assign(n, 0.0);
    slopes_[0] = d[0];
    slopes_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i)
        slopes_[i] = (d[i - 1] * d[i] > 0.0) ? 0.5 * (d[i - 1] + d[i]) : 0.0;

    // Fritsch-Carlson: pull node slopes into the circle of radius 3|d|
    // so each cubic piece stays monotone.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (d[i] == 0.0) {
            slopes_[i] = 0.0;
            slopes_[i + 1] = 0.0;
            continue;
        }
        const double a = slopes_[i] / d[i];
        const double b = slopes_[i + 1] / d[i];
        const double s = a * a + b * b;
        if (s > 9.0) {
            const double f = 3.0 / std::sqrt(s);
            slopes_[i] = f * a * d[i];
            slopes_[i + 1] = f * b * d[i];
        }
    }
}

std::size_t MonotoneCubic::segment(double x) const {
    if (x <= xs_.front())
        return 0;
    if (x >= xs_[xs_.size() - 2])
        return xs_.size() - 2;
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    return static_cast<std::size_t>(it - xs_.begin()) - 1;
}

double MonotoneCubic::operator()(double x) const {
    LC_REQUIRE(!xs_.empty(), "interpolation: empty");
    if (x <= xs_.front())
        return ys_.front();
    if (x >= xs_.back())
        return ys_.back();
    const std::size_t i = segment(x);
    const double h = xs_[i + 1] - xs_[i];
    const double t = (x - xs_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * ys_[i] + h * h10 * slopes_[i] + h01 * ys_[i + 1] + h * h11 * slopes_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
    LC_REQUIRE(!xs_.empty(), "interpolation: empty");
    x = std::clamp(x, xs_.front(), xs_.back());
    const std::size_t i = segment(x);
    const double h = xs_[i + 1] - xs_[i];
    const double t = (x - xs_[i]) / h;
    const double t2 = t * t;
    const double g00 = (6 * t2 - 6 * t) / h;
    const double g10 = 3 * t2 - 4 * t + 1;
    const double g01 = (-6 * t2 + 6 * t) / h;
    const double g11 = 3 * t2 - 2 * t;
    return g00 * ys_[i] + g10 * slopes_[i] + g01 * ys_[i + 1] + g11 * slopes_[i + 1];
}

double MonotoneCubic::second_derivative(double x) const {
    LC_REQUIRE(!xs_.empty(), "interpolation: empty");
    x = std::clamp(x, xs_.front(), xs_.back());
    const std::size_t i = segment(x);
    const double h = xs_[i + 1] - xs_[i];
    const double t = (x - xs_[i]) / h;
    const double k00 = (12 * t - 6) / (h * h);
    const double k10 = (6 * t - 4) / h;
    const double k01 = (-12 * t + 6) / (h * h);
    const double k11 = (6 * t - 2) / h;
    return k00 * ys_[i] + k10 * slopes_[i] + k01 * ys_[i + 1] + k11 * slopes_[i + 1];
}

}  // namespace lifecycle
