#pragma once

#include <vector>

namespace lifecycle {

// Monotonicity-preserving cubic Hermite interpolation (Fritsch-Carlson
// slope limiting). Evaluation outside the abscissa range clamps to the
// nearest end value; derivatives are taken from the boundary segment.
class MonotoneCubic {
  public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> xs, std::vector<double> ys);

    double operator()(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

    bool empty() const { return xs_.empty(); }
    const std::vector<double>& abscissas() const { return xs_; }
    const std::vector<double>& ordinates() const { return ys_; }

  private:
    std::size_t segment(double x) const;

    std::vector<double> xs_, ys_, slopes_;
};

}  // namespace lifecycle
