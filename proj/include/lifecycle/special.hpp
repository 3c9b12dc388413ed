#pragma once

namespace lifecycle {

// Upper incomplete gamma Gamma(a, x) for x > 0 and real order a, including
// a <= 0 (reached by downward recurrence; a = 0 is the exponential
// integral E1). Orders at exact negative integers below zero are rejected.
double upper_incomplete_gamma(double a, double x);

// E1(x) = integral_x^inf e^{-u}/u du, x > 0.
double exponential_integral_e1(double x);

}  // namespace lifecycle
