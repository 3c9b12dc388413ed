#pragma once

#include "lifecycle/gompertz.hpp"

namespace lifecycle {

// Temporary life annuity factor under Gompertz mortality with the mode
// shifted to m_star:
//   a(rate, m_star, T) = integral_0^T e^{-rate s} p(s; m_star) ds.
// Two independent evaluations are provided; gpv_annuity runs both and
// insists they agree to 1e-8 relative before returning the quadrature
// value.
double gpv_quadrature(const GompertzParams& g, double rate, double m_star, double T,
                      double abs_tol = 1e-11);
double gpv_gamma(const GompertzParams& g, double rate, double m_star, double T);
double gpv_annuity(const GompertzParams& g, double rate, double m_star, double T);

// Price at time 0 of income paid over [t, T] contingent on survival from
// today's curve: integral_t^T e^{-r s} p(s) ds.
double deferred_annuity(const GompertzParams& g, double r, double t, double T);

}  // namespace lifecycle
