#pragma once

#include <cmath>
#include <vector>

#include "lifecycle/assert.hpp"

namespace lifecycle {

// Thomas algorithm for a tridiagonal system. `lower[0]` and
// `upper[n-1]` are ignored. Scratch buffers are caller-provided so the
// time-stepping loops can reuse allocations.
struct TridiagWorkspace {
    std::vector<double> cp, dp;
    void resize(std::size_t n) {
        cp.resize(n);
        dp.resize(n);
    }
};

inline void solve_tridiagonal(const std::vector<double>& lower, const std::vector<double>& diag,
                              const std::vector<double>& upper, const std::vector<double>& rhs,
                              std::vector<double>& out, TridiagWorkspace& ws) {
    const std::size_t n = diag.size();
    LC_REQUIRE(n >= 1 && lower.size() == n && upper.size() == n && rhs.size() == n,
               "tridiagonal solve: inconsistent sizes");
    ws.resize(n);
    out.resize(n);

    double den = diag[0];
    LC_NUMERIC_REQUIRE(den != 0.0, "tridiagonal solve: zero pivot at row 0");
    ws.cp[0] = upper[0] / den;
    ws.dp[0] = rhs[0] / den;
    for (std::size_t i = 1; i < n; ++i) {
        den = diag[i] - lower[i] * ws.cp[i - 1];
        LC_NUMERIC_REQUIRE(std::abs(den) > 1e-300, "tridiagonal solve: zero pivot at row " << i);
        ws.cp[i] = upper[i] / den;
        ws.dp[i] = (rhs[i] - lower[i] * ws.dp[i - 1]) / den;
    }
    out[n - 1] = ws.dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        out[i] = ws.dp[i] - ws.cp[i] * out[i + 1];
}

}  // namespace lifecycle
