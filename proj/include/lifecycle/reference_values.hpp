#pragma once

#include <cstddef>

// Reference values the suite reproduces: the survival/hazard table for the
// default Gompertz fit (m = 89.335, b = 9.5) and the optimal initial
// withdrawal rates (percent of initial wealth, r = 2%, horizon 30y) across
// risk aversion and hazard volatility.

namespace lifecycle::ref {

inline constexpr std::size_t kNumAges = 8;
inline constexpr double kAges[kNumAges] = {65, 70, 75, 80, 85, 90, 95, 100};

// kSurvival[i][j]: probability of reaching kAges[j] conditional on being
// alive at kAges[i], rounded to 4 decimals; entries below the diagonal are
// unused and set to -1.
inline constexpr double kSurvival[kNumAges][kNumAges] = {
    {1.000, 0.9479, 0.8659, 0.7429, 0.5733, 0.3696, 0.1758, 0.0500},
    {-1, 1.000, 0.9135, 0.7837, 0.6047, 0.3899, 0.1855, 0.0527},
    {-1, -1, 1.000, 0.8580, 0.6620, 0.4268, 0.2031, 0.0577},
    {-1, -1, -1, 1.000, 0.7716, 0.4975, 0.2367, 0.0673},
    {-1, -1, -1, -1, 1.000, 0.6447, 0.3067, 0.0872},
    {-1, -1, -1, -1, -1, 1.000, 0.4757, 0.1353},
    {-1, -1, -1, -1, -1, -1, 1.000, 0.2844},
    {-1, -1, -1, -1, -1, -1, -1, 1.000},
};

// Instantaneous hazard at each age, rounded to 4 decimals.
inline constexpr double kHazard[kNumAges] = {0.0081, 0.0137, 0.0232, 0.0394,
                                             0.0667, 0.1129, 0.1911, 0.3234};

// Optimal initial withdrawal rates in percent of initial wealth, 2 decimals.
// Rows: sigma in {0, 0.15, 0.25}; columns: gamma in
// {0.5, 1, 1.5, 3, 5, 10}. r = 2%, wealth must last 30 years.
inline constexpr std::size_t kNumGammas = 6;
inline constexpr std::size_t kNumSigmas = 3;
inline constexpr double kWithdrawalGammas[kNumGammas] = {0.5, 1.0, 1.5, 3.0, 5.0, 10.0};
inline constexpr double kWithdrawalSigmas[kNumSigmas] = {0.0, 0.15, 0.25};
inline constexpr double kWithdrawalPct[kNumSigmas][kNumGammas] = {
    {7.59, 6.12, 5.58, 5.02, 4.78, 4.61},
    {7.52, 6.12, 5.60, 5.04, 4.80, 4.62},
    {7.44, 6.12, 5.62, 5.06, 4.82, 4.63},
};

// Deterministic-hazard lifecycle benchmarks (F0 = 100, r = rho = 2.5%,
// depletion at t = 55): initial consumption for gamma = 4 and 8, and the
// gamma = 4 consumption path at a few later ages.
inline constexpr double kInitialConsumptionGamma4 = 4.605;
inline constexpr double kInitialConsumptionGamma8 = 4.121;
inline constexpr std::size_t kNumPathPoints = 4;
inline constexpr double kPathTimesGamma4[kNumPathPoints] = {5, 10, 25, 35};
inline constexpr double kPathConsumptionGamma4[kNumPathPoints] = {4.544, 4.442, 3.591, 2.177};

}  // namespace lifecycle::ref
