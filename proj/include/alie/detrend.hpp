#pragma once

#include <optional>
#include <string>

#include "alie/series.hpp"

namespace alie {

/// Deterministic-component adjustment applied before estimation.
enum class DetrendMode {
    none,
    ols_demean,   ///< residuals of y on a constant
    ols_detrend,  ///< residuals of y on (1, t)
    fd_demean,    ///< y_t - y_1
    fd_detrend,   ///< y_t - y_1 - mean(Δy)·(t-1)
    qd_demean,    ///< quasi-difference GLS adjustment, constant only
    qd_detrend    ///< quasi-difference GLS adjustment, constant and trend
};

/// Canonical local-to-unity constants for the quasi-difference adjustment.
inline constexpr double kQdCbarDemean = -7.0;
inline constexpr double kQdCbarDetrend = -13.5;

/// True for modes that remove a linear trend (these switch on the trend-adjusted
/// variants of the J statistic and the long-run variance denominator downstream).
bool trend_adjusted(DetrendMode mode);

/// Schwert's maximum lag order ⌊12 (T/100)^{1/4}⌋.
int schwert_pmax(int T);

/**
 * @brief Removes the deterministic component of y according to `mode`.
 *
 * Quasi-difference modes require an explicit `qd_cbar`; callers normally pass
 * kQdCbarDemean or kQdCbarDetrend.
 */
TimeSeries detrend(const TimeSeries& y, DetrendMode mode, std::optional<double> qd_cbar = {});

DetrendMode detrend_mode_from_string(const std::string& name);
std::string to_string(DetrendMode mode);

}  // namespace alie
