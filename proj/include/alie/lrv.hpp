#pragma once

#include <optional>
#include <string>

#include "alie/design.hpp"
#include "alie/series.hpp"

namespace alie {

enum class LrvCriterion { bic, aic, mbic, maic, fixed };

struct LrvSpec {
    LrvCriterion criterion = LrvCriterion::bic;
    std::optional<int> k_fixed;                 ///< required iff criterion == fixed
    int k_max = 0;                              ///< lag bound for the criterion search
    DetComponents det = DetComponents::none;

    void validate() const;
};

/**
 * @brief AR spectral density estimate of the long-run variance at frequency zero,
 *        ω̂²(k) = σ̂²_k / (1 - Σ_j δ̂_j)².
 *
 * σ̂²_k divides the ADF(k) residual sum of squares by (T - k), or by (T - k - 2)
 * when `det == trend`. A near-zero long-run denominator |1 - Σ δ̂_j| < 1e-8 is
 * reported as unstable.
 */
double lrv_ar(const TimeSeries& y, int k, DetComponents det);

/**
 * @brief Lag order chosen by minimising log(σ̃²_k) + C_T (τ_T(k) + k)/(T - k_max)
 *        over k = 0..k_max, all fits sharing the common sample t = k_max+2..T.
 *
 * C_T = log T with τ = 0 for BIC, C_T = 2 with τ = 0 for AIC; MBIC and MAIC add
 * τ_T(k) = ρ̂²_k Σ y²_{t-1} / σ̃²_k.
 */
int select_lag_ic(const TimeSeries& y, const LrvSpec& spec);

LrvCriterion lrv_criterion_from_string(const std::string& name);
std::string to_string(LrvCriterion c);

}  // namespace alie
