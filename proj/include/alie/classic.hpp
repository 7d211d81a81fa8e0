#pragma once

#include <optional>
#include <string>
#include <vector>

#include "alie/design.hpp"
#include "alie/series.hpp"

namespace alie {

enum class LagRule { aic, bic, maic, fixed };

struct UnitRootTest {
    double t_stat = 0.0;
    int lags_used = 0;
    std::optional<bool> reject_5pct;  ///< absent when no 5% critical value is bundled
    std::optional<double> critical_value;
};

/**
 * @brief Classical ADF t-test of ρ = 0 in the ADF(k) regression.
 *
 * The truncation lag comes from `rule` (searched over 0..schwert_pmax(T)) or is
 * fixed at `k`. Only the 5% critical value -2.89 for the constant case is
 * bundled; the trend case reports the statistic without a decision.
 */
UnitRootTest adf_test(const TimeSeries& y, DetComponents det, LagRule rule,
                      std::optional<int> k = {});

/**
 * @brief ADF test on quasi-difference adjusted data (DFQD).
 *
 * `det == constant` demeans with c̄ = -7 and decides against the 5% critical
 * value -1.95; `det == trend` detrends with c̄ = -13.5 and reports the statistic
 * without a bundled decision. The test regression carries no deterministic terms.
 */
UnitRootTest dfqd_test(const TimeSeries& y, DetComponents det, LagRule rule,
                       std::optional<int> k = {});

/**
 * @brief Exhaustive best-subset search over lag patterns J ⊆ {1..p_max} scored
 *        by BIC on a common sample. All candidate regressions include the
 *        deterministic terms; `force_inference` keeps y_{t-1} in every candidate.
 *
 * p_max is capped at 12 (2^p_max subsets are enumerated).
 */
std::vector<int> exhaustive_bic_pattern(const TimeSeries& y, int p_max, DetComponents det,
                                        bool force_inference);

LagRule lag_rule_from_string(const std::string& name);
std::string to_string(LagRule r);

}  // namespace alie
