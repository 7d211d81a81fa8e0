#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include "alie/detrend.hpp"
#include "alie/lrv.hpp"
#include "alie/series.hpp"

namespace alie {

enum class Estimator { pl, al, alie };

/// Sentinel penalty factor: the variable never enters the active set.
inline constexpr double kNeverActivate = std::numeric_limits<double>::infinity();

/// Configuration of the simulated quantile-range statistic.
struct JSpec {
    double alpha = 0.1;
    double sigma_v = 1.0;
    int replications = 150;
    std::uint64_t seed = 0;

    void validate() const;
};

struct WeightSpec {
    Estimator estimator = Estimator::alie;
    double gamma1 = 1.0;
    double gamma2 = 1.0;
    std::optional<JSpec> j_spec;      ///< required for ALIE
    std::optional<LrvSpec> lrv_spec;  ///< required for ALIE

    void validate() const;
};

/**
 * @brief Inter-quantile range of simulated spurious-regression slopes.
 *
 * Runs R regressions of the (already variance-scaled) series on independent
 * Gaussian random walks; without a trend the regression has no intercept,
 * with `trend` it includes a constant and a linear trend. Returns
 * |ζ̂_{1-α/2} - ζ̂_{α/2}| from the empirical quantiles of the R slope estimates.
 */
double j_statistic(std::span<const double> y_scaled, const JSpec& spec, bool trend);

/**
 * @brief Penalty factor for the inference regressor y_{t-1}.
 *
 * PL returns 1, AL returns |ρ̂|^{-γ1}, ALIE returns |ρ̂/J|^{-γ1} with J computed
 * on the series scaled by the AR spectral long-run standard deviation. A zero
 * initial estimate maps to kNeverActivate. `p` defaults to the Schwert rule.
 */
double weight_inference(const TimeSeries& y, const WeightSpec& spec, DetrendMode det,
                        std::optional<int> p = {});

/// Same, with the initial estimate already at hand (used by the selection pipeline).
double inference_penalty_factor(double rho_hat, const TimeSeries& y_adj, const WeightSpec& spec,
                                bool trend);

/// Elementwise |δ̂_j|^{-γ2}; exact zeros map to kNeverActivate.
Eigen::VectorXd weights_lags(const Eigen::VectorXd& delta_hats, double gamma2);

Estimator estimator_from_string(const std::string& name);
std::string to_string(Estimator e);

}  // namespace alie
