#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "alie/design.hpp"
#include "alie/detrend.hpp"
#include "alie/lasso_path.hpp"
#include "alie/ols.hpp"
#include "alie/series.hpp"
#include "alie/weights.hpp"

namespace alie {

enum class Classification { stationary, nonstationary };

/// Outcome of the BIC-tuned model selection pipeline.
struct SelectionResult {
    double lambda_bic = 0.0;
    Eigen::VectorXd beta;            ///< penalized block: (ρ̂, δ̂_1..δ̂_p)
    std::vector<int> active_set;     ///< indices into beta with nonzero entries
    bool includes_inference = false;
    std::vector<int> lag_pattern;    ///< selected lag indices in 1..p
    Classification classification = Classification::nonstationary;
    int p = 0;
    Eigen::VectorXd weights;         ///< penalty factors used
    std::vector<double> knots;
    std::optional<double> activation_knot_inference;

    std::string to_json() const;
};

struct BicTuneResult {
    double lambda = 0.0;
    Eigen::VectorXd beta;
    double bic = 0.0;
};

/**
 * @brief λ chosen by minimising log(ε̂'ε̂/T) + ‖β̂_λ‖₀ log(T)/T over the path knots
 *        and the λ = 0 endpoint; ties resolve toward the largest λ.
 *
 * The zero-norm counts strictly nonzero penalized coefficients only.
 */
BicTuneResult bic_tune(const LassoPath& path, const PenalizedProblem& prob);

/// Detrended data, ADF design and initial OLS fit shared by all estimators.
struct SelectionContext {
    TimeSeries y_adj;
    AdfDesign design;
    OlsFit initial_fit;
    bool trend = false;
    int p = 0;
};

SelectionContext make_selection_context(const TimeSeries& y, DetrendMode det,
                                        std::optional<int> p = {});

SelectionResult select_from_context(const SelectionContext& ctx, const WeightSpec& spec);

/**
 * @brief End-to-end selection: detrend, build the ADF(p) design, initial OLS,
 *        penalty weights, solution path, BIC tuning, classification.
 *
 * `p` defaults to the Schwert rule. Deterministic given the seeds in `spec`.
 */
SelectionResult select_model(const TimeSeries& y, const WeightSpec& spec, DetrendMode det,
                             std::optional<int> p = {});

}  // namespace alie
