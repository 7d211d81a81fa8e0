#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace alie {

/**
 * @brief Weighted-ℓ1 problem  min_β ‖y - Xβ - Dγ‖² + 2λ Σ_i f_i |β_i|.
 *
 * X holds the penalized columns (y_{t-1} first, then the Δy lags in an ADF
 * design); det columns D are never penalized and are concentrated out before
 * the path is computed. A factor of kNeverActivate keeps a column inactive at
 * every λ.
 */
struct PenalizedProblem {
    Eigen::MatrixXd X;
    Eigen::MatrixXd det;  ///< may have zero columns
    Eigen::VectorXd y;
    Eigen::VectorXd factors;

    void validate() const;
};

enum class EventKind { activation, deactivation, sign_cross };

struct PathEvent {
    int variable = -1;
    EventKind kind = EventKind::activation;
};

/**
 * @brief Piecewise-linear solution path of a PenalizedProblem.
 *
 * Knots are strictly decreasing and positive; `coefs[m]` is the exact solution
 * at `knots[m]`, and the λ = 0 endpoint (the OLS fit on the non-sentinel block)
 * is stored separately. Coefficients between adjacent knots are affine in λ.
 */
struct LassoPath {
    std::vector<double> knots;
    std::vector<Eigen::VectorXd> coefs;      ///< penalized block per knot
    std::vector<Eigen::VectorXd> det_coefs;  ///< unpenalized block per knot
    std::vector<std::vector<PathEvent>> events;
    Eigen::VectorXd coefs_zero;
    Eigen::VectorXd det_coefs_zero;
    Eigen::VectorXd det_coefs_null;  ///< det fit while all penalized coefficients are zero
    int n_penalized = 0;
};

/// Exact LARS path with the Lasso modification under per-coefficient penalty factors.
LassoPath solve_path(const PenalizedProblem& prob);

/// Solution of the penalized block at an arbitrary λ >= 0.
Eigen::VectorXd coefficients_at(const LassoPath& path, double lambda);

/// Unpenalized (det) coefficients at an arbitrary λ >= 0.
Eigen::VectorXd det_coefficients_at(const LassoPath& path, double lambda);

/// Largest λ at which each variable is added to the active set; absent if never.
std::vector<std::optional<double>> activation_knots(const LassoPath& path);

/// Variables ordered by activation threshold, descending; ties by column order.
std::vector<int> first_activation_order(const LassoPath& path);

struct KktReport {
    bool pass = false;
    double max_violation = 0.0;
    int worst_index = -1;
};

/**
 * @brief Verifies X_i'(y - Xβ - Dγ) = λ f_i sign(β_i) for active i and
 *        |X_i'(y - Xβ - Dγ)| <= λ f_i (1 + tol) for inactive i.
 *
 * When `det_coef` is absent, the unpenalized block is refit by least squares.
 */
KktReport kkt_check(const PenalizedProblem& prob, double lambda, const Eigen::VectorXd& beta,
                    double tol, const std::optional<Eigen::VectorXd>& det_coef = {});

/// One row per knot: lambda, event, variable, then the full coefficient vector.
void write_path_csv(const LassoPath& path, std::ostream& os,
                    const std::vector<std::string>& column_names = {});

}  // namespace alie
