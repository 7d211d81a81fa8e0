#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace alie {

/// Thrown when a regressor is (numerically) in the span of the preceding columns.
struct RankDeficiencyError : std::runtime_error {
    explicit RankDeficiencyError(int col)
        : std::runtime_error("ols: column " + std::to_string(col) +
                             " is collinear with the preceding columns"),
          column(col) {}
    int column;
};

struct OlsFit {
    Eigen::VectorXd coef;
    Eigen::VectorXd residuals;
    Eigen::VectorXd std_errors;
    Eigen::VectorXd t_stats;
    double rss = 0.0;
};

/**
 * @brief Least squares via Householder QR.
 *
 * Requires rows(X) > cols(X). A column whose R² on the preceding columns
 * exceeds 1 - 1e-10 raises RankDeficiencyError with the offending index.
 */
OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

}  // namespace alie
