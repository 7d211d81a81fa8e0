#pragma once

#include <Eigen/Dense>

#include "alie/series.hpp"

namespace alie {

/// Deterministic columns of an ADF regression.
enum class DetComponents { none, constant, trend };

/**
 * @brief Design of the ADF(p) regression Δy_t = d_t + ρ y_{t-1} + Σ_j δ_j Δy_{t-j} + ε_t.
 *
 * All columns are row-aligned: row r refers to calendar index t = p + 2 + r of a
 * series observed at t = 1..T, so t_eff = T - p - 1.
 */
struct AdfDesign {
    Eigen::VectorXd response;       ///< Δy_t
    Eigen::VectorXd inference_col;  ///< y_{t-1}
    Eigen::MatrixXd lag_cols;       ///< Δy_{t-1} .. Δy_{t-p}
    Eigen::MatrixXd det_cols;       ///< 0, 1 or 2 columns: (1) or (1, t)
    int p = 0;
    int t_eff = 0;

    /// Full regressor matrix in the fixed order [det | y_{t-1} | Δy lags].
    Eigen::MatrixXd regressors() const;

    int n_det() const { return static_cast<int>(det_cols.cols()); }
    int inference_index() const { return n_det(); }
    int lag_index(int j) const { return n_det() + j; }  ///< column of Δy_{t-j}, j = 1..p
};

AdfDesign build_adf_design(const TimeSeries& y, int p, DetComponents det);

}  // namespace alie
