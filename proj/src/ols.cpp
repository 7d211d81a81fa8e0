#include "alie/ols.hpp"

#include <cmath>

namespace alie {

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const int n = static_cast<int>(X.rows());
    const int k = static_cast<int>(X.cols());
    if (n != y.size()) throw std::invalid_argument("ols: dimension mismatch");
    if (k < 1) throw std::invalid_argument("ols: empty design");
    if (n <= k) throw std::invalid_argument("ols: need more rows than columns");

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
    const Eigen::MatrixXd R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    // |R_jj| < 1e-5·‖X_j‖ means the column's R² on its predecessors exceeds 1 - 1e-10
    for (int j = 0; j < k; ++j) {
        const double cnorm = X.col(j).norm();
        if (std::abs(R(j, j)) < 1e-5 * (cnorm + 1e-300)) throw RankDeficiencyError(j);
    }

    OlsFit fit;
    Eigen::VectorXd qty = (qr.householderQ().transpose() * y).head(k);
    fit.coef = R.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(qty);
    fit.residuals = y - X * fit.coef;
    fit.rss = fit.residuals.squaredNorm();

    const double sigma2 = fit.rss / (n - k);
    // var(beta) = sigma² (R'R)^{-1}; rows of R^{-1} give the column norms needed
    Eigen::MatrixXd rinv = R.topLeftCorner(k, k)
                               .triangularView<Eigen::Upper>()
                               .solve(Eigen::MatrixXd::Identity(k, k));
    fit.std_errors.resize(k);
    fit.t_stats.resize(k);
    for (int j = 0; j < k; ++j) {
        fit.std_errors[j] = std::sqrt(sigma2 * rinv.row(j).squaredNorm());
        fit.t_stats[j] = fit.coef[j] / fit.std_errors[j];
    }
    return fit;
}

}  // namespace alie
