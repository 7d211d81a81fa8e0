#include "alie/lrv.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "alie/ols.hpp"

namespace alie {

void LrvSpec::validate() const {
    if (criterion == LrvCriterion::fixed) {
        if (!k_fixed) throw std::invalid_argument("LrvSpec: fixed criterion needs k_fixed");
        if (*k_fixed < 0) throw std::invalid_argument("LrvSpec: k_fixed must be >= 0");
        if (k_max < *k_fixed) throw std::invalid_argument("LrvSpec: k_max must be >= k_fixed");
    } else if (k_fixed) {
        throw std::invalid_argument("LrvSpec: k_fixed only valid with the fixed criterion");
    }
    if (k_max < 0) throw std::invalid_argument("LrvSpec: k_max must be >= 0");
}

double lrv_ar(const TimeSeries& y, int k, DetComponents det) {
    const int T = y.size();
    AdfDesign d = build_adf_design(y, k, det);
    OlsFit fit = ols(d.regressors(), d.response);
    double delta_sum = 0.0;
    for (int j = 1; j <= k; ++j) delta_sum += fit.coef[d.lag_index(j)];
    const double denom = 1.0 - delta_sum;
    if (std::abs(denom) < 1e-8)
        throw std::runtime_error("lrv_ar: near-singular long-run denominator");
    const double dof = det == DetComponents::trend ? T - k - 2 : T - k;
    const double sigma2 = fit.rss / dof;
    return sigma2 / (denom * denom);
}

int select_lag_ic(const TimeSeries& y, const LrvSpec& spec) {
    spec.validate();
    if (spec.criterion == LrvCriterion::fixed) return *spec.k_fixed;

    const int T = y.size();
    const int k_max = spec.k_max;
    if (k_max >= T / 2) throw std::invalid_argument("select_lag_ic: k_max must be < T/2");

    // One design at k_max gives the common sample; nested fits come from a single QR.
    AdfDesign d = build_adf_design(y, k_max, spec.det);
    Eigen::MatrixXd X = d.regressors();
    const Eigen::VectorXd& r = d.response;
    const int ncols = static_cast<int>(X.cols());

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
    const Eigen::MatrixXd R = qr.matrixQR().topRows(ncols).triangularView<Eigen::Upper>();
    for (int j = 0; j < ncols; ++j) {
        if (std::abs(R(j, j)) < 1e-5 * (X.col(j).norm() + 1e-300)) throw RankDeficiencyError(j);
    }
    const Eigen::VectorXd qty = (qr.householderQ().transpose() * r).head(ncols);
    const double yty = r.squaredNorm();
    const double y2sum = d.inference_col.squaredNorm();

    const bool modified =
        spec.criterion == LrvCriterion::mbic || spec.criterion == LrvCriterion::maic;
    const double C =
        (spec.criterion == LrvCriterion::bic || spec.criterion == LrvCriterion::mbic)
            ? std::log(static_cast<double>(T))
            : 2.0;
    const double scale = static_cast<double>(T - k_max);

    int best_k = 0;
    double best_ic = std::numeric_limits<double>::infinity();
    double explained = 0.0;
    int col = 0;
    for (; col < d.n_det() + 1; ++col) explained += qty[col] * qty[col];
    for (int k = 0; k <= k_max; ++k) {
        if (k > 0) {
            explained += qty[col] * qty[col];
            ++col;
        }
        const double rss = std::max(yty - explained, 0.0);
        const double sigma2 = rss / scale;
        if (!(sigma2 > 0.0)) throw std::runtime_error("select_lag_ic: degenerate fit");
        double tau = 0.0;
        if (modified) {
            const int used = d.n_det() + 1 + k;
            Eigen::VectorXd beta = R.topLeftCorner(used, used)
                                       .triangularView<Eigen::Upper>()
                                       .solve(qty.head(used));
            const double rho_hat = beta[d.inference_index()];
            tau = rho_hat * rho_hat * y2sum / sigma2;
        }
        const double ic = std::log(sigma2) + C * (tau + k) / scale;
        if (ic < best_ic) {
            best_ic = ic;
            best_k = k;
        }
    }
    return best_k;
}

LrvCriterion lrv_criterion_from_string(const std::string& name) {
    if (name == "bic") return LrvCriterion::bic;
    if (name == "aic") return LrvCriterion::aic;
    if (name == "mbic") return LrvCriterion::mbic;
    if (name == "maic") return LrvCriterion::maic;
    if (name == "fixed") return LrvCriterion::fixed;
    throw std::invalid_argument("unknown lrv criterion: " + name);
}

std::string to_string(LrvCriterion c) {
    switch (c) {
        case LrvCriterion::bic: return "bic";
        case LrvCriterion::aic: return "aic";
        case LrvCriterion::mbic: return "mbic";
        case LrvCriterion::maic: return "maic";
        case LrvCriterion::fixed: return "fixed";
    }
    return "?";
}

}  // namespace alie
