#include "alie/design.hpp"

#include <stdexcept>

namespace alie {

Eigen::MatrixXd AdfDesign::regressors() const {
    Eigen::MatrixXd X(t_eff, n_det() + 1 + p);
    if (n_det() > 0) X.leftCols(n_det()) = det_cols;
    X.col(n_det()) = inference_col;
    if (p > 0) X.rightCols(p) = lag_cols;
    return X;
}

AdfDesign build_adf_design(const TimeSeries& y, int p, DetComponents det) {
    const int T = y.size();
    if (p < 0) throw std::invalid_argument("build_adf_design: p must be >= 0");
    const int ndet = det == DetComponents::none ? 0 : (det == DetComponents::constant ? 1 : 2);
    if (T <= p + 2 + ndet)
        throw std::invalid_argument("build_adf_design: insufficient observations");

    AdfDesign d;
    d.p = p;
    d.t_eff = T - p - 1;
    d.response.resize(d.t_eff);
    d.inference_col.resize(d.t_eff);
    d.lag_cols.resize(d.t_eff, p);
    d.det_cols.resize(d.t_eff, ndet);

    const auto& v = y.values;
    for (int r = 0; r < d.t_eff; ++r) {
        const int t = p + 1 + r;  // 0-based index of the response observation
        d.response[r] = v[t] - v[t - 1];
        d.inference_col[r] = v[t - 1];
        for (int j = 1; j <= p; ++j) d.lag_cols(r, j - 1) = v[t - j] - v[t - j - 1];
        if (ndet >= 1) d.det_cols(r, 0) = 1.0;
        if (ndet == 2) d.det_cols(r, 1) = static_cast<double>(t + 1);  // calendar time
    }
    return d;
}

}  // namespace alie
