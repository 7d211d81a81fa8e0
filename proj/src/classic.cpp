#include "alie/classic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "alie/detrend.hpp"
#include "alie/lrv.hpp"
#include "alie/ols.hpp"

namespace alie {

namespace {

constexpr double kAdfConst5pct = -2.89;
constexpr double kDfqdDemean5pct = -1.95;

int resolve_lag(const TimeSeries& y, DetComponents det, LagRule rule, std::optional<int> k) {
    if (rule == LagRule::fixed) {
        if (!k) throw std::invalid_argument("unit root test: fixed rule needs k");
        return *k;
    }
    LrvSpec spec;
    spec.k_max = schwert_pmax(y.size());
    spec.det = det;
    switch (rule) {
        case LagRule::aic: spec.criterion = LrvCriterion::aic; break;
        case LagRule::bic: spec.criterion = LrvCriterion::bic; break;
        case LagRule::maic: spec.criterion = LrvCriterion::maic; break;
        case LagRule::fixed: break;
    }
    return select_lag_ic(y, spec);
}

UnitRootTest run_adf(const TimeSeries& y, DetComponents det, LagRule rule, std::optional<int> k,
                     std::optional<double> cv) {
    const int lags = resolve_lag(y, det, rule, k);
    AdfDesign d = build_adf_design(y, lags, det);
    OlsFit fit = ols(d.regressors(), d.response);
    UnitRootTest res;
    res.t_stat = fit.t_stats[d.inference_index()];
    res.lags_used = lags;
    res.critical_value = cv;
    if (cv) res.reject_5pct = res.t_stat < *cv;
    return res;
}

}  // namespace

UnitRootTest adf_test(const TimeSeries& y, DetComponents det, LagRule rule, std::optional<int> k) {
    if (det == DetComponents::none)
        throw std::invalid_argument("adf_test: det must be constant or trend");
    const auto cv = det == DetComponents::constant ? std::optional<double>(kAdfConst5pct)
                                                   : std::nullopt;
    return run_adf(y, det, rule, k, cv);
}

UnitRootTest dfqd_test(const TimeSeries& y, DetComponents det, LagRule rule, std::optional<int> k) {
    if (det == DetComponents::none)
        throw std::invalid_argument("dfqd_test: det must be constant or trend");
    const bool demean = det == DetComponents::constant;
    TimeSeries adj = detrend(y, demean ? DetrendMode::qd_demean : DetrendMode::qd_detrend,
                             demean ? kQdCbarDemean : kQdCbarDetrend);
    const auto cv = demean ? std::optional<double>(kDfqdDemean5pct) : std::nullopt;
    return run_adf(adj, DetComponents::none, rule, k, cv);
}

std::vector<int> exhaustive_bic_pattern(const TimeSeries& y, int p_max, DetComponents det,
                                        bool force_inference) {
    if (p_max < 0) throw std::invalid_argument("exhaustive_bic_pattern: p_max must be >= 0");
    if (p_max > 12)
        throw std::invalid_argument("exhaustive_bic_pattern: p_max > 12 is combinatorially unsafe");

    AdfDesign d = build_adf_design(y, p_max, det);
    const int ndet = d.n_det();
    const int fixed = ndet + (force_inference ? 1 : 0);

    // Gram matrix over [det | y_{t-1} | lags]; candidate fits solve sub-systems only.
    Eigen::MatrixXd X(d.t_eff, ndet + 1 + p_max);
    if (ndet > 0) X.leftCols(ndet) = d.det_cols;
    X.col(ndet) = d.inference_col;
    if (p_max > 0) X.rightCols(p_max) = d.lag_cols;
    const Eigen::MatrixXd G = X.transpose() * X;
    const Eigen::VectorXd b = X.transpose() * d.response;
    const double yty = d.response.squaredNorm();
    const double m = static_cast<double>(d.t_eff);

    std::vector<int> cols(fixed);
    for (int i = 0; i < ndet; ++i) cols[i] = i;
    if (force_inference) cols[ndet] = ndet;

    double best_bic = std::numeric_limits<double>::infinity();
    unsigned best_mask = 0;
    for (unsigned mask = 0; mask < (1u << p_max); ++mask) {
        cols.resize(fixed);
        for (int j = 0; j < p_max; ++j)
            if (mask & (1u << j)) cols.push_back(ndet + 1 + j);
        const int kc = static_cast<int>(cols.size());
        double rss;
        if (kc == 0) {
            rss = yty;
        } else {
            Eigen::MatrixXd Gs(kc, kc);
            Eigen::VectorXd bs(kc);
            for (int i = 0; i < kc; ++i) {
                bs[i] = b[cols[i]];
                for (int j = 0; j < kc; ++j) Gs(i, j) = G(cols[i], cols[j]);
            }
            Eigen::LDLT<Eigen::MatrixXd> ldlt(Gs);
            if (ldlt.info() != Eigen::Success)
                throw std::runtime_error("exhaustive_bic_pattern: singular candidate fit");
            rss = yty - bs.dot(ldlt.solve(bs));
        }
        if (!(rss > 0.0)) throw std::runtime_error("exhaustive_bic_pattern: degenerate fit");
        const double bic = std::log(rss / m) + kc * std::log(m) / m;
        if (bic < best_bic) {
            best_bic = bic;
            best_mask = mask;
        }
    }
    std::vector<int> pattern;
    for (int j = 0; j < p_max; ++j)
        if (best_mask & (1u << j)) pattern.push_back(j + 1);
    return pattern;
}

LagRule lag_rule_from_string(const std::string& name) {
    if (name == "aic") return LagRule::aic;
    if (name == "bic") return LagRule::bic;
    if (name == "maic") return LagRule::maic;
    if (name == "fixed") return LagRule::fixed;
    throw std::invalid_argument("unknown lag rule: " + name);
}

std::string to_string(LagRule r) {
    switch (r) {
        case LagRule::aic: return "aic";
        case LagRule::bic: return "bic";
        case LagRule::maic: return "maic";
        case LagRule::fixed: return "fixed";
    }
    return "?";
}

}  // namespace alie
