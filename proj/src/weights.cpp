#include "alie/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "alie/ols.hpp"
#include "alie/rng.hpp"

namespace alie {

namespace {

constexpr std::uint64_t kJStreamTag = 0x4a53494dULL;  // "JSIM"

/// Linear interpolation between closest order statistics.
double empirical_quantile(const std::vector<double>& sorted, double prob) {
    const int n = static_cast<int>(sorted.size());
    const double h = (n - 1) * prob;
    const int lo = static_cast<int>(std::floor(h));
    const int hi = std::min(lo + 1, n - 1);
    return sorted[lo] + (h - lo) * (sorted[hi] - sorted[lo]);
}

}  // namespace

void JSpec::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("JSpec: alpha must be in (0,1)");
    if (!(sigma_v > 0.0)) throw std::invalid_argument("JSpec: sigma_v must be > 0");
    if (replications < 10)
        throw std::invalid_argument("JSpec: fewer than 10 replications makes quantiles meaningless");
}

void WeightSpec::validate() const {
    if (estimator == Estimator::pl) return;
    if (!(gamma1 > 0.0) || !(gamma2 > 0.0))
        throw std::invalid_argument("WeightSpec: gamma1 and gamma2 must be > 0");
    if (estimator == Estimator::alie) {
        if (!j_spec || !lrv_spec)
            throw std::invalid_argument("WeightSpec: ALIE requires j_spec and lrv_spec");
        j_spec->validate();
        lrv_spec->validate();
    }
}

double j_statistic(std::span<const double> y_scaled, const JSpec& spec, bool trend) {
    spec.validate();
    const int T = static_cast<int>(y_scaled.size());
    if (T < 3) throw std::invalid_argument("j_statistic: series too short");

    const int R = spec.replications;
    std::vector<double> zeta(R);
    std::vector<double> walk(T);
    // precomputed trend moments for the 3-column regression
    double sy = 0, sty = 0;
    if (trend) {
        for (int t = 0; t < T; ++t) {
            sy += y_scaled[t];
            sty += (t + 1) * y_scaled[t];
        }
    }
    const double n = T;
    const double st = n * (n + 1) / 2.0;
    const double stt = n * (n + 1) * (2 * n + 1) / 6.0;

    for (int r = 0; r < R; ++r) {
        Rng rng = Rng::derive(spec.seed, {kJStreamTag, static_cast<std::uint64_t>(r)});
        double q = 0.0;
        for (int t = 0; t < T; ++t) {
            q += rng.normal(spec.sigma_v);
            walk[t] = q;
        }
        if (!trend) {
            double sqy = 0, sqq = 0;
            for (int t = 0; t < T; ++t) {
                sqy += walk[t] * y_scaled[t];
                sqq += walk[t] * walk[t];
            }
            zeta[r] = sqy / sqq;
        } else {
            // slope on the walk in y = mu + ς t + ζ q + error, by 3x3 normal equations
            double sq = 0, sqt = 0, sqq = 0, sqy = 0;
            for (int t = 0; t < T; ++t) {
                sq += walk[t];
                sqt += (t + 1) * walk[t];
                sqq += walk[t] * walk[t];
                sqy += walk[t] * y_scaled[t];
            }
            Eigen::Matrix3d G;
            G << n, st, sq, st, stt, sqt, sq, sqt, sqq;
            Eigen::Vector3d b(sy, sty, sqy);
            zeta[r] = G.ldlt().solve(b)[2];
        }
    }
    std::sort(zeta.begin(), zeta.end());
    return std::abs(empirical_quantile(zeta, 1.0 - spec.alpha / 2.0) -
                    empirical_quantile(zeta, spec.alpha / 2.0));
}

double inference_penalty_factor(double rho_hat, const TimeSeries& y_adj, const WeightSpec& spec,
                                bool trend) {
    spec.validate();
    switch (spec.estimator) {
        case Estimator::pl:
            return 1.0;
        case Estimator::al: {
            if (rho_hat == 0.0) return kNeverActivate;
            return std::pow(std::abs(rho_hat), -spec.gamma1);
        }
        case Estimator::alie: {
            if (rho_hat == 0.0) return kNeverActivate;
            // under a removed trend the lrv regressions carry (1, t) and the
            // residual variance divides by T - k - 2
            LrvSpec lrv = *spec.lrv_spec;
            if (trend) lrv.det = DetComponents::trend;
            const int k = select_lag_ic(y_adj, lrv);
            const double omega2 = lrv_ar(y_adj, k, lrv.det);
            const double omega = std::sqrt(omega2);
            std::vector<double> scaled(y_adj.values.size());
            for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = y_adj.values[i] / omega;
            const double j = j_statistic(scaled, *spec.j_spec, trend);
            if (j == 0.0) throw std::runtime_error("weights: degenerate quantile range");
            return std::pow(std::abs(rho_hat / j), -spec.gamma1);
        }
    }
    throw std::logic_error("inference_penalty_factor: unknown estimator");
}

double weight_inference(const TimeSeries& y, const WeightSpec& spec, DetrendMode det,
                        std::optional<int> p) {
    if (spec.estimator == Estimator::pl) return 1.0;
    const bool trend = trend_adjusted(det);
    TimeSeries y_adj = detrend(y, det, trend ? kQdCbarDetrend : kQdCbarDemean);
    const int p_used = p ? *p : schwert_pmax(y.size());
    AdfDesign d = build_adf_design(y_adj, p_used, DetComponents::none);
    OlsFit fit = ols(d.regressors(), d.response);
    return inference_penalty_factor(fit.coef[d.inference_index()], y_adj, spec, trend);
}

Eigen::VectorXd weights_lags(const Eigen::VectorXd& delta_hats, double gamma2) {
    if (!(gamma2 > 0.0)) throw std::invalid_argument("weights_lags: gamma2 must be > 0");
    Eigen::VectorXd w(delta_hats.size());
    for (int j = 0; j < delta_hats.size(); ++j) {
        w[j] = delta_hats[j] == 0.0 ? kNeverActivate
                                    : std::pow(std::abs(delta_hats[j]), -gamma2);
    }
    return w;
}

Estimator estimator_from_string(const std::string& name) {
    if (name == "pl") return Estimator::pl;
    if (name == "al") return Estimator::al;
    if (name == "alie") return Estimator::alie;
    throw std::invalid_argument("unknown estimator: " + name);
}

std::string to_string(Estimator e) {
    switch (e) {
        case Estimator::pl: return "pl";
        case Estimator::al: return "al";
        case Estimator::alie: return "alie";
    }
    return "?";
}

}  // namespace alie
