#include "alie/select.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace alie {

namespace {

double bic_value(const PenalizedProblem& prob, const Eigen::VectorXd& beta,
                 const Eigen::VectorXd& det_coef) {
    Eigen::VectorXd r = prob.y - prob.X * beta;
    if (prob.det.cols() > 0) r -= prob.det * det_coef;
    const double m = static_cast<double>(prob.y.size());
    int df = 0;
    for (int i = 0; i < beta.size(); ++i)
        if (beta[i] != 0.0) ++df;
    return std::log(r.squaredNorm() / m) + df * std::log(m) / m;
}

template <typename F>
auto with_stage(const char* stage, F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string(stage) + ": " + e.what());
    }
}

}  // namespace

BicTuneResult bic_tune(const LassoPath& path, const PenalizedProblem& prob) {
    BicTuneResult best;
    bool have = false;
    auto eval = [&](double lam, const Eigen::VectorXd& beta, const Eigen::VectorXd& det_coef) {
        const double bic = bic_value(prob, beta, det_coef);
        if (!have || bic < best.bic) {  // knots are visited in descending λ order
            have = true;
            best = {lam, beta, bic};
        }
    };
    for (std::size_t m = 0; m < path.knots.size(); ++m)
        eval(path.knots[m], path.coefs[m], path.det_coefs[m]);
    eval(0.0, path.coefs_zero, path.det_coefs_zero);
    return best;
}

SelectionContext make_selection_context(const TimeSeries& y, DetrendMode det,
                                        std::optional<int> p) {
    const int T = y.size();
    if (T < 2) throw std::runtime_error("select: degenerate series");
    double mean = 0;
    for (double v : y.values) mean += v;
    mean /= T;
    double var = 0;
    for (double v : y.values) var += (v - mean) * (v - mean);
    if (var <= 0.0) throw std::runtime_error("select: degenerate series");

    SelectionContext ctx;
    ctx.trend = trend_adjusted(det);
    ctx.y_adj = with_stage("detrend", [&] {
        return detrend(y, det, ctx.trend ? kQdCbarDetrend : kQdCbarDemean);
    });
    ctx.p = p ? *p : schwert_pmax(T);
    ctx.design = with_stage("design", [&] {
        return build_adf_design(ctx.y_adj, ctx.p, DetComponents::none);
    });
    ctx.initial_fit =
        with_stage("initial-ols", [&] { return ols(ctx.design.regressors(), ctx.design.response); });
    return ctx;
}

SelectionResult select_from_context(const SelectionContext& ctx, const WeightSpec& spec) {
    spec.validate();
    const int p = ctx.p;
    Eigen::VectorXd factors = Eigen::VectorXd::Ones(p + 1);
    if (spec.estimator != Estimator::pl) {
        factors[0] = with_stage("weights", [&] {
            return inference_penalty_factor(ctx.initial_fit.coef[ctx.design.inference_index()],
                                            ctx.y_adj, spec, ctx.trend);
        });
        if (p > 0) factors.tail(p) = weights_lags(ctx.initial_fit.coef.tail(p), spec.gamma2);
    }

    PenalizedProblem prob;
    prob.X.resize(ctx.design.t_eff, p + 1);
    prob.X.col(0) = ctx.design.inference_col;
    if (p > 0) prob.X.rightCols(p) = ctx.design.lag_cols;
    prob.y = ctx.design.response;
    prob.factors = factors;

    LassoPath path = with_stage("path", [&] { return solve_path(prob); });
    BicTuneResult tuned = with_stage("bic", [&] { return bic_tune(path, prob); });

    SelectionResult res;
    res.lambda_bic = tuned.lambda;
    res.beta = tuned.beta;
    res.p = p;
    res.weights = factors;
    res.knots = path.knots;
    for (int i = 0; i < tuned.beta.size(); ++i)
        if (tuned.beta[i] != 0.0) res.active_set.push_back(i);
    res.includes_inference = tuned.beta[0] != 0.0;
    for (int j = 1; j <= p; ++j)
        if (tuned.beta[j] != 0.0) res.lag_pattern.push_back(j);
    res.classification =
        res.includes_inference ? Classification::stationary : Classification::nonstationary;
    res.activation_knot_inference = activation_knots(path)[0];
    return res;
}

SelectionResult select_model(const TimeSeries& y, const WeightSpec& spec, DetrendMode det,
                             std::optional<int> p) {
    return select_from_context(make_selection_context(y, det, p), spec);
}

std::string SelectionResult::to_json() const {
    nlohmann::json j;
    j["lambda_bic"] = lambda_bic;
    j["beta"] = std::vector<double>(beta.data(), beta.data() + beta.size());
    j["active_set"] = active_set;
    j["lag_pattern"] = lag_pattern;
    j["includes_inference"] = includes_inference;
    j["classification"] =
        classification == Classification::stationary ? "stationary" : "nonstationary";
    j["p"] = p;
    nlohmann::json diag;
    diag["weights"] = std::vector<double>(weights.data(), weights.data() + weights.size());
    diag["knots"] = knots;
    if (activation_knot_inference) diag["activation_knot_inference"] = *activation_knot_inference;
    j["diagnostics"] = diag;
    return j.dump(2);
}

}  // namespace alie
