#include <doctest.h>

#include <cmath>

#include "alie/dgp.hpp"
#include "alie/rng.hpp"
#include "alie/select.hpp"
#include "oracles.hpp"

using namespace alie;

namespace {

WeightSpec alie_spec(std::uint64_t j_seed, int k_max) {
    WeightSpec spec;
    spec.estimator = Estimator::alie;
    JSpec j;
    j.seed = j_seed;
    spec.j_spec = j;
    LrvSpec lrv;
    lrv.criterion = LrvCriterion::bic;
    lrv.k_max = k_max;
    spec.lrv_spec = lrv;
    return spec;
}

}  // namespace

TEST_CASE("bic prefers the empty model on pure noise with heavy weights") {
    Rng rng(21);
    PenalizedProblem prob;
    const int n = 80, k = 4;
    prob.X.resize(n, k);
    prob.y.resize(n);
    for (int i = 0; i < prob.X.size(); ++i) prob.X.data()[i] = rng.normal();
    for (int i = 0; i < n; ++i) prob.y[i] = rng.normal();
    prob.factors = Eigen::VectorXd::Constant(k, 50.0);
    LassoPath path = solve_path(prob);
    BicTuneResult tuned = bic_tune(path, prob);
    CHECK(tuned.lambda == doctest::Approx(path.knots.front()));
    CHECK(tuned.beta.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("knot-wise argmin is never beaten by a dense lambda grid") {
    Rng rng(22);
    for (int trial = 0; trial < 5; ++trial) {
        PenalizedProblem prob;
        const int n = 60, k = 5;
        prob.X.resize(n, k);
        prob.y.resize(n);
        for (int i = 0; i < prob.X.size(); ++i) prob.X.data()[i] = rng.normal();
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
        beta[0] = 1.0;
        beta[2] = -0.7;
        prob.y = prob.X * beta;
        for (int i = 0; i < n; ++i) prob.y[i] += rng.normal();
        prob.factors = Eigen::VectorXd::Ones(k);
        LassoPath path = solve_path(prob);
        BicTuneResult tuned = bic_tune(path, prob);

        auto bic_of = [&](const Eigen::VectorXd& b) {
            const double m = n;
            int df = 0;
            for (int i = 0; i < k; ++i)
                if (b[i] != 0.0) ++df;
            return std::log((prob.y - prob.X * b).squaredNorm() / m) + df * std::log(m) / m;
        };
        const double lam1 = path.knots.front();
        for (int g = 0; g < 10000; ++g) {
            const double lam = lam1 * std::pow(10.0, -4.0 * g / 9999.0);
            CHECK(bic_of(coefficients_at(path, lam)) >= tuned.bic - 1e-9);
        }
    }
}

TEST_CASE("stationary sparse dgp recovers the full active set at large T") {
    AdfDgpSpec dgp;
    dgp.rho_star = -0.05;
    dgp.delta_star = {0.4, 0.3, 0.2};
    dgp.T = 10000;
    int hits = 0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        TimeSeries y = simulate_adf_dgp(dgp, 3000 + s);
        SelectionResult res = select_model(y, alie_spec(6000 + s, 0), DetrendMode::none);
        const std::vector<int> want{1, 2, 3};
        if (res.includes_inference && res.lag_pattern == want) ++hits;
    }
    CHECK(hits >= static_cast<int>(0.95 * seeds));
}

TEST_CASE("classification matches the inference coefficient") {
    TimeSeries y = simulate_ar1(0.9, 300, 1.0, 5);
    for (Estimator est : {Estimator::pl, Estimator::al, Estimator::alie}) {
        WeightSpec spec = alie_spec(9, 0);
        spec.estimator = est;
        if (est != Estimator::alie) {
            spec.j_spec.reset();
            spec.lrv_spec.reset();
        }
        SelectionResult res = select_model(y, spec, DetrendMode::none);
        CHECK(res.includes_inference == (res.beta[0] != 0.0));
        CHECK((res.classification == Classification::stationary) == res.includes_inference);
        for (int i : res.active_set) CHECK(res.beta[i] != 0.0);
    }
}

TEST_CASE("degenerate series is rejected with a stage label") {
    TimeSeries y;
    y.values.assign(50, 2.5);
    WeightSpec spec;
    spec.estimator = Estimator::al;
    CHECK_THROWS_WITH_AS(select_model(y, spec, DetrendMode::none), "select: degenerate series",
                         std::runtime_error);
}

TEST_CASE("errors propagate with the failing stage named") {
    TimeSeries y = simulate_ar1(0.5, 30, 1.0, 7);
    WeightSpec spec;
    spec.estimator = Estimator::al;
    try {
        select_model(y, spec, DetrendMode::none, 28);  // design cannot fit
        FAIL("expected an error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("design:") == 0);
    }
}

TEST_CASE("deterministic end to end under fixed seeds") {
    TimeSeries y = simulate_ar1(1.0, 150, 1.0, 42);
    SelectionResult a = select_model(y, alie_spec(11, 0), DetrendMode::none);
    SelectionResult b = select_model(y, alie_spec(11, 0), DetrendMode::none);
    CHECK(a.lambda_bic == b.lambda_bic);
    CHECK((a.beta - b.beta).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("factor rescaling rescales knots and keeps the active set") {
    TimeSeries y = simulate_ar1(0.95, 200, 1.0, 31);
    WeightSpec al;
    al.estimator = Estimator::al;
    SelectionContext ctx = make_selection_context(y, DetrendMode::none);
    SelectionResult base = select_from_context(ctx, al);

    // multiply every factor by c: every knot scales by c, the active set is unchanged
    const double c = 3.0;
    PenalizedProblem prob;
    prob.X.resize(ctx.design.t_eff, ctx.p + 1);
    prob.X.col(0) = ctx.design.inference_col;
    prob.X.rightCols(ctx.p) = ctx.design.lag_cols;
    prob.y = ctx.design.response;
    prob.factors = base.weights;
    LassoPath p1 = solve_path(prob);
    BicTuneResult t1 = bic_tune(p1, prob);
    prob.factors = base.weights * c;
    LassoPath p2 = solve_path(prob);
    BicTuneResult t2 = bic_tune(p2, prob);
    REQUIRE(p1.knots.size() == p2.knots.size());
    // scaling every factor by c maps the path through λ -> λ/c
    for (std::size_t m = 0; m < p1.knots.size(); ++m)
        CHECK(p2.knots[m] == doctest::Approx(p1.knots[m] / c).epsilon(1e-9));
    CHECK(t2.lambda == doctest::Approx(t1.lambda / c).epsilon(1e-9));
    for (int i = 0; i < t1.beta.size(); ++i)
        CHECK((t1.beta[i] != 0.0) == (t2.beta[i] != 0.0));
}

TEST_CASE("json serialization carries the contract fields") {
    TimeSeries y = simulate_ar1(0.9, 120, 1.0, 55);
    SelectionResult res = select_model(y, alie_spec(3, 0), DetrendMode::none);
    const std::string js = res.to_json();
    for (const char* key : {"lambda_bic", "beta", "active_set", "lag_pattern", "classification",
                            "diagnostics", "weights", "knots"}) {
        CHECK(js.find(key) != std::string::npos);
    }
}

TEST_CASE("inference deactivations below the first activation become rarer with T") {
    // finite-sample analogue of perpetual activation for stationary data
    AdfDgpSpec dgp;
    dgp.rho_star = -0.05;
    dgp.delta_star = {0.4, 0.3, 0.2};
    double frac[2] = {0, 0};
    const int Ts[2] = {100, 600};
    const int seeds = 250;
    for (int i = 0; i < 2; ++i) {
        dgp.T = Ts[i];
        int with_drop = 0;
        for (int s = 0; s < seeds; ++s) {
            TimeSeries y = simulate_adf_dgp(dgp, 150000 + 31 * Ts[i] + s);
            SelectionContext ctx = make_selection_context(y, DetrendMode::none);
            WeightSpec spec = alie_spec(170000 + Ts[i] + s, schwert_pmax(Ts[i]));
            Eigen::VectorXd factors(ctx.p + 1);
            factors[0] = inference_penalty_factor(
                ctx.initial_fit.coef[ctx.design.inference_index()], ctx.y_adj, spec, false);
            factors.tail(ctx.p) = weights_lags(ctx.initial_fit.coef.tail(ctx.p), 1.0);
            PenalizedProblem prob;
            prob.X.resize(ctx.design.t_eff, ctx.p + 1);
            prob.X.col(0) = ctx.design.inference_col;
            prob.X.rightCols(ctx.p) = ctx.design.lag_cols;
            prob.y = ctx.design.response;
            prob.factors = factors;
            LassoPath path = solve_path(prob);
            bool dropped = false;
            for (std::size_t m = 0; m < path.knots.size() && !dropped; ++m)
                for (const PathEvent& e : path.events[m])
                    if (e.variable == 0 && e.kind == EventKind::deactivation) dropped = true;
            if (dropped) ++with_drop;
        }
        frac[i] = static_cast<double>(with_drop) / seeds;
    }
    CHECK(frac[1] < frac[0]);
}

TEST_CASE("detrended pipeline runs end to end with the trend-adjusted statistic") {
    TimeSeries y = simulate_ar1(0.9, 200, 1.0, 61);
    const double psi[] = {3.0, 0.4};
    y = add_deterministic(y, psi);
    WeightSpec spec = alie_spec(62, 0);
    spec.j_spec->sigma_v = 0.75;
    SelectionResult res = select_model(y, spec, DetrendMode::fd_detrend);
    CHECK(std::isfinite(res.lambda_bic));
    CHECK(res.weights.size() == res.p + 1);
    SelectionResult res2 = select_model(y, spec, DetrendMode::qd_detrend);
    CHECK(std::isfinite(res2.lambda_bic));
}
