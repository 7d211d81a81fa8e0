#include <doctest.h>

#include <cmath>

#include "alie/classic.hpp"
#include "alie/dgp.hpp"
#include "alie/detrend.hpp"
#include "alie/ols.hpp"
#include "alie/select.hpp"

using namespace alie;

TEST_CASE("adf rejects a strongly stationary ar(1) at T=500") {
    int rejections = 0;
    const int seeds = 50;
    for (int s = 0; s < seeds; ++s) {
        TimeSeries y = simulate_ar1(0.5, 500, 1.0, 100 + s);
        UnitRootTest res = adf_test(y, DetComponents::constant, LagRule::fixed, 0);
        REQUIRE(res.reject_5pct.has_value());
        if (*res.reject_5pct) ++rejections;
    }
    CHECK(rejections >= static_cast<int>(0.99 * seeds));
}

TEST_CASE("adf size on random walks is roughly five percent") {
    // smoke-scale version of the acceptance criterion
    int rejections = 0;
    const int seeds = 400;
    for (int s = 0; s < seeds; ++s) {
        TimeSeries y = simulate_ar1(1.0, 100, 1.0, 900 + s);
        UnitRootTest res = adf_test(y, DetComponents::constant, LagRule::fixed, 0);
        if (*res.reject_5pct) ++rejections;
    }
    const double rate = static_cast<double>(rejections) / seeds;
    CHECK(rate > 0.02);
    CHECK(rate < 0.09);
}

TEST_CASE("dfqd size on random walks is roughly five percent") {
    int rejections = 0;
    const int seeds = 400;
    for (int s = 0; s < seeds; ++s) {
        TimeSeries y = simulate_ar1(1.0, 100, 1.0, 2900 + s);
        UnitRootTest res = dfqd_test(y, DetComponents::constant, LagRule::fixed, 0);
        if (*res.reject_5pct) ++rejections;
    }
    const double rate = static_cast<double>(rejections) / seeds;
    CHECK(rate > 0.02);
    CHECK(rate < 0.1);
}

TEST_CASE("dfqd is invariant to an additive constant") {
    TimeSeries y = simulate_ar1(1.0, 150, 1.0, 77);
    TimeSeries shifted = y;
    for (double& v : shifted.values) v += 123.0;
    UnitRootTest a = dfqd_test(y, DetComponents::constant, LagRule::fixed, 2);
    UnitRootTest b = dfqd_test(shifted, DetComponents::constant, LagRule::fixed, 2);
    CHECK(a.t_stat == doctest::Approx(b.t_stat).epsilon(1e-10));
}

TEST_CASE("dfqd on a constant series is degenerate") {
    TimeSeries y;
    y.values.assign(100, 4.0);
    CHECK_THROWS(dfqd_test(y, DetComponents::constant, LagRule::fixed, 1));
}

TEST_CASE("adf with fixed lag shares its rho estimate with the unpenalized path endpoint") {
    TimeSeries y = simulate_ar1(0.9, 200, 1.0, 13);
    const int k = 3;
    // path endpoint at lambda=0 on the same design
    TimeSeries adj = detrend(y, DetrendMode::ols_demean);
    AdfDesign d = build_adf_design(adj, k, DetComponents::none);
    PenalizedProblem prob;
    prob.X.resize(d.t_eff, k + 1);
    prob.X.col(0) = d.inference_col;
    prob.X.rightCols(k) = d.lag_cols;
    prob.y = d.response;
    prob.factors = Eigen::VectorXd::Ones(k + 1);
    LassoPath path = solve_path(prob);

    AdfDesign d2 = build_adf_design(adj, k, DetComponents::none);
    OlsFit fit = ols(d2.regressors(), d2.response);
    CHECK(path.coefs_zero[0] == doctest::Approx(fit.coef[0]).epsilon(1e-10));
}

TEST_CASE("trend case carries no bundled critical value") {
    TimeSeries y = simulate_ar1(1.0, 200, 1.0, 21);
    UnitRootTest res = adf_test(y, DetComponents::trend, LagRule::fixed, 1);
    CHECK_FALSE(res.reject_5pct.has_value());
    CHECK_FALSE(res.critical_value.has_value());
}

TEST_CASE("lag rules resolve through the information criteria") {
    TimeSeries y = simulate_adf_dgp(
        [] {
            AdfDgpSpec s;
            s.rho_star = -0.1;
            s.delta_star = {0.5};
            s.T = 2000;
            return s;
        }(),
        5);
    UnitRootTest res = adf_test(y, DetComponents::constant, LagRule::bic);
    CHECK(res.lags_used >= 1);
    CHECK(res.lags_used <= schwert_pmax(2000));
}

TEST_CASE("exhaustive bic search recovers a strong planted pattern") {
    AdfDgpSpec dgp;
    dgp.rho_star = -0.1;
    dgp.delta_star = {0.4, 0, 0, 0.3, 0, 0, 0, 0.2};  // lags {1, 4, 8}
    dgp.T = 10000;
    int hits = 0;
    const int seeds = 15;
    for (int s = 0; s < seeds; ++s) {
        TimeSeries y = simulate_adf_dgp(dgp, 500 + s);
        const auto pattern = exhaustive_bic_pattern(y, 10, DetComponents::constant, true);
        const std::vector<int> want{1, 4, 8};
        if (pattern == want) ++hits;
    }
    CHECK(hits >= static_cast<int>(0.95 * seeds));
}

TEST_CASE("white-noise differences lead to an empty pattern") {
    int empties = 0;
    const int seeds = 15;
    for (int s = 0; s < seeds; ++s) {
        TimeSeries y = simulate_ar1(1.0, 5000, 1.0, 4100 + s);
        if (exhaustive_bic_pattern(y, 8, DetComponents::constant, true).empty()) ++empties;
    }
    CHECK(empties >= static_cast<int>(0.9 * seeds));
}

TEST_CASE("combinatorial guard on p_max") {
    TimeSeries y = simulate_ar1(1.0, 200, 1.0, 3);
    CHECK_THROWS_AS(exhaustive_bic_pattern(y, 13, DetComponents::constant, true),
                    std::invalid_argument);
}
