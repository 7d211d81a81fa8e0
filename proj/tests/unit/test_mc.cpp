#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "alie/mc.hpp"

using namespace alie;

namespace {

ExperimentConfig smoke_config() {
    ExperimentConfig cfg;
    cfg.dgp = AdfDgp{{0.4, 0.3, 0.2}, "deltaA"};
    cfg.rho_grid = {0.0, -0.05};
    cfg.T_grid = {50};
    cfg.reps = 8;
    cfg.estimators = {Estimator::al, Estimator::alie};
    cfg.det_modes = {DetrendMode::none};
    cfg.base_seed = 99;
    cfg.workers = 2;
    return cfg;
}

}  // namespace

TEST_CASE("single-replication smoke cell yields one outcome per estimator") {
    ExperimentConfig cfg = smoke_config();
    cfg.reps = 1;
    McResult res = run_experiment(cfg);
    CHECK(res.cells.size() == 4);  // 2 estimators x 2 rho
    for (const auto& c : res.cells) {
        CHECK(c.reps == 1);
        CHECK(c.failures == 0);
    }
}

TEST_CASE("seed stability across worker counts") {
    ExperimentConfig cfg = smoke_config();
    cfg.workers = 1;
    McResult a = run_experiment(cfg);
    cfg.workers = 8;
    McResult b = run_experiment(cfg);
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i].activation_count == b.cells[i].activation_count);
        CHECK(a.cells[i].median_log_w1 == b.cells[i].median_log_w1);
        CHECK(a.cells[i].median_log_lambda0 == b.cells[i].median_log_lambda0);
    }
}

TEST_CASE("csv export and import round trip") {
    ExperimentConfig cfg = smoke_config();
    McResult res = run_experiment(cfg);
    const std::string path = "mc_roundtrip_test.csv";
    export_csv(res, path);
    McResult back = import_csv(path);
    REQUIRE(back.cells.size() == res.cells.size());
    for (std::size_t i = 0; i < res.cells.size(); ++i) {
        CHECK(back.cells[i].T == res.cells[i].T);
        CHECK(back.cells[i].rho_star == res.cells[i].rho_star);
        CHECK(back.cells[i].activation_rate == res.cells[i].activation_rate);
        CHECK(back.cells[i].median_log_w1 == res.cells[i].median_log_w1);
        CHECK(back.cells[i].p_pattern_exact == res.cells[i].p_pattern_exact);
        CHECK(back.cells[i].p_pattern_exact_se == res.cells[i].p_pattern_exact_se);
    }
    std::remove(path.c_str());
}

TEST_CASE("empty result exports a header-only file") {
    McResult empty;
    const std::string path = "mc_empty_test.csv";
    export_csv(empty, path);
    std::ifstream is(path);
    std::string line;
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 1);
    is.close();
    std::remove(path.c_str());
}

TEST_CASE("pattern metrics on synthetic outcomes") {
    std::vector<RepOutcome> outcomes(4);
    for (auto& o : outcomes) o.ok = true;
    outcomes[0].lag_pattern = {1, 3};
    outcomes[0].activated = true;
    outcomes[1].lag_pattern = {1, 2, 3};
    outcomes[1].activated = true;
    outcomes[2].lag_pattern = {1};
    outcomes[2].activated = false;
    outcomes[3].lag_pattern = {1, 3};
    outcomes[3].activated = false;

    const std::vector<double> truth{0.4, 0.0, 0.2};  // true pattern {1, 3}
    PatternRates r = lag_pattern_metrics(outcomes, truth, -0.05, 5);
    CHECK(*r.exact == doctest::Approx(0.5));
    CHECK(*r.superset == doctest::Approx(0.75));
    CHECK(*r.model == doctest::Approx(0.25));  // exact pattern and activated
}

TEST_CASE("pattern metrics absent when the span exceeds the lag order") {
    std::vector<RepOutcome> outcomes(2);
    for (auto& o : outcomes) o.ok = true;
    const std::vector<double> truth{0.4, 0, 0, 0, 0, 0, 0, 0, 0, 0.2};  // span 10
    PatternRates r = lag_pattern_metrics(outcomes, truth, 0.0, 8);
    CHECK_FALSE(r.exact.has_value());
    CHECK_FALSE(r.superset.has_value());
    CHECK_FALSE(r.model.has_value());
}

TEST_CASE("classification metrics from synthetic counts") {
    McResult pooled;
    McCell stat;
    stat.estimator = Estimator::alie;
    stat.T = 100;
    stat.rho_star = -0.05;
    stat.det = DetrendMode::none;
    stat.reps = 100;
    stat.activation_count = 80;
    McCell null = stat;
    null.rho_star = 0.0;
    null.activation_count = 10;
    pooled.cells = {null, stat};
    auto pv = classification_metrics(pooled);
    REQUIRE(pv.size() == 1);
    CHECK(*pv[0].ppv == doctest::Approx(80.0 / 90.0));
    CHECK(*pv[0].npv == doctest::Approx(90.0 / 110.0));
}

TEST_CASE("perfect classifier yields unit predictive values") {
    McResult pooled;
    McCell stat;
    stat.estimator = Estimator::al;
    stat.T = 50;
    stat.rho_star = -0.05;
    stat.reps = 40;
    stat.activation_count = 40;
    McCell null = stat;
    null.rho_star = 0.0;
    null.activation_count = 0;
    pooled.cells = {null, stat};
    auto pv = classification_metrics(pooled);
    REQUIRE(pv.size() == 1);
    CHECK(*pv[0].ppv == doctest::Approx(1.0));
    CHECK(*pv[0].npv == doctest::Approx(1.0));
}

TEST_CASE("always-activating estimator has no npv") {
    McResult pooled;
    McCell stat;
    stat.estimator = Estimator::pl;
    stat.T = 50;
    stat.rho_star = -0.05;
    stat.reps = 40;
    stat.activation_count = 40;
    McCell null = stat;
    null.rho_star = 0.0;
    null.activation_count = 40;
    pooled.cells = {null, stat};
    auto pv = classification_metrics(pooled);
    REQUIRE(pv.size() == 1);
    CHECK_FALSE(pv[0].npv.has_value());
    CHECK(pv[0].ppv.has_value());
}

TEST_CASE("config file parsing") {
    std::istringstream in(R"(
# comment
[experiment]
dgp = adf_dgp
delta = 0.4, 0.3, 0.2
label = deltaA
rho = 0, -0.05
T = 50, 100
p = 10, 12
reps = 25
estimators = al, alie
det = none, fd-demean
seed = 7
workers = 3

[weights]
gamma1 = 1.5
gamma2 = 0.5

[j]
alpha = 0.2
sigma_v = 0.75
R = 100

[lrv]
criterion = maic
k_max = 6
)");
    ExperimentConfig cfg = parse_experiment_config(in);
    cfg.validate();
    CHECK(cfg.dgp_label() == "deltaA");
    CHECK(cfg.rho_grid.size() == 2);
    CHECK(cfg.T_grid == std::vector<int>{50, 100});
    CHECK(cfg.p_for(0) == 10);
    CHECK(cfg.p_for(1) == 12);
    CHECK(cfg.reps == 25);
    CHECK(cfg.estimators.size() == 2);
    CHECK(cfg.det_modes.size() == 2);
    CHECK(cfg.base_seed == 7);
    CHECK(cfg.workers == 3);
    CHECK(cfg.gamma1 == 1.5);
    CHECK(cfg.j_spec.alpha == 0.2);
    CHECK(cfg.j_spec.sigma_v == 0.75);
    CHECK(cfg.j_spec.replications == 100);
    CHECK(cfg.lrv_spec.criterion == LrvCriterion::maic);
    CHECK(cfg.lrv_spec.k_max == 6);
}

TEST_CASE("config errors carry line numbers") {
    std::istringstream in("[experiment]\nbogus_key = 1\n");
    CHECK_THROWS_WITH_AS(parse_experiment_config(in), "config line 2: unknown key bogus_key",
                         std::runtime_error);
}

TEST_CASE("manifest is written next to results") {
    ExperimentConfig cfg = smoke_config();
    const std::string path = "mc_manifest_test.json";
    write_manifest(cfg, path);
    std::ifstream is(path);
    std::stringstream buf;
    buf << is.rdbuf();
    const std::string text = buf.str();
    CHECK(text.find("\"version\"") != std::string::npos);
    CHECK(text.find("\"base_seed\"") != std::string::npos);
    CHECK(text.find("deltaA") != std::string::npos);
    is.close();
    std::remove(path.c_str());
}

TEST_CASE("schwert default and overrides for p") {
    ExperimentConfig cfg = smoke_config();
    CHECK(cfg.p_for(0) == 10);  // schwert_pmax(50)
    cfg.p_override = std::vector<int>{7};
    CHECK(cfg.p_for(0) == 7);
}

TEST_CASE("invalid configs are rejected") {
    ExperimentConfig cfg = smoke_config();
    cfg.reps = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = smoke_config();
    cfg.rho_grid = {0.5};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = smoke_config();
    cfg.p_override = std::vector<int>{1, 2, 3};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("small-sample activation ordering between the adaptive estimators") {
    // at T=25 with the three-lag stationary design, OLS weights activate the
    // inference regressor far more often under the null than enriched weights
    ExperimentConfig cfg;
    cfg.dgp = AdfDgp{{0.4, 0.3, 0.2}, "deltaA"};
    cfg.rho_grid = {0.0};
    cfg.T_grid = {25};
    cfg.reps = 500;
    cfg.estimators = {Estimator::al, Estimator::alie};
    cfg.base_seed = 2025;
    cfg.workers = 2;
    McResult res = run_experiment(cfg);
    double al = -1, alie = -1;
    for (const auto& c : res.cells)
        (c.estimator == Estimator::al ? al : alie) = c.activation_rate;
    CHECK(al > 0.35);
    CHECK(alie < al - 0.1);
}

TEST_CASE("ma-error processes run through the harness without pattern metrics") {
    ExperimentConfig cfg;
    cfg.dgp = Ma1Dgp{0.8};
    cfg.rho_grid = {0.0, -0.05};
    cfg.T_grid = {50};
    cfg.reps = 6;
    cfg.estimators = {Estimator::alie};
    cfg.lrv_spec.criterion = LrvCriterion::maic;
    cfg.base_seed = 7;
    cfg.workers = 2;
    McResult res = run_experiment(cfg);
    REQUIRE(res.cells.size() == 2);
    for (const auto& c : res.cells) {
        CHECK(c.failures == 0);
        CHECK_FALSE(c.p_pattern_exact.has_value());
        CHECK(c.delta_label == "ma1(0.8)");
    }
}

TEST_CASE("fd-demeaned activation rates sit near the reference values") {
    ExperimentConfig cfg;
    cfg.dgp = AdfDgp{{0.4, 0.3, 0.2}, "deltaA"};
    cfg.rho_grid = {0.0, -0.05};
    cfg.T_grid = {100};
    cfg.reps = 400;
    cfg.estimators = {Estimator::al, Estimator::alie};
    cfg.det_modes = {DetrendMode::fd_demean};
    cfg.base_seed = 77;
    cfg.workers = 2;
    McResult res = run_experiment(cfg);
    auto rate = [&](Estimator e, double rho) {
        for (const auto& c : res.cells)
            if (c.estimator == e && c.rho_star == rho) return c.activation_rate;
        return -1.0;
    };
    CHECK(std::abs(rate(Estimator::al, 0.0) - 0.0944) < 0.05);
    CHECK(std::abs(rate(Estimator::alie, 0.0) - 0.0640) < 0.05);
    CHECK(std::abs(rate(Estimator::al, -0.05) - 0.7922) < 0.07);
    CHECK(std::abs(rate(Estimator::alie, -0.05) - 0.9150) < 0.06);
}

TEST_CASE("fd-detrended activation rates sit near the reference values") {
    // trend-adjusted statistic with alpha = .1 and sigma_v = .75
    ExperimentConfig cfg;
    cfg.dgp = AdfDgp{{0.4, 0.3, 0.2}, "deltaA"};
    cfg.rho_grid = {0.0, -0.05};
    cfg.T_grid = {100};
    cfg.reps = 400;
    cfg.estimators = {Estimator::al, Estimator::alie};
    cfg.det_modes = {DetrendMode::fd_detrend};
    cfg.j_spec.sigma_v = 0.75;
    cfg.base_seed = 78;
    cfg.workers = 2;
    McResult res = run_experiment(cfg);
    auto rate = [&](Estimator e, double rho) {
        for (const auto& c : res.cells)
            if (c.estimator == e && c.rho_star == rho) return c.activation_rate;
        return -1.0;
    };
    CHECK(std::abs(rate(Estimator::al, 0.0) - 0.1622) < 0.06);
    CHECK(std::abs(rate(Estimator::alie, 0.0) - 0.1530) < 0.06);
    CHECK(std::abs(rate(Estimator::al, -0.05) - 0.5726) < 0.08);
    CHECK(std::abs(rate(Estimator::alie, -0.05) - 0.7548) < 0.08);
}
