#include <CLI11.hpp>
#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <random>

#include "alie/classic.hpp"
#include "alie/csv.hpp"
#include "alie/mc.hpp"
#include "alie/select.hpp"
#include "alie/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

struct SeedArg {
    std::optional<std::uint64_t> value;
    bool drawn = false;

    std::uint64_t resolve() {
        if (!value) {
            std::random_device rd;
            value = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
            drawn = true;
        }
        return *value;
    }
};

alie::DetComponents det_components_from_string(const std::string& s) {
    if (s == "const") return alie::DetComponents::constant;
    if (s == "trend") return alie::DetComponents::trend;
    throw CLI::ValidationError("--det must be const or trend");
}

struct SelectOptions {
    std::string input;
    std::string estimator = "alie";
    std::string det = "none";
    int p = -1;
    double gamma1 = 1.0, gamma2 = 1.0;
    double alpha = 0.1;
    double sigma_v = -1.0;  // resolved after the det mode is known
    int R = 150;
    std::string lrv_ic = "bic";
    int lrv_k = 0;
    SeedArg seed;
};

alie::WeightSpec build_weight_spec(const SelectOptions& opt, bool trend, std::uint64_t seed,
                                   int p_used) {
    alie::WeightSpec spec;
    spec.estimator = alie::estimator_from_string(opt.estimator);
    spec.gamma1 = opt.gamma1;
    spec.gamma2 = opt.gamma2;
    if (spec.estimator == alie::Estimator::alie) {
        alie::JSpec j;
        j.alpha = opt.alpha;
        j.sigma_v = opt.sigma_v > 0 ? opt.sigma_v : (trend ? 0.75 : 1.0);
        j.replications = opt.R;
        j.seed = seed;
        spec.j_spec = j;
        alie::LrvSpec lrv;
        lrv.criterion = alie::lrv_criterion_from_string(opt.lrv_ic);
        lrv.k_max = p_used;
        if (lrv.criterion == alie::LrvCriterion::fixed) {
            lrv.k_fixed = opt.lrv_k;
            lrv.k_max = std::max(p_used, opt.lrv_k);
        }
        spec.lrv_spec = lrv;
    }
    return spec;
}

int cmd_select(const SelectOptions& opt_in) {
    SelectOptions opt = opt_in;
    alie::TimeSeries y = alie::read_series_csv(opt.input);
    if (y.size() < 20) throw alie::CsvError("need at least 20 observations", 0);
    const alie::DetrendMode det = alie::detrend_mode_from_string(opt.det);
    const std::uint64_t seed = opt.seed.resolve();
    const int p_used = opt.p >= 0 ? opt.p : alie::schwert_pmax(y.size());
    const alie::WeightSpec spec =
        build_weight_spec(opt, alie::trend_adjusted(det), seed, p_used);
    alie::SelectionResult res = alie::select_model(y, spec, det, p_used);
    nlohmann::json j = nlohmann::json::parse(res.to_json());
    j["seed"] = seed;
    if (opt.seed.drawn) j["seed_drawn_from_entropy"] = true;
    std::cout << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_unit_root(bool dfqd, const std::string& input, const std::string& det,
                  const std::string& rule, int k, const std::string& format) {
    alie::TimeSeries y = alie::read_series_csv(input);
    const alie::DetComponents d = det_components_from_string(det);
    const alie::LagRule lr = alie::lag_rule_from_string(rule);
    const std::optional<int> kk = lr == alie::LagRule::fixed ? std::optional<int>(k) : std::nullopt;
    const alie::UnitRootTest res =
        dfqd ? alie::dfqd_test(y, d, lr, kk) : alie::adf_test(y, d, lr, kk);
    if (format == "json") {
        nlohmann::json j;
        j["test"] = dfqd ? "dfqd" : "adf";
        j["t_stat"] = res.t_stat;
        j["lags_used"] = res.lags_used;
        if (res.critical_value) j["critical_value_5pct"] = *res.critical_value;
        if (res.reject_5pct) j["reject_5pct"] = *res.reject_5pct;
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << (dfqd ? "DFQD" : "ADF") << " test\n"
                  << "  t statistic : " << res.t_stat << '\n'
                  << "  lags used   : " << res.lags_used << '\n';
        if (res.critical_value)
            std::cout << "  5% critical : " << *res.critical_value << '\n'
                      << "  decision    : "
                      << (*res.reject_5pct ? "reject unit root" : "do not reject") << '\n';
        else
            std::cout << "  decision    : no 5% critical value bundled for this case\n";
    }
    return kExitOk;
}

int cmd_path(const SelectOptions& opt_in, const std::string& out) {
    SelectOptions opt = opt_in;
    alie::TimeSeries y = alie::read_series_csv(opt.input);
    if (y.size() < 20) throw alie::CsvError("need at least 20 observations", 0);
    const alie::DetrendMode det = alie::detrend_mode_from_string(opt.det);
    const std::uint64_t seed = opt.seed.resolve();
    const int p_used = opt.p >= 0 ? opt.p : alie::schwert_pmax(y.size());
    const alie::WeightSpec spec =
        build_weight_spec(opt, alie::trend_adjusted(det), seed, p_used);

    alie::SelectionContext ctx = alie::make_selection_context(y, det, p_used);
    Eigen::VectorXd factors = Eigen::VectorXd::Ones(p_used + 1);
    if (spec.estimator != alie::Estimator::pl) {
        factors[0] = alie::inference_penalty_factor(
            ctx.initial_fit.coef[ctx.design.inference_index()], ctx.y_adj, spec, ctx.trend);
        if (p_used > 0)
            factors.tail(p_used) = alie::weights_lags(ctx.initial_fit.coef.tail(p_used),
                                                      spec.gamma2);
    }
    alie::PenalizedProblem prob;
    prob.X.resize(ctx.design.t_eff, p_used + 1);
    prob.X.col(0) = ctx.design.inference_col;
    if (p_used > 0) prob.X.rightCols(p_used) = ctx.design.lag_cols;
    prob.y = ctx.design.response;
    prob.factors = factors;
    alie::LassoPath path = alie::solve_path(prob);

    if (opt.seed.drawn) std::cerr << "seed drawn from entropy: " << seed << '\n';
    std::vector<std::string> names{"rho"};
    for (int j = 1; j <= p_used; ++j) names.push_back("delta" + std::to_string(j));
    if (out.empty()) {
        alie::write_path_csv(path, std::cout, names);
    } else {
        std::ofstream os(out);
        if (!os) throw alie::CsvError("cannot open " + out, 0);
        alie::write_path_csv(path, os, names);
    }
    return kExitOk;
}

int cmd_mc(const std::string& config_path, const std::string& out_dir, int reps_override,
           int workers_override, SeedArg seed) {
    alie::ExperimentConfig cfg = alie::load_experiment_config(config_path);
    if (reps_override > 0) cfg.reps = reps_override;
    if (workers_override > 0) cfg.workers = workers_override;
    if (seed.value) cfg.base_seed = *seed.value;
    std::filesystem::create_directories(out_dir);
    alie::McResult result = alie::run_experiment(cfg);
    alie::export_csv(result, out_dir + "/results.csv");
    alie::write_manifest(cfg, out_dir + "/manifest.json");
    std::cerr << "wrote " << result.cells.size() << " cells to " << out_dir << "/results.csv\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Information-enriched adaptive Lasso model selection for autoregressions"};
    app.set_version_flag("--version", alie::kVersion);
    app.require_subcommand(1);

    SelectOptions sopt;
    std::string format = "human";
    std::string ur_input, ur_det = "const", ur_rule = "bic";
    int ur_k = 0;
    std::string path_out;
    std::string mc_config, mc_out = "mc-out";
    int mc_reps = 0, mc_workers = 0;
    SeedArg mc_seed;

    auto add_select_flags = [&](CLI::App* cmd) {
        cmd->add_option("input", sopt.input, "CSV file with one numeric column")->required();
        cmd->add_option("--estimator", sopt.estimator, "pl, al or alie")
            ->check(CLI::IsMember({"pl", "al", "alie"}));
        cmd->add_option("--det", sopt.det,
                        "none, const, trend, fd-demean, fd-detrend, qd-demean, qd-detrend");
        cmd->add_option("--p", sopt.p, "lag order (default: Schwert rule)");
        cmd->add_option("--gamma1", sopt.gamma1, "weight exponent for y_{t-1}");
        cmd->add_option("--gamma2", sopt.gamma2, "weight exponent for the lags");
        cmd->add_option("--alpha", sopt.alpha, "quantile-range level of the J statistic");
        cmd->add_option("--sigma-v", sopt.sigma_v,
                        "random-walk sd in the J simulation (default 1, 0.75 under trend)");
        cmd->add_option("--R", sopt.R, "J simulation replications");
        cmd->add_option("--lrv-ic", sopt.lrv_ic, "bic, aic, mbic, maic or fixed")
            ->check(CLI::IsMember({"bic", "aic", "mbic", "maic", "fixed"}));
        cmd->add_option("--lrv-k", sopt.lrv_k, "lag for --lrv-ic fixed");
        cmd->add_option("--seed", sopt.seed.value, "RNG seed (drawn from entropy if omitted)");
    };

    CLI::App* select = app.add_subcommand("select", "BIC-tuned adaptive Lasso model selection");
    add_select_flags(select);

    CLI::App* adf = app.add_subcommand("adf", "classical ADF unit root test");
    CLI::App* dfqd = app.add_subcommand("dfqd", "quasi-difference adjusted ADF test");
    for (CLI::App* cmd : {adf, dfqd}) {
        cmd->add_option("input", ur_input, "CSV file with one numeric column")->required();
        cmd->add_option("--det", ur_det, "const or trend")
            ->check(CLI::IsMember({"const", "trend"}));
        cmd->add_option("--lag-rule", ur_rule, "aic, bic, maic or fixed")
            ->check(CLI::IsMember({"aic", "bic", "maic", "fixed"}));
        cmd->add_option("--k", ur_k, "lag for --lag-rule fixed");
        cmd->add_option("--format", format, "human or json")
            ->check(CLI::IsMember({"human", "json"}));
    }

    CLI::App* pathcmd = app.add_subcommand("path", "dump the weighted Lasso solution path");
    add_select_flags(pathcmd);
    pathcmd->add_option("--out", path_out, "output CSV (default: stdout)");

    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo experiment harness");
    mc->add_option("--config", mc_config, "experiment config file")->required();
    mc->add_option("--out", mc_out, "output directory");
    mc->add_option("--reps", mc_reps, "override replication count");
    mc->add_option("--workers", mc_workers, "override worker count");
    mc->add_option("--seed", mc_seed.value, "override base seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (select->parsed()) return cmd_select(sopt);
        if (adf->parsed()) return cmd_unit_root(false, ur_input, ur_det, ur_rule, ur_k, format);
        if (dfqd->parsed()) return cmd_unit_root(true, ur_input, ur_det, ur_rule, ur_k, format);
        if (pathcmd->parsed()) return cmd_path(sopt, path_out);
        if (mc->parsed()) return cmd_mc(mc_config, mc_out, mc_reps, mc_workers, mc_seed);
    } catch (const alie::CsvError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitOk;
}
