#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "alie/detrend.hpp"
#include "alie/lrv.hpp"
#include "alie/weights.hpp"

namespace alie {

/// Data-generating processes the harness can draw from.
struct Ar1Dgp {};  ///< x_t = (1 + ρ*) x_{t-1} + u_t, u_t ~ N(0, 1)
struct AdfDgp {
    std::vector<double> delta;
    std::string label = "custom";
};
struct Ma1Dgp {
    double theta = 0.0;
};
using McDgp = std::variant<Ar1Dgp, AdfDgp, Ma1Dgp>;

struct ExperimentConfig {
    McDgp dgp;
    std::vector<double> rho_grid;
    std::vector<int> T_grid;
    std::optional<std::vector<int>> p_override;  ///< one entry, or one per T
    int reps = 2000;
    std::vector<Estimator> estimators;
    std::vector<DetrendMode> det_modes = {DetrendMode::none};
    double gamma1 = 1.0;
    double gamma2 = 1.0;
    JSpec j_spec;      ///< seed field is ignored; per-replication sub-streams are derived
    LrvSpec lrv_spec;  ///< k_max <= 0 resolves to p for each T
    std::uint64_t base_seed = 0;
    int workers = 1;

    void validate() const;
    std::string dgp_label() const;
    int p_for(int t_index) const;
};

/// One replication of the selection pipeline.
struct RepOutcome {
    bool ok = false;
    bool activated = false;
    std::vector<int> lag_pattern;
    double log_w1 = 0.0;
    std::optional<double> log_lambda0;
};

struct McCell {
    Estimator estimator = Estimator::al;
    int T = 0;
    double rho_star = 0.0;
    std::string delta_label;
    DetrendMode det = DetrendMode::none;
    int reps = 0;
    int failures = 0;
    bool flagged = false;  ///< more than 1% of replications failed
    long activation_count = 0;
    double activation_rate = 0.0;
    double activation_se = 0.0;
    std::optional<double> p_pattern_exact;
    std::optional<double> p_pattern_exact_se;
    std::optional<double> p_pattern_superset;
    std::optional<double> p_pattern_superset_se;
    std::optional<double> p_model_exact;
    std::optional<double> p_model_exact_se;
    double median_log_w1 = 0.0;
    double median_log_lambda0 = 0.0;
};

struct McResult {
    std::vector<McCell> cells;
};

/// Runs every (estimator, T, ρ*, det) cell; deterministic given base_seed
/// regardless of the number of workers.
McResult run_experiment(const ExperimentConfig& config);

struct PatternRates {
    std::optional<double> exact;
    std::optional<double> superset;
    std::optional<double> model;
};

/// Exact-match, superset, and full-model selection rates against a known pattern.
/// Exact rates are absent when the pattern span exceeds the fitted lag order.
PatternRates lag_pattern_metrics(std::span<const RepOutcome> outcomes,
                                 const std::vector<double>& true_delta, double rho_star,
                                 int p_used);

struct PredictiveValues {
    Estimator estimator = Estimator::al;
    DetrendMode det = DetrendMode::none;
    int T = 0;
    std::optional<double> ppv, ppv_se;
    std::optional<double> npv, npv_se;
};

/// PPV/NPV per estimator and det mode from a result pooled over ρ* = 0 and one
/// stationary ρ*; requires both cells with equal replication counts.
std::vector<PredictiveValues> classification_metrics(const McResult& pooled);

void export_csv(const McResult& result, const std::string& path);
McResult import_csv(const std::string& path);

/// Key/value section config file (see README for the schema).
ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig load_experiment_config(const std::string& path);

void write_manifest(const ExperimentConfig& config, const std::string& path);

}  // namespace alie
