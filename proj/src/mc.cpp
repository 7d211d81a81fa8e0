#include "alie/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "alie/dgp.hpp"
#include "alie/rng.hpp"
#include "alie/select.hpp"
#include "alie/version.hpp"

namespace alie {

namespace {

constexpr std::uint64_t kDataTag = 0xda7aULL;
constexpr std::uint64_t kJTag = 0x4aULL;

double median(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double binomial_se(double p, long n) { return n > 0 ? std::sqrt(p * (1.0 - p) / n) : 0.0; }

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (reps < 1) throw std::invalid_argument("ExperimentConfig: reps must be >= 1");
    if (rho_grid.empty() || T_grid.empty())
        throw std::invalid_argument("ExperimentConfig: grids must be non-empty");
    if (estimators.empty()) throw std::invalid_argument("ExperimentConfig: no estimators");
    if (det_modes.empty()) throw std::invalid_argument("ExperimentConfig: no det modes");
    if (workers < 1) throw std::invalid_argument("ExperimentConfig: workers must be >= 1");
    if (p_override && p_override->size() != 1 && p_override->size() != T_grid.size())
        throw std::invalid_argument("ExperimentConfig: p override must have 1 or |T| entries");
    for (double r : rho_grid)
        if (!(r > -2.0 && r <= 0.0))
            throw std::invalid_argument("ExperimentConfig: rho_star must be in (-2, 0]");
    if (const auto* adf = std::get_if<AdfDgp>(&dgp)) {
        double s = 0;
        for (double d : adf->delta) s += d;
        if (!(s < 1.0)) throw std::invalid_argument("ExperimentConfig: sum of delta must be < 1");
    }
    if (lrv_spec.criterion == LrvCriterion::fixed && !lrv_spec.k_fixed)
        throw std::invalid_argument("ExperimentConfig: fixed lrv criterion needs k_fixed");
}

std::string ExperimentConfig::dgp_label() const {
    if (std::holds_alternative<Ar1Dgp>(dgp)) return "ar1";
    if (const auto* adf = std::get_if<AdfDgp>(&dgp)) return adf->label;
    char buf[32];
    std::snprintf(buf, sizeof buf, "ma1(%g)", std::get<Ma1Dgp>(dgp).theta);
    return buf;
}

int ExperimentConfig::p_for(int t_index) const {
    if (p_override)
        return p_override->size() == 1 ? (*p_override)[0] : (*p_override)[t_index];
    return schwert_pmax(T_grid[t_index]);
}

namespace {

TimeSeries simulate_cell(const McDgp& dgp, double rho_star, int T, std::uint64_t seed) {
    if (std::holds_alternative<Ar1Dgp>(dgp)) {
        return simulate_ar1(1.0 + rho_star, T, 1.0, seed);
    }
    if (const auto* adf = std::get_if<AdfDgp>(&dgp)) {
        AdfDgpSpec spec;
        spec.rho_star = rho_star;
        spec.delta_star = adf->delta;
        spec.T = T;
        return simulate_adf_dgp(spec, seed);
    }
    return simulate_unitroot_ma1(1.0 + rho_star, std::get<Ma1Dgp>(dgp).theta, T, seed);
}

}  // namespace

McResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    const int n_rho = static_cast<int>(config.rho_grid.size());
    const int n_t = static_cast<int>(config.T_grid.size());
    const int n_det = static_cast<int>(config.det_modes.size());
    const int n_est = static_cast<int>(config.estimators.size());
    const int n_cells = n_est * n_t * n_rho * n_det;

    auto cell_index = [&](int ei, int ti, int ri, int di) {
        return ((ei * n_t + ti) * n_rho + ri) * n_det + di;
    };
    std::vector<std::vector<RepOutcome>> outcomes(
        n_cells, std::vector<RepOutcome>(static_cast<std::size_t>(config.reps)));

    const long n_tasks = static_cast<long>(n_t) * n_rho * config.reps;
    std::atomic<long> next{0};

    auto worker = [&] {
        for (;;) {
            const long task = next.fetch_add(1);
            if (task >= n_tasks) return;
            const int rep = static_cast<int>(task % config.reps);
            const int ri = static_cast<int>((task / config.reps) % n_rho);
            const int ti = static_cast<int>(task / (static_cast<long>(config.reps) * n_rho));

            const int T = config.T_grid[ti];
            const double rho = config.rho_grid[ri];
            const std::uint64_t data_seed =
                Rng::derive(config.base_seed,
                            {kDataTag, static_cast<std::uint64_t>(ri),
                             static_cast<std::uint64_t>(ti), static_cast<std::uint64_t>(rep)})
                    .next();
            const std::uint64_t j_seed =
                Rng::derive(config.base_seed,
                            {kJTag, static_cast<std::uint64_t>(ri),
                             static_cast<std::uint64_t>(ti), static_cast<std::uint64_t>(rep)})
                    .next();

            TimeSeries y;
            try {
                y = simulate_cell(config.dgp, rho, T, data_seed);
            } catch (const std::exception&) {
                continue;  // leaves all outcomes of this replication marked failed
            }

            for (int di = 0; di < n_det; ++di) {
                SelectionContext ctx;
                bool ctx_ok = true;
                try {
                    ctx = make_selection_context(y, config.det_modes[di], config.p_for(ti));
                } catch (const std::exception&) {
                    ctx_ok = false;
                }
                for (int ei = 0; ei < n_est; ++ei) {
                    RepOutcome& out = outcomes[cell_index(ei, ti, ri, di)][rep];
                    if (!ctx_ok) continue;
                    WeightSpec spec;
                    spec.estimator = config.estimators[ei];
                    spec.gamma1 = config.gamma1;
                    spec.gamma2 = config.gamma2;
                    if (spec.estimator == Estimator::alie) {
                        JSpec j = config.j_spec;
                        j.seed = j_seed;
                        spec.j_spec = j;
                        LrvSpec lrv = config.lrv_spec;
                        if (lrv.k_max <= 0 && lrv.criterion != LrvCriterion::fixed)
                            lrv.k_max = config.p_for(ti);
                        if (lrv.criterion == LrvCriterion::fixed && lrv.k_max < *lrv.k_fixed)
                            lrv.k_max = *lrv.k_fixed;
                        spec.lrv_spec = lrv;
                    }
                    try {
                        SelectionResult res = select_from_context(ctx, spec);
                        out.ok = true;
                        out.activated = res.includes_inference;
                        out.lag_pattern = res.lag_pattern;
                        out.log_w1 = std::log(res.weights[0]) / spec.gamma1;
                        if (res.activation_knot_inference)
                            out.log_lambda0 = std::log(*res.activation_knot_inference);
                    } catch (const std::exception&) {
                        // failure recorded through out.ok
                    }
                }
            }
        }
    };

    std::vector<std::thread> pool;
    const int nw = std::min<long>(config.workers, n_tasks);
    for (int w = 1; w < nw; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::optional<std::vector<double>> true_delta;
    if (const auto* adf = std::get_if<AdfDgp>(&config.dgp))
        true_delta = adf->delta;
    else if (std::holds_alternative<Ar1Dgp>(config.dgp))
        true_delta = std::vector<double>{};  // empty true lag pattern

    McResult result;
    result.cells.reserve(n_cells);
    for (int ei = 0; ei < n_est; ++ei) {
        for (int ti = 0; ti < n_t; ++ti) {
            for (int ri = 0; ri < n_rho; ++ri) {
                for (int di = 0; di < n_det; ++di) {
                    const auto& reps = outcomes[cell_index(ei, ti, ri, di)];
                    McCell cell;
                    cell.estimator = config.estimators[ei];
                    cell.T = config.T_grid[ti];
                    cell.rho_star = config.rho_grid[ri];
                    cell.delta_label = config.dgp_label();
                    cell.det = config.det_modes[di];
                    cell.reps = config.reps;
                    long ok = 0;
                    std::vector<double> logw, loglam;
                    for (const RepOutcome& o : reps) {
                        if (!o.ok) continue;
                        ++ok;
                        if (o.activated) ++cell.activation_count;
                        logw.push_back(o.log_w1);
                        if (o.log_lambda0) loglam.push_back(*o.log_lambda0);
                    }
                    cell.failures = config.reps - static_cast<int>(ok);
                    cell.flagged = cell.failures > 0.01 * config.reps;
                    cell.activation_rate =
                        ok > 0 ? static_cast<double>(cell.activation_count) / ok : 0.0;
                    cell.activation_se = binomial_se(cell.activation_rate, ok);
                    if (true_delta) {
                        PatternRates rates = lag_pattern_metrics(reps, *true_delta,
                                                                 cell.rho_star, config.p_for(ti));
                        auto with_se = [&](const std::optional<double>& rate,
                                           std::optional<double>& dst_rate,
                                           std::optional<double>& dst_se) {
                            dst_rate = rate;
                            if (rate) dst_se = binomial_se(*rate, ok);
                        };
                        with_se(rates.exact, cell.p_pattern_exact, cell.p_pattern_exact_se);
                        with_se(rates.superset, cell.p_pattern_superset,
                                cell.p_pattern_superset_se);
                        with_se(rates.model, cell.p_model_exact, cell.p_model_exact_se);
                    }
                    cell.median_log_w1 = median(std::move(logw));
                    cell.median_log_lambda0 = median(std::move(loglam));
                    result.cells.push_back(std::move(cell));
                }
            }
        }
    }
    return result;
}

PatternRates lag_pattern_metrics(std::span<const RepOutcome> outcomes,
                                 const std::vector<double>& true_delta, double rho_star,
                                 int p_used) {
    std::vector<int> truth;
    for (std::size_t j = 0; j < true_delta.size(); ++j)
        if (true_delta[j] != 0.0) truth.push_back(static_cast<int>(j) + 1);
    PatternRates rates;
    if (!truth.empty() && truth.back() > p_used) return rates;  // span exceeds the lag order

    long ok = 0, exact = 0, superset = 0, model = 0;
    for (const RepOutcome& o : outcomes) {
        if (!o.ok) continue;
        ++ok;
        const bool is_exact = o.lag_pattern == truth;
        const bool is_super =
            std::includes(o.lag_pattern.begin(), o.lag_pattern.end(), truth.begin(), truth.end());
        if (is_exact) ++exact;
        if (is_super) ++superset;
        if (is_exact && o.activated == (rho_star != 0.0)) ++model;
    }
    if (ok == 0) return rates;
    rates.exact = static_cast<double>(exact) / ok;
    rates.superset = static_cast<double>(superset) / ok;
    rates.model = static_cast<double>(model) / ok;
    return rates;
}

std::vector<PredictiveValues> classification_metrics(const McResult& pooled) {
    std::vector<PredictiveValues> out;
    for (const McCell& c : pooled.cells) {
        if (c.rho_star != 0.0) continue;
        // locate the matching stationary cell
        const McCell* s = nullptr;
        for (const McCell& d : pooled.cells) {
            if (d.rho_star < 0.0 && d.estimator == c.estimator && d.det == c.det && d.T == c.T) {
                s = &d;
                break;
            }
        }
        if (!s) continue;
        const long ok_n = c.reps - c.failures;
        const long ok_s = s->reps - s->failures;
        if (ok_n != ok_s)
            throw std::invalid_argument("classification_metrics: unequal replication counts");
        PredictiveValues pv;
        pv.estimator = c.estimator;
        pv.det = c.det;
        pv.T = c.T;
        const long act_s = s->activation_count, act_n = c.activation_count;
        const long nact_s = ok_s - act_s, nact_n = ok_n - act_n;
        if (act_s + act_n > 0) {
            pv.ppv = static_cast<double>(act_s) / (act_s + act_n);
            pv.ppv_se = binomial_se(*pv.ppv, act_s + act_n);
        }
        if (nact_s + nact_n > 0) {
            pv.npv = static_cast<double>(nact_n) / (nact_s + nact_n);
            pv.npv_se = binomial_se(*pv.npv, nact_s + nact_n);
        }
        out.push_back(pv);
    }
    return out;
}

namespace {
const char kCsvHeader[] =
    "estimator,T,rho_star,delta_label,det_mode,reps,failures,flagged,activation_count,"
    "activation_rate,activation_se,p_pattern_exact,p_pattern_exact_se,p_pattern_superset,"
    "p_pattern_superset_se,p_model_exact,p_model_exact_se,median_log_w1,median_log_lambda0";
}

void export_csv(const McResult& result, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("export_csv: cannot open " + path);
    os << kCsvHeader << '\n';
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : ""; };
    for (const McCell& c : result.cells) {
        os << to_string(c.estimator) << ',' << c.T << ',' << format_double(c.rho_star) << ','
           << c.delta_label << ',' << to_string(c.det) << ',' << c.reps << ',' << c.failures
           << ',' << (c.flagged ? 1 : 0) << ',' << c.activation_count << ','
           << format_double(c.activation_rate) << ',' << format_double(c.activation_se) << ','
           << opt(c.p_pattern_exact) << ',' << opt(c.p_pattern_exact_se) << ','
           << opt(c.p_pattern_superset) << ',' << opt(c.p_pattern_superset_se) << ','
           << opt(c.p_model_exact) << ',' << opt(c.p_model_exact_se) << ','
           << format_double(c.median_log_w1) << ',' << format_double(c.median_log_lambda0)
           << '\n';
    }
    if (!os) throw std::runtime_error("export_csv: write failed for " + path);
}

McResult import_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("import_csv: cannot open " + path);
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader)
        throw std::runtime_error("import_csv: unexpected header");
    McResult result;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) f.push_back(tok);
        if (line.back() == ',') f.push_back("");
        if (f.size() != 19) throw std::runtime_error("import_csv: malformed row: " + line);
        McCell c;
        c.estimator = estimator_from_string(f[0]);
        c.T = std::stoi(f[1]);
        c.rho_star = std::stod(f[2]);
        c.delta_label = f[3];
        c.det = detrend_mode_from_string(f[4]);
        c.reps = std::stoi(f[5]);
        c.failures = std::stoi(f[6]);
        c.flagged = f[7] == "1";
        c.activation_count = std::stol(f[8]);
        c.activation_rate = std::stod(f[9]);
        c.activation_se = std::stod(f[10]);
        auto opt = [](const std::string& s) {
            return s.empty() ? std::optional<double>{} : std::optional<double>(std::stod(s));
        };
        c.p_pattern_exact = opt(f[11]);
        c.p_pattern_exact_se = opt(f[12]);
        c.p_pattern_superset = opt(f[13]);
        c.p_pattern_superset_se = opt(f[14]);
        c.p_model_exact = opt(f[15]);
        c.p_model_exact_se = opt(f[16]);
        c.median_log_w1 = std::stod(f[17]);
        c.median_log_lambda0 = std::stod(f[18]);
        result.cells.push_back(std::move(c));
    }
    return result;
}

namespace {

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto b = tok.find_first_not_of(" \t");
        const auto e = tok.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(tok.substr(b, e - b + 1));
    }
    return out;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in) {
    ExperimentConfig cfg;
    cfg.dgp = Ar1Dgp{};
    std::string section, line;
    std::string dgp_kind = "ar1", dgp_delta, dgp_label, dgp_theta;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": malformed section");
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        auto trim = [](std::string s) {
            const auto bb = s.find_first_not_of(" \t");
            const auto ee = s.find_last_not_of(" \t");
            return bb == std::string::npos ? std::string() : s.substr(bb, ee - bb + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        try {
            if (section == "experiment" || section.empty()) {
                if (key == "dgp") dgp_kind = value;
                else if (key == "delta") dgp_delta = value;
                else if (key == "label") dgp_label = value;
                else if (key == "theta") dgp_theta = value;
                else if (key == "rho") {
                    cfg.rho_grid.clear();
                    for (const auto& v : split_list(value)) cfg.rho_grid.push_back(std::stod(v));
                } else if (key == "T") {
                    cfg.T_grid.clear();
                    for (const auto& v : split_list(value)) cfg.T_grid.push_back(std::stoi(v));
                } else if (key == "p") {
                    std::vector<int> p;
                    for (const auto& v : split_list(value)) p.push_back(std::stoi(v));
                    cfg.p_override = p;
                } else if (key == "reps") cfg.reps = std::stoi(value);
                else if (key == "estimators") {
                    cfg.estimators.clear();
                    for (const auto& v : split_list(value))
                        cfg.estimators.push_back(estimator_from_string(v));
                } else if (key == "det") {
                    cfg.det_modes.clear();
                    for (const auto& v : split_list(value))
                        cfg.det_modes.push_back(detrend_mode_from_string(v));
                } else if (key == "seed") cfg.base_seed = std::stoull(value);
                else if (key == "workers") cfg.workers = std::stoi(value);
                else throw std::runtime_error("unknown key " + key);
            } else if (section == "weights") {
                if (key == "gamma1") cfg.gamma1 = std::stod(value);
                else if (key == "gamma2") cfg.gamma2 = std::stod(value);
                else throw std::runtime_error("unknown key " + key);
            } else if (section == "j") {
                if (key == "alpha") cfg.j_spec.alpha = std::stod(value);
                else if (key == "sigma_v") cfg.j_spec.sigma_v = std::stod(value);
                else if (key == "R") cfg.j_spec.replications = std::stoi(value);
                else throw std::runtime_error("unknown key " + key);
            } else if (section == "lrv") {
                if (key == "criterion") cfg.lrv_spec.criterion = lrv_criterion_from_string(value);
                else if (key == "k_max") cfg.lrv_spec.k_max = std::stoi(value);
                else if (key == "k_fixed") cfg.lrv_spec.k_fixed = std::stoi(value);
                else throw std::runtime_error("unknown key " + key);
            } else {
                throw std::runtime_error("unknown section " + section);
            }
        } catch (const std::exception& ex) {
            throw std::runtime_error("config line " + std::to_string(lineno) + ": " + ex.what());
        }
    }
    if (dgp_kind == "ar1") {
        cfg.dgp = Ar1Dgp{};
    } else if (dgp_kind == "adf_dgp") {
        AdfDgp adf;
        for (const auto& v : split_list(dgp_delta)) adf.delta.push_back(std::stod(v));
        adf.label = dgp_label.empty() ? "custom" : dgp_label;
        cfg.dgp = adf;
    } else if (dgp_kind == "ma1") {
        Ma1Dgp ma;
        ma.theta = dgp_theta.empty() ? 0.0 : std::stod(dgp_theta);
        cfg.dgp = ma;
    } else {
        throw std::runtime_error("config: unknown dgp " + dgp_kind);
    }
    if (cfg.lrv_spec.criterion != LrvCriterion::fixed) cfg.lrv_spec.k_fixed.reset();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open " + path);
    return parse_experiment_config(is);
}

void write_manifest(const ExperimentConfig& config, const std::string& path) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["base_seed"] = config.base_seed;
    nlohmann::json c;
    c["dgp"] = config.dgp_label();
    if (const auto* adf = std::get_if<AdfDgp>(&config.dgp)) c["delta"] = adf->delta;
    if (const auto* ma = std::get_if<Ma1Dgp>(&config.dgp)) c["theta"] = ma->theta;
    c["rho"] = config.rho_grid;
    c["T"] = config.T_grid;
    if (config.p_override) c["p"] = *config.p_override;
    c["reps"] = config.reps;
    std::vector<std::string> est, det;
    for (auto e : config.estimators) est.push_back(to_string(e));
    for (auto d : config.det_modes) det.push_back(to_string(d));
    c["estimators"] = est;
    c["det"] = det;
    c["gamma1"] = config.gamma1;
    c["gamma2"] = config.gamma2;
    c["j"] = {{"alpha", config.j_spec.alpha},
              {"sigma_v", config.j_spec.sigma_v},
              {"R", config.j_spec.replications}};
    nlohmann::json lrv;
    lrv["criterion"] = to_string(config.lrv_spec.criterion);
    lrv["k_max"] = config.lrv_spec.k_max;
    if (config.lrv_spec.k_fixed) lrv["k_fixed"] = *config.lrv_spec.k_fixed;
    c["lrv"] = lrv;
    c["workers"] = config.workers;
    j["config"] = c;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_manifest: cannot open " + path);
    os << j.dump(2) << '\n';
}

}  // namespace alie
