#include "alie/lasso_path.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "alie/ols.hpp"
#include "alie/weights.hpp"

namespace alie {

namespace {

/// Least-squares fit of the unpenalized block to a residual target.
class DetSolver {
  public:
    explicit DetSolver(const Eigen::MatrixXd& det) : det_(det) {
        if (det_.cols() > 0) qr_.compute(det_);
    }
    Eigen::VectorXd solve(const Eigen::VectorXd& target) const {
        if (det_.cols() == 0) return Eigen::VectorXd(0);
        return qr_.solve(target);
    }
    Eigen::VectorXd project_out(const Eigen::VectorXd& v) const {
        if (det_.cols() == 0) return v;
        return v - det_ * qr_.solve(v);
    }

  private:
    Eigen::MatrixXd det_;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
};

struct Candidate {
    double lambda = -1.0;
    int var = -1;          // index into the working set
    bool drop = false;
    double sign = 0.0;     // entry sign for activations
};

}  // namespace

void PenalizedProblem::validate() const {
    const auto n = X.rows();
    if (y.size() != n) throw std::invalid_argument("PenalizedProblem: y length mismatch");
    if (det.cols() > 0 && det.rows() != n)
        throw std::invalid_argument("PenalizedProblem: det row mismatch");
    if (factors.size() != X.cols())
        throw std::invalid_argument("PenalizedProblem: one factor per penalized column required");
    for (int i = 0; i < factors.size(); ++i) {
        if (!(factors[i] > 0.0))
            throw std::invalid_argument("PenalizedProblem: factors must be positive or sentinel");
    }
}

LassoPath solve_path(const PenalizedProblem& prob) {
    prob.validate();
    const int k = static_cast<int>(prob.X.cols());

    LassoPath path;
    path.n_penalized = k;

    DetSolver det(prob.det);
    const Eigen::VectorXd y_p = det.project_out(prob.y);
    path.det_coefs_null = det.solve(prob.y);

    // working set: non-sentinel columns, rescaled so every factor is one
    std::vector<int> work;
    for (int i = 0; i < k; ++i)
        if (prob.factors[i] != kNeverActivate) work.push_back(i);
    const int w = static_cast<int>(work.size());
    if (w == 0) {
        path.coefs_zero = Eigen::VectorXd::Zero(k);
        path.det_coefs_zero = path.det_coefs_null;
        return path;
    }

    Eigen::MatrixXd Z(prob.X.rows(), w);
    for (int i = 0; i < w; ++i)
        Z.col(i) = det.project_out(prob.X.col(work[i])) / prob.factors[work[i]];
    {
        // the penalized block must have full column rank after rescaling
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(Z);
        const auto& R = qr.matrixQR();
        for (int j = 0; j < w; ++j)
            if (std::abs(R(j, j)) < 1e-5 * (Z.col(j).norm() + 1e-300))
                throw RankDeficiencyError(work[j]);
    }
    const Eigen::MatrixXd G = Z.transpose() * Z;
    const Eigen::VectorXd b = Z.transpose() * y_p;

    auto map_back = [&](const std::vector<int>& active, const Eigen::VectorXd& beta_t) {
        Eigen::VectorXd full = Eigen::VectorXd::Zero(k);
        for (std::size_t i = 0; i < active.size(); ++i)
            full[work[active[i]]] = beta_t[static_cast<int>(i)] / prob.factors[work[active[i]]];
        return full;
    };
    auto det_at = [&](const Eigen::VectorXd& full_beta) {
        return det.solve(prob.y - prob.X * full_beta);
    };
    auto record_knot = [&](double lam, const Eigen::VectorXd& full_beta,
                           std::vector<PathEvent> evs) {
        path.knots.push_back(lam);
        path.coefs.push_back(full_beta);
        path.det_coefs.push_back(det_at(full_beta));
        path.events.push_back(std::move(evs));
    };

    // first knot: largest rescaled correlation
    double lam = 0.0;
    int first = -1;
    for (int j = 0; j < w; ++j) {
        if (std::abs(b[j]) > lam) {
            lam = std::abs(b[j]);
            first = j;
        }
    }
    if (first < 0 || lam <= 0.0) {
        path.coefs_zero = Eigen::VectorXd::Zero(k);
        path.det_coefs_zero = path.det_coefs_null;
        return path;
    }

    std::vector<int> active{first};
    std::vector<double> sign{b[first] > 0 ? 1.0 : -1.0};
    std::vector<char> is_active(w, 0);
    is_active[first] = 1;
    record_knot(lam, Eigen::VectorXd::Zero(k), {{work[first], EventKind::activation}});

    const double lam1 = lam;
    const double tiny = 1e-14 * lam1;
    const int max_steps = 50 * w + 200;
    int last_dropped = -1;
    double last_drop_lambda = -1.0;

    Eigen::VectorXd u, dir;
    for (int step = 0; step < max_steps; ++step) {
        const int a = static_cast<int>(active.size());
        Eigen::MatrixXd Gaa(a, a);
        Eigen::VectorXd ba(a), sa(a);
        for (int i = 0; i < a; ++i) {
            ba[i] = b[active[i]];
            sa[i] = sign[i];
            for (int j = 0; j < a; ++j) Gaa(i, j) = G(active[i], active[j]);
        }
        Eigen::LDLT<Eigen::MatrixXd> ldlt(Gaa);
        if (ldlt.info() != Eigen::Success)
            throw std::runtime_error("solve_path: singular active-set system");
        u = ldlt.solve(ba);    // unpenalized fit of the active block
        dir = ldlt.solve(sa);  // shrinkage direction; beta(λ) = u - λ·dir

        // next event: largest λ strictly below the current knot
        std::vector<Candidate> best;
        double best_lam = -1.0;
        auto consider = [&](Candidate c) {
            if (!(c.lambda > tiny) || !(c.lambda < lam * (1.0 - 1e-12))) return;
            if (c.lambda > best_lam * (1.0 + 1e-10)) {
                best_lam = c.lambda;
                best.assign(1, c);
            } else if (c.lambda > best_lam * (1.0 - 1e-10)) {
                best.push_back(c);
            }
        };
        for (int j = 0; j < w; ++j) {
            if (is_active[j]) continue;
            double c0 = b[j], aj = 0.0;
            for (int i = 0; i < a; ++i) {
                c0 -= G(j, active[i]) * u[i];
                aj += G(j, active[i]) * dir[i];
            }
            const double dplus = 1.0 - aj;
            if (std::abs(dplus) > 1e-14) consider({c0 / dplus, j, false, 1.0});
            const double dminus = 1.0 + aj;
            if (std::abs(dminus) > 1e-14) consider({-c0 / dminus, j, false, -1.0});
        }
        for (int i = 0; i < a; ++i) {
            if (std::abs(dir[i]) > 1e-14) consider({u[i] / dir[i], active[i], true, 0.0});
        }

        if (best.empty()) break;
        lam = best_lam;
        Eigen::VectorXd beta_t(a);
        for (int i = 0; i < a; ++i) beta_t[i] = u[i] - lam * dir[i];
        Eigen::VectorXd full = map_back(active, beta_t);

        // drops first, then entries by column order
        std::stable_sort(best.begin(), best.end(), [](const Candidate& x, const Candidate& y) {
            if (x.drop != y.drop) return x.drop;
            return x.var < y.var;
        });
        std::vector<PathEvent> evs;
        for (const Candidate& c : best) {
            if (c.drop) {
                auto it = std::find(active.begin(), active.end(), c.var);
                if (it == active.end()) continue;
                const auto pos = std::distance(active.begin(), it);
                active.erase(it);
                sign.erase(sign.begin() + pos);
                is_active[c.var] = 0;
                full[work[c.var]] = 0.0;  // exact zero at a drop knot
                evs.push_back({work[c.var], EventKind::deactivation});
                last_dropped = c.var;
                last_drop_lambda = lam;
            } else {
                if (is_active[c.var]) continue;
                active.push_back(c.var);
                sign.push_back(c.sign);
                is_active[c.var] = 1;
                const bool recross = c.var == last_dropped &&
                                     lam >= last_drop_lambda * (1.0 - 1e-9) &&
                                     last_drop_lambda > 0.0;
                evs.push_back({work[c.var],
                               recross ? EventKind::sign_cross : EventKind::activation});
            }
        }
        record_knot(lam, full, std::move(evs));
        if (active.empty()) throw std::logic_error("solve_path: active set emptied");
        if (step == max_steps - 1) throw std::runtime_error("solve_path: did not terminate");
    }

    path.coefs_zero = map_back(active, u);
    path.det_coefs_zero = det_at(path.coefs_zero);
    return path;
}

namespace {

Eigen::VectorXd interpolate(const std::vector<double>& knots,
                            const std::vector<Eigen::VectorXd>& values,
                            const Eigen::VectorXd& at_zero, const Eigen::VectorXd& above,
                            double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("coefficients_at: negative lambda");
    if (knots.empty()) return at_zero;
    if (lambda >= knots.front()) return above;
    for (std::size_t m = 0; m + 1 < knots.size(); ++m) {
        if (lambda >= knots[m + 1]) {
            const double t = (knots[m] - lambda) / (knots[m] - knots[m + 1]);
            return values[m] + t * (values[m + 1] - values[m]);
        }
    }
    const double last = knots.back();
    const double t = (last - lambda) / last;
    return values.back() + t * (at_zero - values.back());
}

}  // namespace

Eigen::VectorXd coefficients_at(const LassoPath& path, double lambda) {
    return interpolate(path.knots, path.coefs, path.coefs_zero,
                       Eigen::VectorXd::Zero(path.n_penalized), lambda);
}

Eigen::VectorXd det_coefficients_at(const LassoPath& path, double lambda) {
    return interpolate(path.knots, path.det_coefs, path.det_coefs_zero, path.det_coefs_null,
                       lambda);
}

std::vector<std::optional<double>> activation_knots(const LassoPath& path) {
    std::vector<std::optional<double>> out(path.n_penalized);
    for (std::size_t m = 0; m < path.knots.size(); ++m) {
        for (const PathEvent& e : path.events[m]) {
            if (e.kind == EventKind::activation && !out[e.variable])
                out[e.variable] = path.knots[m];
        }
    }
    return out;
}

std::vector<int> first_activation_order(const LassoPath& path) {
    const auto knots = activation_knots(path);
    std::vector<int> vars;
    for (int i = 0; i < path.n_penalized; ++i)
        if (knots[i]) vars.push_back(i);
    std::stable_sort(vars.begin(), vars.end(), [&](int a, int b) {
        if (*knots[a] != *knots[b]) return *knots[a] > *knots[b];
        return a < b;
    });
    return vars;
}

KktReport kkt_check(const PenalizedProblem& prob, double lambda, const Eigen::VectorXd& beta,
                    double tol, const std::optional<Eigen::VectorXd>& det_coef) {
    prob.validate();
    if (lambda < 0.0) throw std::invalid_argument("kkt_check: negative lambda");
    if (beta.size() != prob.X.cols()) throw std::invalid_argument("kkt_check: beta size mismatch");

    Eigen::VectorXd r = prob.y - prob.X * beta;
    Eigen::VectorXd gamma;
    if (prob.det.cols() > 0) {
        gamma = det_coef ? *det_coef
                         : Eigen::VectorXd(prob.det.colPivHouseholderQr().solve(r));
        r -= prob.det * gamma;
    }
    const double rnorm = r.norm();

    KktReport rep;
    rep.pass = true;
    for (int i = 0; i < prob.X.cols(); ++i) {
        const double c = prob.X.col(i).dot(r);
        const bool sentinel = std::isinf(prob.factors[i]);
        const double bound = sentinel ? 0.0 : lambda * prob.factors[i];
        const double slack = tol * (1.0 + bound + prob.X.col(i).norm() * rnorm);
        double viol = 0.0;
        if (beta[i] != 0.0) {
            viol = sentinel ? std::numeric_limits<double>::infinity()
                            : std::abs(c - bound * (beta[i] > 0 ? 1.0 : -1.0));
        } else if (!sentinel) {
            viol = std::max(0.0, std::abs(c) - bound);
        }
        if (viol > rep.max_violation) {
            rep.max_violation = viol;
            rep.worst_index = i;
        }
        if (viol > slack) rep.pass = false;
    }
    if (prob.det.cols() > 0) {
        for (int j = 0; j < prob.det.cols(); ++j) {
            const double c = std::abs(prob.det.col(j).dot(r));
            const double slack = tol * (1.0 + prob.det.col(j).norm() * rnorm);
            if (c > rep.max_violation) {
                rep.max_violation = c;
                rep.worst_index = static_cast<int>(prob.X.cols()) + j;
            }
            if (c > slack) rep.pass = false;
        }
    }
    return rep;
}

namespace {
const char* event_name(EventKind k) {
    switch (k) {
        case EventKind::activation: return "activation";
        case EventKind::deactivation: return "deactivation";
        case EventKind::sign_cross: return "sign-cross";
    }
    return "?";
}
}  // namespace

void write_path_csv(const LassoPath& path, std::ostream& os,
                    const std::vector<std::string>& column_names) {
    os << "lambda,event,variable";
    for (int i = 0; i < path.n_penalized; ++i) {
        os << ',';
        if (i < static_cast<int>(column_names.size()))
            os << column_names[i];
        else
            os << "beta" << i;
    }
    os << '\n';
    char buf[32];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (std::size_t m = 0; m < path.knots.size(); ++m) {
        const auto& evs = path.events[m];
        os << num(path.knots[m]) << ',' << (evs.empty() ? "" : event_name(evs[0].kind)) << ','
           << (evs.empty() ? -1 : evs[0].variable);
        for (int i = 0; i < path.n_penalized; ++i) os << ',' << num(path.coefs[m][i]);
        os << '\n';
    }
    os << "0,,-1";
    for (int i = 0; i < path.n_penalized; ++i) os << ',' << num(path.coefs_zero[i]);
    os << '\n';
}

}  // namespace alie
