#include "alie/zero_mean.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "alie/rng.hpp"

namespace alie {

void ZeroMeanSpec::validate() const {
    if (!(sigma_eps > 0.0)) throw std::invalid_argument("ZeroMeanSpec: sigma_eps must be > 0");
    for (double s : sigma_nu)
        if (!(s > 0.0)) throw std::invalid_argument("ZeroMeanSpec: sigma_nu must be > 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("ZeroMeanSpec: gamma must be > 0");
    if (n < 1) throw std::invalid_argument("ZeroMeanSpec: n must be >= 1");
    if (corr_eps_nu) {
        if (q() != 1)
            throw std::invalid_argument("ZeroMeanSpec: correlation is only defined for q = 1");
        if (!(*corr_eps_nu > -1.0 && *corr_eps_nu < 1.0))
            throw std::invalid_argument("ZeroMeanSpec: correlation must be in (-1, 1)");
    }
}

double zero_mean_estimate(double x, std::span<const double> z, double gamma, double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("zero_mean_estimate: negative lambda");
    if (x == 0.0) return 0.0;
    double base = x;
    for (double zj : z) {
        if (zj == 0.0) return 0.0;  // weight sentinel: never activate
        base *= zj;
    }
    const double w = 1.0 / std::abs(base);
    const double threshold = lambda * std::pow(w, gamma);
    const double shrunk = std::abs(x) - threshold;
    return shrunk > 0.0 ? (x > 0 ? shrunk : -shrunk) : 0.0;
}

std::vector<ActivationPoint> activation_curve(const ZeroMeanSpec& spec,
                                              const LambdaSampler& lambda_dist, int reps,
                                              std::uint64_t seed, EnrichKind kind) {
    spec.validate();
    if (reps < 1000)
        throw std::invalid_argument("activation_curve: need at least 1000 replications");
    if (kind == EnrichKind::t_stat && (spec.q() != 1 || spec.n < 2))
        throw std::invalid_argument("activation_curve: t-stat enricher needs q = 1 and n >= 2");

    const auto* grid = std::get_if<LambdaFixedGrid>(&lambda_dist);
    const int npoints = grid ? static_cast<int>(grid->values.size()) : 1;
    std::vector<long> act_plain(npoints, 0), act_enr(npoints, 0);

    const double corr = spec.corr_eps_nu.value_or(0.0);
    const double corr_c = std::sqrt(1.0 - corr * corr);

    for (int r = 0; r < reps; ++r) {
        Rng rng = Rng::derive(seed, {0x5a4dULL, static_cast<std::uint64_t>(r)});
        // mean of the n draws of x, and per-statistic enricher values
        double xbar = 0.0;
        double zbar = 0.0, zss = 0.0;
        std::vector<double> zmeans(spec.q(), 0.0);
        if (spec.q() == 1) {
            for (int i = 0; i < spec.n; ++i) {
                const double e = rng.normal();
                const double v = corr * e + corr_c * rng.normal();
                xbar += spec.sigma_eps * e;
                const double zi = spec.sigma_nu[0] * v;
                zbar += zi;
                zss += zi * zi;
            }
            xbar /= spec.n;
            zbar /= spec.n;
            zmeans[0] = zbar;
        } else {
            for (int i = 0; i < spec.n; ++i) xbar += spec.sigma_eps * rng.normal();
            xbar /= spec.n;
            for (int j = 0; j < spec.q(); ++j) {
                double zj = 0.0;
                for (int i = 0; i < spec.n; ++i) zj += spec.sigma_nu[j] * rng.normal();
                zmeans[j] = zj / spec.n;
            }
        }

        double enricher = 1.0;
        if (kind == EnrichKind::t_stat) {
            const double var = (zss - spec.n * zbar * zbar) / (spec.n - 1);
            const double se = std::sqrt(var / spec.n);
            enricher = se > 0.0 ? zbar / se : 0.0;
        } else {
            for (double zm : zmeans) enricher *= zm;
        }

        // activation iff |x̄| exceeds the threshold λ w^γ
        const double plain_stat = std::pow(std::abs(xbar), 1.0 + spec.gamma);
        const double enr_stat =
            std::abs(xbar) * std::pow(std::abs(xbar * enricher), spec.gamma);

        if (grid) {
            for (int i = 0; i < npoints; ++i) {
                if (plain_stat > grid->values[i]) ++act_plain[i];
                if (enr_stat > grid->values[i]) ++act_enr[i];
            }
        } else {
            double lam;
            if (const auto* ln = std::get_if<LambdaLogNormal>(&lambda_dist)) {
                lam = std::exp(ln->mu + ln->sigma * rng.normal());
            } else {
                const auto& draws = std::get<LambdaEmpirical>(lambda_dist).draws;
                if (draws.empty())
                    throw std::invalid_argument("activation_curve: empty empirical sampler");
                lam = draws[static_cast<std::size_t>(rng.uniform() * draws.size()) % draws.size()];
            }
            if (plain_stat > lam) ++act_plain[0];
            if (enr_stat > lam) ++act_enr[0];
        }
    }

    std::vector<ActivationPoint> out(npoints);
    for (int i = 0; i < npoints; ++i) {
        const double pp = static_cast<double>(act_plain[i]) / reps;
        const double pe = static_cast<double>(act_enr[i]) / reps;
        out[i].lambda = grid ? grid->values[i] : std::nan("");
        out[i].rate_plain = pp;
        out[i].rate_enriched = pe;
        out[i].se_plain = std::sqrt(pp * (1.0 - pp) / reps);
        out[i].se_enriched = std::sqrt(pe * (1.0 - pe) / reps);
    }
    return out;
}

void write_curve_csv(const std::vector<ActivationPoint>& curve, std::ostream& os) {
    os << "lambda,activation_rate_plain,mc_se_plain,activation_rate_enriched,mc_se_enriched\n";
    char buf[160];
    for (const auto& p : curve) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", p.lambda, p.rate_plain,
                      p.se_plain, p.rate_enriched, p.se_enriched);
        os << buf;
    }
}

}  // namespace alie
