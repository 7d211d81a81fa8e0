#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "alie/rng.hpp"
#include "alie/zero_mean.hpp"

using namespace alie;

TEST_CASE("no shrinkage at lambda zero") {
    const double z[] = {1.7};
    CHECK(zero_mean_estimate(2.5, z, 1.0, 0.0) == doctest::Approx(2.5));
    CHECK(zero_mean_estimate(-0.3, {}, 2.0, 0.0) == doctest::Approx(-0.3));
}

TEST_CASE("enriched threshold arithmetic") {
    // |x| = 1, z = (2), gamma = 1, lambda = .4: threshold .4/2 = .2, estimate .8
    const double z[] = {2.0};
    CHECK(zero_mean_estimate(1.0, z, 1.0, 0.4) == doctest::Approx(0.8));
    CHECK(zero_mean_estimate(-1.0, z, 1.0, 0.4) == doctest::Approx(-0.8));
}

TEST_CASE("x at zero never activates") {
    const double z[] = {2.0};
    CHECK(zero_mean_estimate(0.0, z, 1.0, 0.1) == 0.0);
    CHECK(zero_mean_estimate(0.0, {}, 1.0, 0.0) == 0.0);
}

TEST_CASE("activation boundary matches a dense lambda scan") {
    Rng rng(33);
    for (int trial = 0; trial < 30; ++trial) {
        const double x = rng.normal();
        const double nu1 = rng.normal(), nu2 = 1.5 * rng.normal();
        const double gamma = 0.5 + rng.uniform();
        const double z[] = {nu1, nu2};
        const double expected_plain = std::pow(std::abs(x), gamma) * std::abs(x);
        const double expected_enriched =
            std::pow(std::abs(x * nu1 * nu2), gamma) * std::abs(x);
        // bisection on the indicator of a nonzero estimate
        auto boundary = [&](bool enriched) {
            double lo = 0.0, hi = 10.0 * (expected_plain + expected_enriched + 1.0);
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double mu = enriched ? zero_mean_estimate(x, z, gamma, mid)
                                           : zero_mean_estimate(x, {}, gamma, mid);
                (mu == 0.0 ? hi : lo) = mid;
            }
            return 0.5 * (lo + hi);
        };
        CHECK(boundary(false) == doctest::Approx(expected_plain).epsilon(1e-6));
        CHECK(boundary(true) == doctest::Approx(expected_enriched).epsilon(1e-6));
    }
}

TEST_CASE("q=0 reduces the enriched curve to the plain curve") {
    ZeroMeanSpec spec;
    spec.sigma_nu = {};
    LambdaFixedGrid grid{{0.1, 0.5, 1.0}};
    auto curve = activation_curve(spec, grid, 2000, 7);
    for (const auto& pt : curve) CHECK(pt.rate_plain == pt.rate_enriched);
}

TEST_CASE("activation probability decreases in q for unit-variance enrichers") {
    // monotone in the number of enrichers at fixed lambda, 3-sigma margins
    LambdaFixedGrid grid{{0.05, 0.2, 0.5}};
    const int reps = 20000;
    std::vector<std::vector<ActivationPoint>> curves;
    for (int q : {1, 2, 4}) {
        ZeroMeanSpec spec;
        spec.sigma_nu.assign(q, 1.0);
        curves.push_back(activation_curve(spec, grid, reps, 11));
    }
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        for (std::size_t c = 1; c < curves.size(); ++c) {
            const auto& lo = curves[c][i];
            const auto& hi = curves[c - 1][i];
            const double margin = 3.0 * std::hypot(lo.se_enriched, hi.se_enriched);
            CHECK(lo.rate_enriched < hi.rate_enriched - margin);
        }
    }
}

TEST_CASE("long-q limit drives the activation probability to zero") {
    LambdaFixedGrid grid{{0.3}};
    double prev = 1.0;
    for (int q : {1, 2, 4, 8}) {
        ZeroMeanSpec spec;
        spec.sigma_nu.assign(q, 1.0);
        auto curve = activation_curve(spec, grid, 20000, 13);
        CHECK(curve[0].rate_enriched < prev);
        prev = curve[0].rate_enriched;
    }
    CHECK(prev < 0.1);
}

TEST_CASE("t-statistic enrichment lies below the plain curve") {
    // the correlated-enricher design: n = 50, sigma_nu = 2, corr = .2
    ZeroMeanSpec spec;
    spec.n = 50;
    spec.sigma_nu = {2.0};
    spec.corr_eps_nu = 0.2;
    std::vector<double> grid;
    for (int g = 0; g < 20; ++g) grid.push_back(0.002 + g * 0.004);
    auto curve = activation_curve(spec, LambdaFixedGrid{grid}, 20000, 17, EnrichKind::t_stat);
    int below = 0;
    for (const auto& pt : curve)
        if (pt.rate_enriched <= pt.rate_plain) ++below;
    CHECK(below >= 18);
}

TEST_CASE("quantile dominance implies ordered activation probabilities") {
    // empirical check of the tail-event comparison: when the (1-a) quantile of
    // the enriched threshold sits below the plain one, the enriched activation
    // probability at that tuning level is no larger
    Rng rng(29);
    const int reps = 30000;
    std::vector<double> lam_plain(reps), lam_enr(reps);
    for (int r = 0; r < reps; ++r) {
        const double eps = rng.normal();
        const double nu = rng.normal();
        lam_plain[r] = std::abs(eps) * std::abs(eps);
        lam_enr[r] = std::abs(eps * nu) * std::abs(eps);
    }
    std::sort(lam_plain.begin(), lam_plain.end());
    std::sort(lam_enr.begin(), lam_enr.end());
    for (double a : {0.05, 0.1, 0.25}) {
        const auto idx = static_cast<std::size_t>((1.0 - a) * (reps - 1));
        if (lam_enr[idx] < lam_plain[idx]) {
            // P(enriched > q) <= P(plain > q) at the plain quantile q
            const double q = lam_plain[idx];
            const auto count_above = [&](const std::vector<double>& v) {
                return static_cast<double>(v.end() - std::lower_bound(v.begin(), v.end(), q)) /
                       reps;
            };
            const double margin = 3.0 * std::sqrt(a * (1 - a) / reps);
            CHECK(count_above(lam_enr) <= count_above(lam_plain) + margin);
        }
    }
}

TEST_CASE("random lambda samplers aggregate to one point") {
    ZeroMeanSpec spec;
    spec.sigma_nu = {1.0};
    auto ln = activation_curve(spec, LambdaLogNormal{-1.0, 0.5}, 5000, 3);
    CHECK(ln.size() == 1);
    CHECK(std::isnan(ln[0].lambda));
    CHECK(ln[0].rate_plain >= 0.0);
    CHECK(ln[0].rate_plain <= 1.0);

    auto emp = activation_curve(spec, LambdaEmpirical{{0.1, 0.2, 0.7}}, 5000, 3);
    CHECK(emp.size() == 1);
}

TEST_CASE("replication floor enforced") {
    ZeroMeanSpec spec;
    spec.sigma_nu = {1.0};
    CHECK_THROWS_AS(activation_curve(spec, LambdaFixedGrid{{0.1}}, 100, 1),
                    std::invalid_argument);
}

TEST_CASE("curve csv emission") {
    ZeroMeanSpec spec;
    spec.sigma_nu = {1.0};
    auto curve = activation_curve(spec, LambdaFixedGrid{{0.1, 0.3}}, 2000, 5);
    std::ostringstream os;
    write_curve_csv(curve, os);
    std::istringstream is(os.str());
    std::string line;
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 3);
    CHECK(os.str().rfind("lambda,", 0) == 0);
}
