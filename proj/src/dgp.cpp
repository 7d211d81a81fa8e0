#include "alie/dgp.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "alie/rng.hpp"

namespace alie {

void AdfDgpSpec::validate() const {
    if (!(rho_star > -2.0 && rho_star <= 0.0))
        throw std::invalid_argument("AdfDgpSpec: rho_star must lie in (-2, 0]");
    const double dsum = std::accumulate(delta_star.begin(), delta_star.end(), 0.0);
    if (!(dsum < 1.0))
        throw std::invalid_argument("AdfDgpSpec: sum of delta_star must be < 1");
    if (T < 1) throw std::invalid_argument("AdfDgpSpec: T must be >= 1");
    if (!(noise_sd > 0.0)) throw std::invalid_argument("AdfDgpSpec: noise_sd must be > 0");
}

TimeSeries simulate_ar1(double varrho, int T, double sigma, std::uint64_t seed) {
    if (std::abs(varrho) > 1.0)
        throw std::invalid_argument("simulate_ar1: |varrho| > 1 is explosive");
    if (T < 1) throw std::invalid_argument("simulate_ar1: T must be >= 1");
    if (sigma < 0.0) throw std::invalid_argument("simulate_ar1: sigma must be >= 0");
    Rng rng(seed);
    TimeSeries out;
    out.seed = seed;
    out.values.resize(T);
    double x = 0.0;
    for (int t = 0; t < T; ++t) {
        x = varrho * x + rng.normal(sigma);
        out.values[t] = x;
    }
    return out;
}

TimeSeries simulate_adf_dgp(const AdfDgpSpec& spec, std::uint64_t seed) {
    spec.validate();
    const int k = static_cast<int>(spec.delta_star.size());
    Rng rng(seed);
    TimeSeries out;
    out.seed = seed;
    out.values.resize(spec.T);
    // levels and differences with k*+1 zero initial values
    std::vector<double> y(spec.T + k + 1, 0.0);
    std::vector<double> dy(spec.T + k + 1, 0.0);
    for (int t = k + 1; t < spec.T + k + 1; ++t) {
        double d = spec.rho_star * y[t - 1] + rng.normal(spec.noise_sd);
        for (int j = 1; j <= k; ++j) d += spec.delta_star[j - 1] * dy[t - j];
        dy[t] = d;
        y[t] = y[t - 1] + d;
        out.values[t - k - 1] = y[t];
    }
    return out;
}

TimeSeries simulate_unitroot_ma1(double varrho, double theta, int T, std::uint64_t seed) {
    if (std::abs(theta) >= 1.0)
        throw std::invalid_argument("simulate_unitroot_ma1: |theta| must be < 1");
    if (T < 1) throw std::invalid_argument("simulate_unitroot_ma1: T must be >= 1");
    Rng rng(seed);
    TimeSeries out;
    out.seed = seed;
    out.values.resize(T);
    double y = 0.0, eps_prev = 0.0;
    for (int t = 0; t < T; ++t) {
        const double eps = rng.normal();
        y = varrho * y + eps + theta * eps_prev;
        eps_prev = eps;
        out.values[t] = y;
    }
    return out;
}

TimeSeries simulate_random_walk(int T, double sigma_v, std::uint64_t seed) {
    if (T < 1) throw std::invalid_argument("simulate_random_walk: T must be >= 1");
    if (!(sigma_v > 0.0))
        throw std::invalid_argument("simulate_random_walk: sigma_v must be > 0");
    Rng rng(seed);
    TimeSeries out;
    out.seed = seed;
    out.values.resize(T);
    double q = 0.0;
    for (int t = 0; t < T; ++t) {
        q += rng.normal(sigma_v);
        out.values[t] = q;
    }
    return out;
}

TimeSeries add_deterministic(const TimeSeries& series, std::span<const double> psi) {
    if (psi.empty()) throw std::invalid_argument("add_deterministic: psi must be non-empty");
    TimeSeries out = series;
    for (int t = 0; t < series.size(); ++t) {
        const double tt = static_cast<double>(t + 1);
        double d = 0.0, power = 1.0;
        for (double coef : psi) {
            d += coef * power;
            power *= tt;
        }
        out.values[t] += d;
    }
    return out;
}

bool stationary_adf_roots(double rho_star, std::span<const double> delta_star) {
    const int k = static_cast<int>(delta_star.size());
    // (1-z) - rho*·z - Σ_j δ_j (z^j - z^{j+1}) as coefficients of z^0..z^{k+1}
    std::vector<double> c(k + 2, 0.0);
    c[0] = 1.0;
    c[1] = -1.0 - rho_star;
    for (int j = 1; j <= k; ++j) {
        c[j] -= delta_star[j - 1];
        c[j + 1] += delta_star[j - 1];
    }
    int deg = static_cast<int>(c.size()) - 1;
    while (deg > 0 && std::abs(c[deg]) < 1e-14) --deg;
    if (deg == 0) return std::abs(c[0]) > 1e-14;  // constant polynomial, no roots
    // companion matrix of the monic polynomial
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i] / c[deg];
    Eigen::VectorXcd roots = comp.eigenvalues();
    for (int i = 0; i < roots.size(); ++i) {
        if (std::abs(roots[i]) <= 1.0 + 1e-10) return false;
    }
    return true;
}

}  // namespace alie
