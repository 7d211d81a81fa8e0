#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "alie/series.hpp"

namespace alie {

/**
 * @brief Parameters of the ADF data-generating process
 *        Δy_t = ρ* y_{t-1} + Σ_j δ*_j Δy_{t-j} + v_t,  v_t ~ N(0, noise_sd²),
 *        started from k*+1 zero initial values.
 */
struct AdfDgpSpec {
    double rho_star = 0.0;           ///< ρ* in (-2, 0]; 0 means a unit root
    std::vector<double> delta_star;  ///< lag coefficients δ*_1..δ*_k
    int T = 0;                       ///< sample size
    double noise_sd = 1.0;

    /// Throws std::invalid_argument when outside the admissible parameter space.
    void validate() const;
};

/// AR(1): x_0 = 0, x_t = varrho·x_{t-1} + u_t with u_t ~ N(0, sigma²). Requires |varrho| <= 1.
TimeSeries simulate_ar1(double varrho, int T, double sigma, std::uint64_t seed);

/// ADF-DGP recursion with k*+1 zero initial values.
TimeSeries simulate_adf_dgp(const AdfDgpSpec& spec, std::uint64_t seed);

/// y_t = varrho·y_{t-1} + u_t with MA(1) errors u_t = eps_t + theta·eps_{t-1}, eps_0 = 0.
TimeSeries simulate_unitroot_ma1(double varrho, double theta, int T, std::uint64_t seed);

/// Gaussian random walk q_0 = 0, q_t = q_{t-1} + nu_t, nu_t ~ N(0, sigma_v²). sigma_v > 0.
TimeSeries simulate_random_walk(int T, double sigma_v, std::uint64_t seed);

/// Adds the deterministic polynomial Σ_k psi_k t^k (t = 1..T) to a series.
TimeSeries add_deterministic(const TimeSeries& series, std::span<const double> psi);

/// True when all roots of (1-z) - rho*·z - Σ_j δ*_j (1-z) z^j lie outside the unit circle.
bool stationary_adf_roots(double rho_star, std::span<const double> delta_star);

}  // namespace alie
