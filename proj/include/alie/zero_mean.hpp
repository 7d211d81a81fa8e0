#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace alie {

/**
 * @brief Gaussian zero-mean design: x = μ + ε with q enriching measurements
 *        z_j = μ + ν_j. With n > 1 the estimators act on sample means, and for
 *        q = 1 the noise terms may be correlated.
 */
struct ZeroMeanSpec {
    double sigma_eps = 1.0;
    std::vector<double> sigma_nu;  ///< one entry per enriching statistic
    double gamma = 1.0;
    int n = 1;
    std::optional<double> corr_eps_nu;  ///< only defined for q = 1

    int q() const { return static_cast<int>(sigma_nu.size()); }
    void validate() const;
};

/**
 * @brief Soft-threshold solution of min (x - μ)² + 2λ w |μ| with
 *        w = |1/x| (plain, z empty) or w = |1/(x·Πz_j)| (enriched).
 *
 * Returns sign(x)·max(|x| - λ w^γ, 0); x = 0 maps to 0.
 */
double zero_mean_estimate(double x, std::span<const double> z, double gamma, double lambda);

/// How the enriching statistics enter the weight.
enum class EnrichKind {
    product,  ///< w̆ = |1/(x·Π z̄_j)|
    t_stat    ///< w̆ = |1/(t_{z1}·x̄)| with t the one-sample t-statistic (q = 1, n > 1)
};

/// λ source for the activation simulation: a deterministic grid or a random draw.
struct LambdaFixedGrid {
    std::vector<double> values;
};
struct LambdaLogNormal {
    double mu = 0.0;
    double sigma = 1.0;
};
struct LambdaEmpirical {
    std::vector<double> draws;
};
using LambdaSampler = std::variant<LambdaFixedGrid, LambdaLogNormal, LambdaEmpirical>;

struct ActivationPoint {
    double lambda = 0.0;  ///< NaN for random samplers (rates pooled over draws)
    double rate_plain = 0.0;
    double rate_enriched = 0.0;
    double se_plain = 0.0;
    double se_enriched = 0.0;
};

/**
 * @brief Monte Carlo activation probabilities P(μ̂ ≠ 0) under μ = 0, for the
 *        plain and the enriched estimator side by side.
 */
std::vector<ActivationPoint> activation_curve(const ZeroMeanSpec& spec,
                                              const LambdaSampler& lambda_dist, int reps,
                                              std::uint64_t seed,
                                              EnrichKind kind = EnrichKind::product);

/// CSV emission: lambda, activation rates and their Monte Carlo standard errors.
void write_curve_csv(const std::vector<ActivationPoint>& curve, std::ostream& os);

}  // namespace alie
