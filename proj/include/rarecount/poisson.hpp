#pragma once

// Poisson probability kernels for rare-object counts.
//
// Everything is evaluated in log space through lnGamma so that the
// desk-scale range (lambda up to ~1e5, k in the tens of thousands) never
// touches a naive factorial. lambda == 0 is a point mass at k == 0.

#include <cstdint>
#include <random>

namespace rarecount {

// Expected event count in the examined interval (lambda = p * V / cV).
class PoissonParam {
public:
    // Throws std::domain_error for negative or non-finite lambda.
    explicit PoissonParam(double lambda);

    double lambda() const noexcept { return lambda_; }

private:
    double lambda_;
};

// Absolute tolerance used when two probabilities are asserted equal.
inline constexpr double kProbabilityTolerance = 1e-12;

// ln P(K = k); -inf when the mass is exactly zero.
double log_pmf(std::int64_t k, PoissonParam lam);

// P(K = k).
double pmf(std::int64_t k, PoissonParam lam);

// P(K <= k), ascending compensated summation of log-space terms.
double cdf(std::int64_t k, PoissonParam lam);

// P(K >= 1) = 1 - e^{-lambda}, evaluated with expm1.
double prob_at_least_one(PoissonParam lam);

// Exact Poisson sampler by CDF inversion.
//
// For lambda < 30 the search starts at k = 0 and walks up with the
// term recurrence. Above that the search is anchored at the mode with
// pmf(mode) and cdf(mode) precomputed by the kernels above, so a draw
// costs O(sqrt(lambda)) steps and never underflows e^{-lambda}.
class PoissonSampler {
public:
    explicit PoissonSampler(PoissonParam lam);

    template <class Engine>
    std::int64_t operator()(Engine& engine) const {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        return invert(unit(engine));
    }

    // Smallest k with cdf(k) >= u, for u in [0, 1).
    std::int64_t invert(double u) const;

    double lambda() const noexcept { return lambda_; }

private:
    static constexpr double kModeSearchThreshold = 30.0;

    double lambda_;
    std::int64_t mode_ = 0;
    double pmf_mode_ = 0.0;
    double cdf_mode_ = 0.0;
};

}  // namespace rarecount
