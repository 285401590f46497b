#pragma once

// Seeded Monte Carlo model of a patient population, used as an
// independent check on the analytic quantitation error budget.
//
// Per simulated sample:
//   S   ~ Normal(mu_s, sigma_s)      clipped at 0 (and at 1 for the binomial model)
//   F   ~ Normal(mu_f, sigma_f)      clipped at 0
//   V_E = V (1 + Normal(0, v_se))    redrawn until positive
//   p_V ~ Poisson(p V / cV)
//   tp  = p_V S                      (expected_value)   or Binomial(p_V, S)     (binomial)
//   fp  = F V / cV                   (expected_value)   or Poisson(F V / cV)    (binomial)
// then p_hat comes from estimate_parasitemia on tp + fp and V_E.
//
// Draws are split into fixed-size blocks. Block b gets its own engine
// seeded from (seed, b), so output does not depend on the worker count.

#include "rarecount/classifier.hpp"
#include "rarecount/poisson.hpp"
#include "rarecount/protocol.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

namespace rarecount {

using SimEngine = std::mt19937_64;

enum class TpModel { expected_value, binomial };

std::string_view to_string(TpModel model) noexcept;
// Throws std::invalid_argument on an unknown name.
TpModel parse_tp_model(std::string_view name);

struct SimConfig {
    ClassifierProfile profile;
    double parasitemia = 0.0;  // true p per cV
    VolumeSpec volume{1.0};
    std::uint64_t n_draws = 100000;
    std::uint64_t seed = 0;
    TpModel tp_model = TpModel::expected_value;

    // false pins p_V at its mean p V / cV so the remaining sources can be
    // studied alone. Only valid with the expected_value model.
    bool poisson_sampling = true;

    bool keep_draws = false;
    unsigned workers = 0;  // 0: hardware concurrency

    // Throws std::domain_error when the profile or parameters are invalid.
    void validate() const;
};

struct DrawnSample {
    double sensitivity = 0.0;
    double fp_rate = 0.0;
    double estimated_volume_ul = 0.0;
    double true_count = 0.0;  // p_V; integral unless poisson_sampling is off
    double tp = 0.0;
    double fp = 0.0;
    double suspects = 0.0;
    bool truncated = false;   // some population draw hit a domain bound
};

// Reusable per-config sampler; holds the precomputed Poisson inverter.
class SampleDrawer {
public:
    explicit SampleDrawer(const SimConfig& config);

    DrawnSample operator()(SimEngine& engine) const;

private:
    SimConfig config_;
    PoissonSampler true_count_;
};

// One draw. Builds a SampleDrawer each call; loop with SampleDrawer instead.
DrawnSample draw_sample(const SimConfig& config, SimEngine& engine);

// Engine for block `block` of a run seeded with `seed`.
SimEngine block_engine(std::uint64_t seed, std::uint64_t block);

inline constexpr std::uint64_t kSimBlockSize = 4096;

struct SimOutcome {
    double empirical_mean_phat = 0.0;
    double empirical_std_error = 0.0;  // population std dev of (p_hat - p) / p
    std::optional<std::vector<double>> per_draw_estimates;
    std::uint64_t n_truncated_draws = 0;
    std::uint64_t n_draws = 0;

    // Standard error of empirical_std_error itself, ~ sigma / sqrt(2 n).
    double std_error_uncertainty() const noexcept;
    // Standard error of empirical_mean_phat / p.
    double relative_mean_uncertainty() const noexcept;
};

// Requires parasitemia > 0 and n_draws >= 1.
SimOutcome run_simulation(const SimConfig& config);

enum class BracketStatus { pass, fail, skipped };
std::string_view to_string(BracketStatus status) noexcept;

struct BracketReport {
    double empirical = 0.0;
    double analytic_linear = 0.0;   // linear error budget total
    double quadrature_bound = 0.0;  // per-source terms combined in quadrature
    double mc_std_error = 0.0;      // uncertainty of `empirical`
    double tolerance = 0.0;
    BracketStatus status = BracketStatus::skipped;
    SimOutcome outcome;
};

inline constexpr double kDefaultBracketTolerance = 0.05;

// Runs the simulation and checks
//   quadrature_bound (1 - tol) <= empirical <= analytic_linear (1 + tol).
// Skipped below two draws. With poisson_sampling off the Poisson terms
// are dropped from both analytic values.
BracketReport bracket_check(const SimConfig& config, double tolerance = kDefaultBracketTolerance);

}  // namespace rarecount
