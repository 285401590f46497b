#pragma once

// Quantitation error budget.
//
// The estimator counts suspects, subtracts the expected false positives
// in the estimated volume, divides by mean sensitivity and normalises by
// the estimated volume:
//
//   p_hat = [suspects - mu_f V_E / cV] / mu_s * cV / V_E
//
// Its relative standard error over a patient population is the linear sum
//
//   V_SE + r (1 + V_SE) + (1 + r) sqrt(cV / (p V))
//        + (V_SE / p)(mu_f / mu_s) + (sigma_f / mu_s)(1 + V_SE) / p
//
// with r = sigma_s / mu_s. QuantErrorBreakdown keeps these terms apart
// (the Poisson group split in two); SourceErrorTerms goes one step finer,
// one entry per independent source or source product, before any
// regrouping. Both sum to the same total.

#include "rarecount/classifier.hpp"
#include "rarecount/protocol.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rarecount {

struct SuspectCount {
    std::int64_t n_suspects = 0;        // tp + fp
    double estimated_volume_ul = 0.0;   // V_E
};

struct ParasitemiaEstimate {
    double p_hat = 0.0;  // unclamped, may be negative
    bool below_expected_fp = false;

    double clamped() const noexcept { return p_hat < 0.0 ? 0.0 : p_hat; }
};

// Throws std::domain_error on negative suspects or a non-positive V_E.
ParasitemiaEstimate estimate_parasitemia(const SuspectCount& count, const ClassifierProfile& profile,
                                         double clinical_ul = 1.0);

// Real-valued suspect count, as produced by the expected-value simulator.
ParasitemiaEstimate estimate_parasitemia(double suspects, double estimated_volume_ul,
                                         const ClassifierProfile& profile, double clinical_ul = 1.0);

// sqrt(cV / (p V)); variance equals mean for a Poisson count.
double poisson_only_std_error(double parasitemia, const VolumeSpec& volume);

struct QuantErrorBreakdown {
    double vse_term = 0.0;
    double sigma_s_term = 0.0;
    double poisson_term = 0.0;
    double poisson_sigma_s_cross_term = 0.0;
    double mu_f_term = 0.0;
    double sigma_f_term = 0.0;
    double total = 0.0;

    double term_sum() const noexcept {
        return vse_term + sigma_s_term + poisson_term + poisson_sigma_s_cross_term + mu_f_term + sigma_f_term;
    }
};

QuantErrorBreakdown std_error_breakdown(const ClassifierProfile& profile, double parasitemia,
                                        const VolumeSpec& volume);

// Ungrouped terms, one per source (or product of two sources).
struct SourceErrorTerms {
    double volume = 0.0;                // V_SE
    double poisson = 0.0;               // sqrt(cV / (p V))
    double sensitivity = 0.0;           // r
    double volume_x_sensitivity = 0.0;  // V_SE r
    double poisson_x_sensitivity = 0.0; // r sqrt(cV / (p V))
    double volume_x_fp_mean = 0.0;      // V_SE mu_f / (mu_s p)
    double fp_spread = 0.0;             // sigma_f / (mu_s p)
    double volume_x_fp_spread = 0.0;    // V_SE sigma_f / (mu_s p)

    std::array<double, 8> values() const noexcept {
        return {volume, poisson, sensitivity, volume_x_sensitivity, poisson_x_sensitivity,
                volume_x_fp_mean, fp_spread, volume_x_fp_spread};
    }

    // Equals QuantErrorBreakdown::total.
    double linear_sum() const noexcept;

    // sqrt(sum of squares): the combined std dev if the entries were
    // independent zero-mean contributions.
    double quadrature_sum() const noexcept;
};

SourceErrorTerms source_error_terms(const ClassifierProfile& profile, double parasitemia, const VolumeSpec& volume);

// Classifier error alone: sigma_s / mu_s + sigma_f / (mu_s p).
double classifier_only_std_error(const ClassifierProfile& profile, double parasitemia);

struct ErrorCurve {
    std::vector<double> parasitemias;
    std::vector<double> std_errors;
    std::string label;
};

// 100..1000 step 50, 1500..9500 step 500, 10000..148000 step 2000: the
// x-axis of the published error curves with the duplicate 1000 removed.
std::vector<double> default_parasitemia_grid();

// Perfect reader at the protocol volume for each p, plus human_vse
// added linearly (not in quadrature).
ErrorCurve human_protocol_curve(const std::vector<double>& p_grid, double human_vse,
                                const ProtocolConstants& protocol = {}, double clinical_ul = 1.0);

ErrorCurve machine_curve(const ClassifierProfile& profile, const std::vector<double>& p_grid,
                         const VolumeSpec& volume);

// Absolute tolerance for "closely matches the human curve".
inline constexpr double kDefaultMatchSlack = 0.02;

// Smallest grid volume whose machine curve stays within human + slack at
// every p, or nullopt. The volume grid need not be sorted.
std::optional<VolumeSpec> volume_to_match_human(const ClassifierProfile& profile, const std::vector<double>& p_grid,
                                                double human_vse, const std::vector<double>& volume_grid_ul,
                                                double slack = kDefaultMatchSlack,
                                                const ProtocolConstants& protocol = {}, double clinical_ul = 1.0);

}  // namespace rarecount
