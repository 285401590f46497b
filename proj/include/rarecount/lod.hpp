#pragma once

// Limit-of-detection analysis.
//
// A perfect reader detects a sample iff it holds at least one object. An
// imperfect classifier must instead push its suspect count over a
// threshold T set high enough that most negative samples stay below it:
//
//   T = (mu_f + z * sigma_f) * V / cV
//
// A "clean" positive sample sits z sigma below the FP mean, so it needs
// more than 2 z sigma_f V / cV true positives, i.e. at least
//
//   x = 2 z sigma_f (V / cV) / mu_s
//
// objects present. V is feasible for a target LoD N when
// P(K <= floor(x) | lambda = N V / cV) < 1 - confidence.

#include "rarecount/classifier.hpp"
#include "rarecount/protocol.hpp"

#include <optional>
#include <vector>

namespace rarecount {

inline constexpr double kDefaultConfidence = 0.95;

// One-sided Gaussian factor for the default 95% confidence. The
// clean-sample gap is twice this (3.3).
inline constexpr double kThresholdZ95 = 1.65;

struct ConfidenceFactors {
    double threshold_z;       // 1.65 at 95%
    double clean_sample_gap;  // 3.3 at 95%
};

// Scales 1.65 by Phi^{-1}(confidence) / Phi^{-1}(0.95); exact 1.65 / 3.3
// at the default. Throws std::domain_error outside (0, 1).
ConfidenceFactors confidence_factors(double confidence);

// Smallest N with P(n >= 1 | N V / cV) >= confidence: -ln(1 - c) cV / V.
double perfect_human_lod(const VolumeSpec& volume, double confidence = kDefaultConfidence);

// Suspect-count threshold T. Real valued; rounding is the caller's call.
double detection_threshold(const ClassifierProfile& profile, const VolumeSpec& volume,
                           double confidence = kDefaultConfidence);

// Required objects present, x. Independent of mu_f.
double required_true_parasites(const ClassifierProfile& profile, const VolumeSpec& volume,
                               double confidence = kDefaultConfidence);

// 2 z sigma_f / mu_s: required objects grow with V at this rate per cV, so
// any target LoD at or below it is unreachable at every volume.
double asymptotic_lod_floor(const ClassifierProfile& profile, double confidence = kDefaultConfidence);

struct LodPoint {
    double volume_ul = 0.0;
    double threshold_t = 0.0;
    double required_true_parasites = 0.0;
    double lambda = 0.0;
    double tail_prob = 0.0;  // P(K <= floor(x))
    bool feasible = false;
};

LodPoint evaluate_lod_point(const ClassifierProfile& profile, const VolumeSpec& volume, double target_lod,
                            double confidence = kDefaultConfidence);

bool lod_feasible_at_volume(const ClassifierProfile& profile, const VolumeSpec& volume, double target_lod,
                            double confidence = kDefaultConfidence);

struct LodQuery {
    double target_lod = 0.0;  // parasites per cV
    double confidence = kDefaultConfidence;
    std::vector<double> volume_grid_ul;
    double clinical_ul = 1.0;

    // Throws std::domain_error on a non-positive target, a confidence
    // outside (0, 1), or an empty / unordered / non-positive grid.
    void validate() const;
};

struct LodResult {
    bool feasible = false;
    std::optional<double> min_volume_ul;
    std::optional<double> threshold_t;
    std::optional<double> required_true_parasites;
    bool asymptotically_infeasible = false;
    std::vector<LodPoint> sweep;  // every grid point, in grid order
};

// Grid sweep; the first feasible grid volume wins. feasible == false with
// asymptotically_infeasible == false only means "not within this grid".
LodResult min_volume_for_lod(const ClassifierProfile& profile, const LodQuery& query);

}  // namespace rarecount
