#include "rarecount/lod.hpp"

#include "rarecount/grid.hpp"
#include "rarecount/poisson.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <stdexcept>

namespace rarecount {

namespace {

void require_confidence(double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw std::domain_error("confidence must lie in (0, 1)");
    }
}

double normal_quantile(double q) {
    static const boost::math::normal_distribution<double> unit;
    return boost::math::quantile(unit, q);
}

}  // namespace

ConfidenceFactors confidence_factors(double confidence) {
    require_confidence(confidence);
    double z = kThresholdZ95;
    if (confidence != kDefaultConfidence) {
        z = kThresholdZ95 * normal_quantile(confidence) / normal_quantile(kDefaultConfidence);
    }
    return {z, 2.0 * z};
}

double perfect_human_lod(const VolumeSpec& volume, double confidence) {
    require_confidence(confidence);
    return -std::log1p(-confidence) / volume.ratio();
}

double detection_threshold(const ClassifierProfile& profile, const VolumeSpec& volume, double confidence) {
    profile.validate();
    const auto f = confidence_factors(confidence);
    return (profile.mu_f + f.threshold_z * profile.sigma_f) * volume.ratio();
}

double required_true_parasites(const ClassifierProfile& profile, const VolumeSpec& volume, double confidence) {
    profile.validate();
    const auto f = confidence_factors(confidence);
    return f.clean_sample_gap * profile.sigma_f * volume.ratio() / profile.mu_s;
}

double asymptotic_lod_floor(const ClassifierProfile& profile, double confidence) {
    profile.validate();
    return confidence_factors(confidence).clean_sample_gap * profile.sigma_f / profile.mu_s;
}

LodPoint evaluate_lod_point(const ClassifierProfile& profile, const VolumeSpec& volume, double target_lod,
                            double confidence) {
    if (!(target_lod > 0.0) || !std::isfinite(target_lod)) {
        throw std::domain_error("target LoD must be positive");
    }
    LodPoint pt;
    pt.volume_ul = volume.examined_ul();
    pt.threshold_t = detection_threshold(profile, volume, confidence);
    pt.required_true_parasites = required_true_parasites(profile, volume, confidence);
    pt.lambda = target_lod * volume.ratio();
    // Suspect counts are integral, so "more than x" means exceeding floor(x).
    const auto needed = static_cast<std::int64_t>(std::floor(pt.required_true_parasites));
    pt.tail_prob = cdf(needed, PoissonParam(pt.lambda));
    pt.feasible = pt.tail_prob < 1.0 - confidence;
    return pt;
}

bool lod_feasible_at_volume(const ClassifierProfile& profile, const VolumeSpec& volume, double target_lod,
                            double confidence) {
    return evaluate_lod_point(profile, volume, target_lod, confidence).feasible;
}

void LodQuery::validate() const {
    if (!(target_lod > 0.0) || !std::isfinite(target_lod)) {
        throw std::domain_error("target LoD must be positive");
    }
    require_confidence(confidence);
    if (volume_grid_ul.empty()) {
        throw std::domain_error("volume grid is empty");
    }
    if (!is_positive_increasing(volume_grid_ul)) {
        throw std::domain_error("volume grid must be strictly increasing and positive");
    }
    if (!(clinical_ul > 0.0)) {
        throw std::domain_error("clinical volume must be positive");
    }
}

LodResult min_volume_for_lod(const ClassifierProfile& profile, const LodQuery& query) {
    query.validate();
    profile.validate();

    LodResult result;
    result.asymptotically_infeasible = query.target_lod <= asymptotic_lod_floor(profile, query.confidence);
    result.sweep.reserve(query.volume_grid_ul.size());
    for (double v : query.volume_grid_ul) {
        const LodPoint pt = evaluate_lod_point(profile, VolumeSpec(v, query.clinical_ul), query.target_lod,
                                               query.confidence);
        result.sweep.push_back(pt);
        if (pt.feasible && !result.feasible) {
            result.feasible = true;
            result.min_volume_ul = pt.volume_ul;
            result.threshold_t = pt.threshold_t;
            result.required_true_parasites = pt.required_true_parasites;
        }
    }
    return result;
}

}  // namespace rarecount
