#include "rarecount/quant.hpp"

#include "rarecount/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rarecount {

namespace {

void require_parasitemia(double p) {
    if (!(p > 0.0) || !std::isfinite(p)) {
        throw std::domain_error("parasitemia must be positive and finite");
    }
}

void require_grid(const std::vector<double>& grid, const char* what) {
    if (grid.empty()) {
        throw std::domain_error(std::string(what) + " is empty");
    }
    if (!is_positive_increasing(grid)) {
        throw std::domain_error(std::string(what) + " must be strictly increasing and positive");
    }
}

}  // namespace

ParasitemiaEstimate estimate_parasitemia(double suspects, double estimated_volume_ul,
                                         const ClassifierProfile& profile, double clinical_ul) {
    profile.validate();
    if (!(suspects >= 0.0) || !std::isfinite(suspects)) {
        throw std::domain_error("suspect count must be finite and >= 0");
    }
    if (!(estimated_volume_ul > 0.0) || !std::isfinite(estimated_volume_ul)) {
        throw std::domain_error("estimated volume must be positive");
    }
    if (!(clinical_ul > 0.0)) {
        throw std::domain_error("clinical volume must be positive");
    }
    const double expected_fp = profile.mu_f * estimated_volume_ul / clinical_ul;
    const double detected = suspects - expected_fp;
    ParasitemiaEstimate est;
    est.p_hat = detected / profile.mu_s * clinical_ul / estimated_volume_ul;
    est.below_expected_fp = detected < 0.0;
    return est;
}

ParasitemiaEstimate estimate_parasitemia(const SuspectCount& count, const ClassifierProfile& profile,
                                         double clinical_ul) {
    if (count.n_suspects < 0) {
        throw std::domain_error("suspect count must be >= 0");
    }
    return estimate_parasitemia(static_cast<double>(count.n_suspects), count.estimated_volume_ul, profile,
                                clinical_ul);
}

double poisson_only_std_error(double parasitemia, const VolumeSpec& volume) {
    require_parasitemia(parasitemia);
    return std::sqrt(1.0 / (parasitemia * volume.ratio()));
}

QuantErrorBreakdown std_error_breakdown(const ClassifierProfile& profile, double parasitemia,
                                        const VolumeSpec& volume) {
    profile.validate();
    const double poisson = poisson_only_std_error(parasitemia, volume);
    const double r = profile.relative_sensitivity_spread();
    const double vse = profile.v_se;

    QuantErrorBreakdown b;
    b.vse_term = vse;
    b.sigma_s_term = r * (1.0 + vse);
    b.poisson_term = poisson;
    b.poisson_sigma_s_cross_term = r * poisson;
    b.mu_f_term = (vse / parasitemia) * (profile.mu_f / profile.mu_s);
    b.sigma_f_term = (profile.sigma_f / profile.mu_s) * (1.0 + vse) / parasitemia;
    b.total = b.term_sum();
    return b;
}

double SourceErrorTerms::linear_sum() const noexcept {
    double s = 0.0;
    for (double v : values()) s += v;
    return s;
}

double SourceErrorTerms::quadrature_sum() const noexcept {
    double s = 0.0;
    for (double v : values()) s += v * v;
    return std::sqrt(s);
}

SourceErrorTerms source_error_terms(const ClassifierProfile& profile, double parasitemia, const VolumeSpec& volume) {
    profile.validate();
    const double poisson = poisson_only_std_error(parasitemia, volume);
    const double r = profile.relative_sensitivity_spread();
    const double vse = profile.v_se;
    const double fp_spread = profile.sigma_f / (profile.mu_s * parasitemia);

    SourceErrorTerms t;
    t.volume = vse;
    t.poisson = poisson;
    t.sensitivity = r;
    t.volume_x_sensitivity = vse * r;
    t.poisson_x_sensitivity = r * poisson;
    t.volume_x_fp_mean = vse * profile.mu_f / (profile.mu_s * parasitemia);
    t.fp_spread = fp_spread;
    t.volume_x_fp_spread = vse * fp_spread;
    return t;
}

double classifier_only_std_error(const ClassifierProfile& profile, double parasitemia) {
    profile.validate();
    require_parasitemia(parasitemia);
    return profile.relative_sensitivity_spread() + (profile.sigma_f / profile.mu_s) / parasitemia;
}

std::vector<double> default_parasitemia_grid() {
    std::vector<double> grid;
    for (int p = 100; p <= 1000; p += 50) grid.push_back(p);
    for (int p = 1500; p < 10000; p += 500) grid.push_back(p);
    for (int p = 10000; p < 150000; p += 2000) grid.push_back(p);
    return grid;
}

ErrorCurve human_protocol_curve(const std::vector<double>& p_grid, double human_vse,
                                const ProtocolConstants& protocol, double clinical_ul) {
    require_grid(p_grid, "parasitemia grid");
    if (!(human_vse >= 0.0) || !std::isfinite(human_vse)) {
        throw std::domain_error("human volume error must be finite and >= 0");
    }
    ErrorCurve curve;
    curve.label = human_vse > 0.0 ? "human_protocol_plus_vse" : "human_protocol";
    curve.parasitemias = p_grid;
    curve.std_errors.reserve(p_grid.size());
    for (double p : p_grid) {
        const VolumeSpec v = protocol_volume_for_parasitemia(p, protocol).with_clinical(clinical_ul);
        curve.std_errors.push_back(poisson_only_std_error(p, v) + human_vse);
    }
    return curve;
}

ErrorCurve machine_curve(const ClassifierProfile& profile, const std::vector<double>& p_grid,
                         const VolumeSpec& volume) {
    require_grid(p_grid, "parasitemia grid");
    ErrorCurve curve;
    curve.label = "machine";
    curve.parasitemias = p_grid;
    curve.std_errors.reserve(p_grid.size());
    for (double p : p_grid) {
        curve.std_errors.push_back(std_error_breakdown(profile, p, volume).total);
    }
    return curve;
}

std::optional<VolumeSpec> volume_to_match_human(const ClassifierProfile& profile, const std::vector<double>& p_grid,
                                                double human_vse, const std::vector<double>& volume_grid_ul,
                                                double slack, const ProtocolConstants& protocol,
                                                double clinical_ul) {
    if (volume_grid_ul.empty()) {
        throw std::domain_error("volume grid is empty");
    }
    if (!(slack >= 0.0)) {
        throw std::domain_error("slack must be >= 0");
    }
    const ErrorCurve human = human_protocol_curve(p_grid, human_vse, protocol, clinical_ul);

    std::vector<double> volumes = volume_grid_ul;
    std::sort(volumes.begin(), volumes.end());
    for (double v : volumes) {
        const VolumeSpec volume(v, clinical_ul);
        const ErrorCurve machine = machine_curve(profile, p_grid, volume);
        bool within = true;
        for (std::size_t i = 0; i < p_grid.size() && within; ++i) {
            within = machine.std_errors[i] <= human.std_errors[i] + slack;
        }
        if (within) {
            return volume;
        }
    }
    return std::nullopt;
}

}  // namespace rarecount
