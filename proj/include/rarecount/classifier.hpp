#pragma once

namespace rarecount {

// Population statistics of an imperfect object detector.
//
// Sensitivity S is the per-object hit probability, F the false-positive
// count per clinical volume; both vary from patient to patient. v_se is
// the relative standard error of the examined-volume estimate,
// sigma(V_E) / V, assumed constant in V.
struct ClassifierProfile {
    double mu_s = 1.0;
    double sigma_s = 0.0;
    double mu_f = 0.0;
    double sigma_f = 0.0;
    double v_se = 0.0;

    // Set to accept mu_s - sigma_s < 0. The simulator then clips a
    // noticeable share of sensitivity draws at zero.
    bool allow_sensitivity_tail = false;

    // Throws std::domain_error when an invariant is violated.
    void validate() const;

    // True when mu_s - sigma_s < 0.
    bool sensitivity_tail_below_zero() const noexcept { return mu_s - sigma_s < 0.0; }

    // sigma_s / mu_s
    double relative_sensitivity_spread() const noexcept { return sigma_s / mu_s; }

    // Sensitivity 1, no false positives, exact volume.
    static ClassifierProfile perfect() { return {}; }
};

}  // namespace rarecount
