#include "rarecount/classifier.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rarecount {

namespace {

void require_non_negative(double value, const char* name) {
    if (!std::isfinite(value) || value < 0.0) {
        throw std::domain_error(std::string(name) + " must be finite and >= 0");
    }
}

}  // namespace

void ClassifierProfile::validate() const {
    if (!std::isfinite(mu_s) || !(mu_s > 0.0) || mu_s > 1.0) {
        throw std::domain_error("mu_s must lie in (0, 1]");
    }
    require_non_negative(sigma_s, "sigma_s");
    require_non_negative(mu_f, "mu_f");
    require_non_negative(sigma_f, "sigma_f");
    require_non_negative(v_se, "v_se");
    if (sensitivity_tail_below_zero() && !allow_sensitivity_tail) {
        throw std::domain_error("mu_s - sigma_s < 0; set allow_sensitivity_tail to accept a truncated population");
    }
}

}  // namespace rarecount
