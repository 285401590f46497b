#include "rarecount/protocol.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rarecount {

namespace {

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::domain_error(std::string(what) + " must be positive and finite");
    }
}

}  // namespace

VolumeSpec::VolumeSpec(double examined_ul, double clinical_ul)
    : examined_ul_(examined_ul), clinical_ul_(clinical_ul) {
    require_positive(examined_ul, "examined volume");
    require_positive(clinical_ul, "clinical volume");
    if (!std::isfinite(examined_ul / clinical_ul)) {
        throw std::domain_error("examined/clinical volume ratio is not finite");
    }
}

void ProtocolConstants::validate() const {
    require_positive(wbc_per_ul, "wbc_per_ul");
    require_positive(rbc_per_ul, "rbc_per_ul");
    require_positive(static_cast<double>(thick_film_wbc_count), "thick_film_wbc_count");
    require_positive(static_cast<double>(thin_film_rbc_count), "thin_film_rbc_count");
    require_positive(film_switch_parasitemia, "film_switch_parasitemia");
    if (!(diagnosis_confidence > 0.0 && diagnosis_confidence < 1.0)) {
        throw std::domain_error("diagnosis_confidence must lie in (0, 1)");
    }
}

double ProtocolConstants::thick_film_volume_ul() const {
    return static_cast<double>(thick_film_wbc_count) / wbc_per_ul;
}

double ProtocolConstants::thin_film_volume_ul() const {
    return static_cast<double>(thin_film_rbc_count) / rbc_per_ul;
}

VolumeSpec wbc_count_to_volume(std::int64_t n_wbc, const ProtocolConstants& protocol) {
    if (n_wbc <= 0) {
        throw std::domain_error("WBC count must be positive");
    }
    return VolumeSpec(static_cast<double>(n_wbc) / protocol.wbc_per_ul);
}

VolumeSpec rbc_count_to_volume(std::int64_t n_rbc, const ProtocolConstants& protocol) {
    if (n_rbc <= 0) {
        throw std::domain_error("RBC count must be positive");
    }
    return VolumeSpec(static_cast<double>(n_rbc) / protocol.rbc_per_ul);
}

VolumeSpec protocol_volume_for_parasitemia(double parasitemia, const ProtocolConstants& protocol) {
    if (!(parasitemia > 0.0)) {
        throw std::domain_error("parasitemia must be positive");
    }
    if (parasitemia <= protocol.film_switch_parasitemia) {
        return VolumeSpec(protocol.thick_film_volume_ul());
    }
    return VolumeSpec(protocol.thin_film_volume_ul());
}

}  // namespace rarecount
