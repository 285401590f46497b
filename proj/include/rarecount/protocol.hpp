#pragma once

// Clinical protocol constants for blood-film microscopy and the
// cell-count -> examined-volume conversions built on them.

#include <cstdint>

namespace rarecount {

// Examined volume V and the clinical reference volume cV, both in uL.
class VolumeSpec {
public:
    // Throws std::domain_error unless both volumes are positive and V/cV is finite.
    explicit VolumeSpec(double examined_ul, double clinical_ul = 1.0);

    double examined_ul() const noexcept { return examined_ul_; }
    double clinical_ul() const noexcept { return clinical_ul_; }

    // V / cV
    double ratio() const noexcept { return examined_ul_ / clinical_ul_; }

    // Same examined volume against a different clinical reference.
    VolumeSpec with_clinical(double clinical_ul) const { return VolumeSpec(examined_ul_, clinical_ul); }

    friend bool operator==(const VolumeSpec&, const VolumeSpec&) = default;

private:
    double examined_ul_;
    double clinical_ul_;
};

// Research-protocol defaults: 500 WBCs on thick film below the switch
// parasitemia, 2000 RBCs on thin film above it.
struct ProtocolConstants {
    double wbc_per_ul = 8000.0;
    double rbc_per_ul = 5.0e6;
    std::int64_t thick_film_wbc_count = 500;
    std::int64_t thin_film_rbc_count = 2000;
    double film_switch_parasitemia = 16000.0;
    double diagnosis_confidence = 0.95;

    // Throws std::domain_error on non-positive counts/densities or a
    // confidence outside (0, 1).
    void validate() const;

    double thick_film_volume_ul() const;
    double thin_film_volume_ul() const;
};

// Diagnostic microscopy variant that stops at 200 WBCs. Not used by the
// default curves.
inline constexpr std::int64_t kDiagnosticWbcCount = 200;

// Peru's reference WBC density; build ProtocolConstants with it when needed.
inline constexpr double kPeruWbcPerUl = 6000.0;

VolumeSpec wbc_count_to_volume(std::int64_t n_wbc, const ProtocolConstants& protocol = {});
VolumeSpec rbc_count_to_volume(std::int64_t n_rbc, const ProtocolConstants& protocol = {});

// Thick-film volume for p <= film_switch_parasitemia, thin-film volume above.
// The boundary belongs to thick film.
VolumeSpec protocol_volume_for_parasitemia(double parasitemia, const ProtocolConstants& protocol = {});

}  // namespace rarecount
