#pragma once

// Classifier profile files.
//
// A flat key = value document; '#' starts a comment. Units go in comments
// by convention:
//
//   # sensitivity (fraction of objects flagged)
//   mu_s    = 0.95
//   sigma_s = 0.03
//   # false positives per uL
//   mu_f    = 50
//   sigma_f = 10
//   # relative std error of the examined-volume estimate
//   v_se    = 0.02
//
// All five profile keys are required. wbc_per_ul and
// film_switch_parasitemia may override the protocol. Unknown or repeated
// keys are errors.

#include "rarecount/classifier.hpp"
#include "rarecount/protocol.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rarecount::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProfileConfig {
    ClassifierProfile profile;
    std::optional<double> wbc_per_ul;
    std::optional<double> film_switch_parasitemia;

    ProtocolConstants apply_to(ProtocolConstants base) const;
};

// Throws ConfigError with a line number on any problem.
ProfileConfig parse_profile_config(std::string_view text);
ProfileConfig load_profile_config(const std::filesystem::path& path);

}  // namespace rarecount::cli
