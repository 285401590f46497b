#pragma once

// Subcommands of the `rarecount` tool. Each writes CSV or JSON to `out`;
// run() parses argv, dispatches and maps failures to exit codes.

#include "rarecount/cli/profile_config.hpp"
#include "rarecount/sim.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rarecount::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

// Six significant digits, as printed in every CSV cell.
std::string format_number(double value);

// Rounds to the value format_number prints; JSON fields go through this.
double round_printed(double value);

// Named protocol variants: "research" (500 WBC / 2000 RBC), "diagnostic"
// (200 WBC thick film), "peru" (6000 WBC/uL). Throws std::invalid_argument.
ProtocolConstants protocol_preset(std::string_view name);

struct PoissonTableOptions {
    double parasitemia = 0.0;
    std::vector<double> volumes_ul;
    std::int64_t kmax = 20;
    double clinical_ul = 1.0;
};
void write_poisson_table(const PoissonTableOptions& opts, std::ostream& out);

struct LodOptions {
    ClassifierProfile profile;
    double target_lod = 0.0;
    std::vector<double> grid_ul;
    double confidence = 0.95;
    double clinical_ul = 1.0;
};
void write_lod_report(const LodOptions& opts, std::ostream& out);

struct QuantTermsOptions {
    ClassifierProfile profile;
    double volume_ul = 0.0;
    std::vector<double> p_grid;
    double clinical_ul = 1.0;
};
void write_quant_terms(const QuantTermsOptions& opts, std::ostream& out);

struct QuantCompareOptions {
    ClassifierProfile profile;
    ProtocolConstants protocol;
    std::vector<double> volumes_ul;
    double human_vse = 0.02;
    std::vector<double> p_grid;
    double clinical_ul = 1.0;
};
void write_quant_compare(const QuantCompareOptions& opts, std::ostream& out);

struct SimulateOptions {
    SimConfig config;
    double tolerance = kDefaultBracketTolerance;
};
void write_simulation(const SimulateOptions& opts, std::ostream& out);

struct EstimateOptions {
    ClassifierProfile profile;
    std::int64_t suspects = 0;
    double volume_estimate_ul = 0.0;
    double clinical_ul = 1.0;
};
void write_estimate(const EstimateOptions& opts, std::ostream& out);

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rarecount::cli
