#pragma once

// Ordered grids of volumes or parasitemias.
//
// Text syntax: "start:stop:step[,start:stop:step...]" where each segment is
// inclusive of stop; a bare number is a single point. Segments are merged,
// sorted and de-duplicated, so "100:1000:50,1000:9500:500" lists 1000 once.

#include <string_view>
#include <vector>

namespace rarecount {

// start, start + step, ... up to and including stop (within 1e-9 step).
// Values are snapped to 12 significant digits so 0.05 + 3 * 0.05 prints
// and compares as 0.2. Throws std::invalid_argument on step <= 0 or stop < start.
std::vector<double> stepped_range(double start, double stop, double step);

// Throws std::invalid_argument on malformed text or an empty result.
std::vector<double> parse_grid_spec(std::string_view spec);

// Comma-separated plain numbers, order preserved. Empty text yields an
// empty list.
std::vector<double> parse_number_list(std::string_view text);

// True when values are strictly increasing and all > 0.
bool is_positive_increasing(const std::vector<double>& values);

}  // namespace rarecount
