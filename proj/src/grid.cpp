#include "rarecount/grid.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rarecount {

namespace {

double snap(double value) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                   std::chars_format::general, 12);
    if (ec != std::errc{}) {
        return value;
    }
    double out = value;
    std::from_chars(buf.data(), end, out);
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
    return value;
}

template <class Fn>
void for_each_field(std::string_view text, char sep, Fn&& fn) {
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = text.find(sep, pos);
        fn(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
}

}  // namespace

std::vector<double> stepped_range(double start, double stop, double step) {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw std::invalid_argument("grid step must be positive");
    }
    if (stop < start) {
        throw std::invalid_argument("grid stop lies below start");
    }
    std::vector<double> out;
    const double slack = 1e-9 * step;
    for (std::size_t i = 0;; ++i) {
        const double v = start + static_cast<double>(i) * step;
        if (v > stop + slack) break;
        out.push_back(snap(v));
    }
    return out;
}

std::vector<double> parse_grid_spec(std::string_view spec) {
    std::vector<double> values;
    for_each_field(spec, ',', [&](std::string_view segment) {
        segment = trim(segment);
        if (segment.empty()) {
            throw std::invalid_argument("empty grid segment");
        }
        std::vector<std::string_view> parts;
        for_each_field(segment, ':', [&](std::string_view p) { parts.push_back(p); });
        if (parts.size() == 1) {
            values.push_back(parse_number(parts[0]));
        } else if (parts.size() == 3) {
            auto r = stepped_range(parse_number(parts[0]), parse_number(parts[1]), parse_number(parts[2]));
            values.insert(values.end(), r.begin(), r.end());
        } else {
            throw std::invalid_argument("grid segment must be 'start:stop:step' or a number: '" +
                                        std::string(segment) + "'");
        }
    });
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.empty()) {
        throw std::invalid_argument("grid is empty");
    }
    return values;
}

std::vector<double> parse_number_list(std::string_view text) {
    std::vector<double> out;
    if (trim(text).empty()) {
        return out;
    }
    for_each_field(text, ',', [&](std::string_view field) { out.push_back(parse_number(field)); });
    return out;
}

bool is_positive_increasing(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0)) return false;
        if (i > 0 && !(values[i] > values[i - 1])) return false;
    }
    return true;
}

}  // namespace rarecount
