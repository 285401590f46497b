#include "rarecount/cli/profile_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace rarecount::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double parse_value(std::string_view text, std::size_t line) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
        fail(line, "not a number: '" + std::string(text) + "'");
    }
    return v;
}

}  // namespace

ProtocolConstants ProfileConfig::apply_to(ProtocolConstants base) const {
    if (wbc_per_ul) base.wbc_per_ul = *wbc_per_ul;
    if (film_switch_parasitemia) base.film_switch_parasitemia = *film_switch_parasitemia;
    return base;
}

ProfileConfig parse_profile_config(std::string_view text) {
    static const char* const required[] = {"mu_s", "sigma_s", "mu_f", "sigma_f", "v_se"};
    static const char* const optional[] = {"wbc_per_ul", "film_switch_parasitemia"};

    std::map<std::string, double, std::less<>> values;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const double value = parse_value(trim(line.substr(eq + 1)), line_no);

        bool known = false;
        for (const char* k : required) known = known || key == k;
        for (const char* k : optional) known = known || key == k;
        if (!known) fail(line_no, "unknown key '" + key + "'");
        if (!values.emplace(key, value).second) fail(line_no, "duplicate key '" + key + "'");
    }
    for (const char* k : required) {
        if (!values.contains(k)) throw ConfigError(std::string("missing required key '") + k + "'");
    }

    ProfileConfig cfg;
    cfg.profile.mu_s = values.at("mu_s");
    cfg.profile.sigma_s = values.at("sigma_s");
    cfg.profile.mu_f = values.at("mu_f");
    cfg.profile.sigma_f = values.at("sigma_f");
    cfg.profile.v_se = values.at("v_se");
    if (auto it = values.find("wbc_per_ul"); it != values.end()) cfg.wbc_per_ul = it->second;
    if (auto it = values.find("film_switch_parasitemia"); it != values.end()) cfg.film_switch_parasitemia = it->second;

    try {
        cfg.profile.validate();
        cfg.apply_to({}).validate();
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

ProfileConfig load_profile_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_profile_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

}  // namespace rarecount::cli
