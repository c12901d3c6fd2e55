#include "adbdiff/config.hpp"

#include <algorithm>
#include <charconv>

#include "adbdiff/errors.hpp"

namespace adbdiff::config {

namespace {

std::string trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "baseline_driver",
        "blocked_driver",
        "baseline_capabilities_file",
        "blocked_capabilities_file",
        "settle_delay_ms",
        "liveness_timeout_ms",
        "parallelism",
        "seed",
        "filter_list",
        "keywords",
        "invisibility_threshold",
        "availability_threshold",
    };
    return keys;
}

Config parse_config(std::string_view text) {
    Config config;
    size_t line_no = 0;
    size_t start = 0;
    while (start <= text.size()) {
        size_t nl = text.find('\n', start);
        std::string_view raw = nl == std::string_view::npos ? text.substr(start)
                                                            : text.substr(start, nl - start);
        ++line_no;
        std::string line = trim(raw);
        if (!line.empty() && line[0] != '#') {
            size_t eq = line.find('=');
            if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw ParseError("empty config key", line_no);
            const auto& keys = known_keys();
            if (std::find(keys.begin(), keys.end(), key) == keys.end())
                throw ParseError("unknown config key '" + key + "'", line_no);
            if (config.values.count(key)) throw ParseError("duplicate config key '" + key + "'", line_no);
            if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
                value = value.substr(1, value.size() - 2);
            config.values[key] = value;
        }
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return config;
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

long long Config::get_int(const std::string& key, long long fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    const std::string& v = it->second;
    long long parsed = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), parsed);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ParameterError("config key " + key + " needs an integer, got '" + v + "'");
    return parsed;
}

double Config::get_double(const std::string& key, double fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    const std::string& v = it->second;
    double parsed = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), parsed);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ParameterError("config key " + key + " needs a number, got '" + v + "'");
    return parsed;
}

std::vector<std::string> Config::get_list(const std::string& key) const {
    auto it = values.find(key);
    std::vector<std::string> out;
    if (it == values.end()) return out;
    const std::string& v = it->second;
    size_t start = 0;
    while (start <= v.size()) {
        size_t comma = v.find(',', start);
        std::string item = trim(comma == std::string::npos ? v.substr(start)
                                                           : v.substr(start, comma - start));
        if (!item.empty()) out.push_back(std::move(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace adbdiff::config
