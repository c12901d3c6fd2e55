#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace adbdiff::config {

struct Config {
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) > 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::vector<std::string> get_list(const std::string& key) const;  // comma-split, trimmed
};

// Accepted keys:
//   baseline_driver              WebDriver endpoint for the plain profile
//   blocked_driver               WebDriver endpoint for the ad-blocking profile
//   baseline_capabilities_file   JSON capabilities for the plain session
//   blocked_capabilities_file    JSON capabilities for the blocking session
//   settle_delay_ms              wait after navigation before reading the page
//   liveness_timeout_ms          budget for the pre-capture reachability check
//   parallelism                  sites captured concurrently
//   seed                         run-level random seed
//   filter_list                  path to the Adblock-Plus-syntax rules
//   keywords                     comma-separated detection vocabulary override
//   invisibility_threshold       blocked/baseline text share below -> Invisibility
//   availability_threshold       blocked/baseline text share at or above -> Availability
const std::vector<std::string>& known_keys();

// `key = value` per line, full-line # comments, optional double quotes
// around values. Unknown and duplicate keys are rejected so typos fail
// loudly instead of being ignored.
Config parse_config(std::string_view text);

}  // namespace adbdiff::config
