#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adbdiff/capture.hpp"
#include "adbdiff/dataset.hpp"

namespace adbdiff::report {

struct SitePrediction {
    std::string site;
    Label label = Label::False;
    double score = 0.0;
};

struct ClassifierRow {
    std::string classifier;
    std::size_t predicted = 0;  // sites the classifier flagged
    std::size_t tp = 0;         // flagged and verified true
    std::size_t fp = 0;         // flagged but verified false
    double precision = 0.0;
    bool precision_undefined = false;  // nothing flagged
};

struct RegionReport {
    std::string region;
    std::vector<ClassifierRow> rows;
    std::size_t total_sites = 0;   // distinct sites across all prediction lists
    double positive_rate = 0.0;    // verified-true flagged sites / total_sites
};

// Verification verdicts: CSV with header `host,verdict`, verdicts true/false.
// Hosts are normalized. Also reads the ground-truth file the corpus
// generator writes.
std::map<std::string, bool> read_verification(std::string_view text);

// Prediction CSV as written by `classify`: header `site,label,score`.
std::vector<SitePrediction> read_predictions(std::string_view text);
std::string write_predictions(const std::vector<SitePrediction>& predictions);

// One row per classifier. Every flagged site must carry a verdict; a missing
// one is an error naming the site. positive_rate counts the union of
// verified-true flagged sites, so with one classifier it equals tp / total.
RegionReport aggregate_region(
    const std::string& region,
    const std::vector<std::pair<std::string, std::vector<SitePrediction>>>& predictions_by_classifier,
    const std::map<std::string, bool>& verified);

std::string region_report_to_json(const RegionReport& report);
std::string region_report_to_text(const RegionReport& report);

// How a site reacts once it detects blocking: demand payment, blank the
// page, or just ask nicely.
enum class ResponseCategory { Cost, Invisibility, Availability, None };
enum class ResponseSource { Heuristic, Manual };

struct ResponseLabel {
    ResponseCategory category = ResponseCategory::None;
    std::string evidence;
    ResponseSource source = ResponseSource::Heuristic;
};

struct ResponseThresholds {
    double invisibility = 0.30;  // blocked text below this share of baseline
    double availability = 0.80;  // blocked text at or above this share
};

std::string response_category_token(ResponseCategory category);
ResponseCategory parse_response_category(std::string_view token);

// Heuristic label for an OK pair, checked in order:
//   Cost          a paywall term near a detection keyword in blocked text
//   Invisibility  keyword present and blocked text collapsed below threshold
//   Availability  keyword present with text substantially retained
//   None          otherwise
ResponseLabel label_response(const CapturePair& pair);
ResponseLabel label_response(const CapturePair& pair, const ResponseThresholds& thresholds,
                             const std::vector<std::string>& keywords);

// Operator-curated labels: CSV `host,category[,evidence]`. They always win
// over heuristic labels.
std::map<std::string, ResponseLabel> read_manual_labels(std::string_view text);
ResponseLabel merge_labels(const ResponseLabel& heuristic,
                           const std::optional<ResponseLabel>& manual);

}  // namespace adbdiff::report
