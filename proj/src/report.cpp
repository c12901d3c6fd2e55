#include "adbdiff/report.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <set>

#include "json.hpp"

#include "adbdiff/errors.hpp"
#include "adbdiff/features.hpp"
#include "adbdiff/url.hpp"

namespace adbdiff::report {

namespace {

using nlohmann::json;

// Paywall stems looked for near a detection keyword. A stem matches a word
// prefix, and the rest of the word must be a plain inflection — that keeps
// "abo" (subscription) from firing on "about".
const std::vector<std::string> kCostStems = {"subscribe", "pay", "donat", "pro version", "abo"};
const std::set<std::string> kInflections = {"",   "s",   "d",    "e",    "es",     "ed",
                                            "er", "ers", "ing",  "ion",  "ions",   "or",
                                            "ors", "ment", "ments", "wall", "walls",
                                            "nnement", "nnements"};

std::string trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    size_t start = 0;
    while (start <= text.size()) {
        size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) lines.emplace_back(text.substr(start));
            break;
        }
        lines.emplace_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

bool is_word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

// Word-boundary prefix match of stem at position q of lowercased text,
// accepting only inflection tails.
bool stem_matches_at(const std::string& text, size_t q, const std::string& stem) {
    if (text.compare(q, stem.size(), stem) != 0) return false;
    if (q > 0 && is_word_char(text[q - 1])) return false;
    size_t tail_begin = q + stem.size();
    size_t tail_end = tail_begin;
    while (tail_end < text.size() && text[tail_end] >= 'a' && text[tail_end] <= 'z') ++tail_end;
    return kInflections.count(text.substr(tail_begin, tail_end - tail_begin)) > 0;
}

}  // namespace

std::map<std::string, bool> read_verification(std::string_view text) {
    std::vector<std::string> lines = split_lines(text);
    if (lines.empty() || trim(lines[0]) != "host,verdict")
        throw ParseError("verification file must start with header host,verdict", 1);
    std::map<std::string, bool> verdicts;
    for (size_t i = 1; i < lines.size(); ++i) {
        std::string line = trim(lines[i]);
        if (line.empty() || line[0] == '#') continue;
        size_t comma = line.find(',');
        if (comma == std::string::npos) throw ParseError("expected host,verdict", i + 1);
        std::string host = normalize_host(trim(line.substr(0, comma)));
        std::string verdict = to_lower(trim(line.substr(comma + 1)));
        if (host.empty()) throw ParseError("empty host", i + 1);
        if (verdict == "true")
            verdicts[host] = true;
        else if (verdict == "false")
            verdicts[host] = false;
        else
            throw ParseError("verdict must be true or false, got '" + verdict + "'", i + 1);
    }
    return verdicts;
}

std::vector<SitePrediction> read_predictions(std::string_view text) {
    std::vector<std::string> lines = split_lines(text);
    if (lines.empty() || trim(lines[0]) != "site,label,score")
        throw ParseError("prediction file must start with header site,label,score", 1);
    std::vector<SitePrediction> out;
    for (size_t i = 1; i < lines.size(); ++i) {
        std::string line = trim(lines[i]);
        if (line.empty()) continue;
        size_t c1 = line.find(',');
        size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c2 == std::string::npos) throw ParseError("expected site,label,score", i + 1);
        SitePrediction pred;
        pred.site = trim(line.substr(0, c1));
        if (pred.site.empty()) throw ParseError("empty site", i + 1);
        try {
            pred.label = parse_label_token(trim(line.substr(c1 + 1, c2 - c1 - 1)));
        } catch (const ParseError& err) {
            throw ParseError(err.what(), i + 1);
        }
        std::string score = trim(line.substr(c2 + 1));
        auto [ptr, ec] = std::from_chars(score.data(), score.data() + score.size(), pred.score);
        if (ec != std::errc() || ptr != score.data() + score.size())
            throw ParseError("bad score '" + score + "'", i + 1);
        out.push_back(std::move(pred));
    }
    return out;
}

std::string write_predictions(const std::vector<SitePrediction>& predictions) {
    std::string csv = "site,label,score\n";
    for (const SitePrediction& pred : predictions)
        csv += pred.site + "," + label_token(pred.label) + "," + fixed(pred.score, 6) + "\n";
    return csv;
}

RegionReport aggregate_region(
    const std::string& region,
    const std::vector<std::pair<std::string, std::vector<SitePrediction>>>& predictions_by_classifier,
    const std::map<std::string, bool>& verified) {
    RegionReport out;
    out.region = region;
    std::set<std::string> all_sites;
    std::set<std::string> confirmed;
    for (const auto& [classifier, predictions] : predictions_by_classifier) {
        ClassifierRow row;
        row.classifier = classifier;
        for (const SitePrediction& pred : predictions) {
            all_sites.insert(pred.site);
            if (pred.label != Label::True) continue;
            ++row.predicted;
            auto it = verified.find(pred.site);
            if (it == verified.end())
                throw ParameterError("no verification verdict for flagged site " + pred.site);
            if (it->second) {
                ++row.tp;
                confirmed.insert(pred.site);
            } else {
                ++row.fp;
            }
        }
        if (row.predicted > 0) {
            row.precision = static_cast<double>(row.tp) / static_cast<double>(row.predicted);
        } else {
            row.precision = 0.0;
            row.precision_undefined = true;
        }
        out.rows.push_back(std::move(row));
    }
    out.total_sites = all_sites.size();
    out.positive_rate = out.total_sites == 0
                            ? 0.0
                            : static_cast<double>(confirmed.size()) / static_cast<double>(out.total_sites);
    return out;
}

std::string region_report_to_json(const RegionReport& report) {
    json doc;
    doc["region"] = report.region;
    doc["total_sites"] = report.total_sites;
    doc["positive_rate"] = report.positive_rate;
    json rows = json::array();
    for (const ClassifierRow& row : report.rows) {
        json cell;
        cell["classifier"] = row.classifier;
        cell["predicted"] = row.predicted;
        cell["tp"] = row.tp;
        cell["fp"] = row.fp;
        cell["precision"] = row.precision;
        if (row.precision_undefined) cell["precision_undefined"] = true;
        rows.push_back(std::move(cell));
    }
    doc["classifiers"] = std::move(rows);
    return doc.dump(2) + "\n";
}

std::string region_report_to_text(const RegionReport& report) {
    std::string text = "Region: " + report.region + "\n\n";
    size_t name_width = std::string("Classifier").size();
    for (const ClassifierRow& row : report.rows)
        name_width = std::max(name_width, row.classifier.size());
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-*s  %9s  %5s  %5s  %9s\n", static_cast<int>(name_width),
                  "Classifier", "Predicted", "TP", "FP", "Precision");
    text += buf;
    for (const ClassifierRow& row : report.rows) {
        std::string precision = fixed(row.precision, 3);
        if (row.precision_undefined) precision += " (undefined)";
        std::snprintf(buf, sizeof buf, "%-*s  %9zu  %5zu  %5zu  %s\n", static_cast<int>(name_width),
                      row.classifier.c_str(), row.predicted, row.tp, row.fp, precision.c_str());
        text += buf;
    }
    std::snprintf(buf, sizeof buf, "\nTotal sites: %zu\nPositive rate: %s\n", report.total_sites,
                  fixed(report.positive_rate, 3).c_str());
    text += buf;
    return text;
}

std::string response_category_token(ResponseCategory category) {
    switch (category) {
        case ResponseCategory::Cost: return "cost";
        case ResponseCategory::Invisibility: return "invisibility";
        case ResponseCategory::Availability: return "availability";
        case ResponseCategory::None: return "none";
    }
    throw ParameterError("unknown response category");
}

ResponseCategory parse_response_category(std::string_view token) {
    std::string t = to_lower(trim(token));
    if (t == "cost") return ResponseCategory::Cost;
    if (t == "invisibility") return ResponseCategory::Invisibility;
    if (t == "availability") return ResponseCategory::Availability;
    if (t == "none") return ResponseCategory::None;
    throw ParseError("unknown response category '" + t + "'");
}

ResponseLabel label_response(const CapturePair& pair) {
    return label_response(pair, ResponseThresholds{}, default_keywords());
}

ResponseLabel label_response(const CapturePair& pair, const ResponseThresholds& thresholds,
                             const std::vector<std::string>& keywords) {
    if (pair.status != PairStatus::OK)
        throw ParameterError("response label needs an OK capture pair");

    RawCounts base = count_features(pair.baseline.html, keywords);
    RawCounts blocked = count_features(pair.blocked.html, keywords);
    std::string blocked_text = to_lower(visible_text(pair.blocked.html));

    ResponseLabel label;
    if (!blocked.keywords_present) {
        label.evidence = "no detection keyword in the blocked variant";
        return label;
    }

    double percent = base.chars > 0
                         ? 100.0 * static_cast<double>(blocked.chars) / static_cast<double>(base.chars)
                         : 100.0;

    // Cost first: a paywall pitch beats the visibility signature.
    for (const std::string& keyword : keywords) {
        std::string kw = to_lower(keyword);
        for (size_t pos = blocked_text.find(kw); pos != std::string::npos;
             pos = blocked_text.find(kw, pos + 1)) {
            size_t window_begin = pos > 300 ? pos - 300 : 0;
            size_t window_end = std::min(blocked_text.size(), pos + kw.size() + 300);
            for (const std::string& stem : kCostStems) {
                for (size_t q = window_begin; q + stem.size() <= window_end; ++q) {
                    if (!stem_matches_at(blocked_text, q, stem)) continue;
                    label.category = ResponseCategory::Cost;
                    label.evidence =
                        "cost term \"" + stem + "\" near detection keyword \"" + kw + "\"";
                    return label;
                }
            }
        }
    }

    std::string first_keyword;
    for (const std::string& keyword : keywords) {
        if (blocked_text.find(to_lower(keyword)) != std::string::npos) {
            first_keyword = to_lower(keyword);
            break;
        }
    }

    double base_chars = static_cast<double>(base.chars);
    if (static_cast<double>(blocked.chars) < thresholds.invisibility * base_chars) {
        label.category = ResponseCategory::Invisibility;
        label.evidence = "blocked text " + std::to_string(blocked.chars) + " chars vs baseline " +
                         std::to_string(base.chars) + " (" + fixed(percent, 1) + "%)";
        return label;
    }
    if (static_cast<double>(blocked.chars) >= thresholds.availability * base_chars) {
        label.category = ResponseCategory::Availability;
        label.evidence = "detection keyword \"" + first_keyword + "\" with " + fixed(percent, 1) +
                         "% of baseline text retained";
        return label;
    }
    label.evidence = "keyword \"" + first_keyword + "\" present but text retention " +
                     fixed(percent, 1) + "% matches no response pattern";
    return label;
}

std::map<std::string, ResponseLabel> read_manual_labels(std::string_view text) {
    std::map<std::string, ResponseLabel> labels;
    std::vector<std::string> lines = split_lines(text);
    for (size_t i = 0; i < lines.size(); ++i) {
        std::string line = trim(lines[i]);
        if (line.empty() || line[0] == '#') continue;
        if (i == 0 && to_lower(line).rfind("host,category", 0) == 0) continue;
        size_t c1 = line.find(',');
        if (c1 == std::string::npos) throw ParseError("expected host,category[,evidence]", i + 1);
        size_t c2 = line.find(',', c1 + 1);
        std::string host = normalize_host(trim(line.substr(0, c1)));
        if (host.empty()) throw ParseError("empty host", i + 1);
        std::string category =
            c2 == std::string::npos ? line.substr(c1 + 1) : line.substr(c1 + 1, c2 - c1 - 1);
        ResponseLabel label;
        try {
            label.category = parse_response_category(category);
        } catch (const ParseError& err) {
            throw ParseError(err.what(), i + 1);
        }
        label.evidence = c2 == std::string::npos ? std::string("manual label")
                                                 : trim(line.substr(c2 + 1));
        label.source = ResponseSource::Manual;
        labels[host] = std::move(label);
    }
    return labels;
}

ResponseLabel merge_labels(const ResponseLabel& heuristic,
                           const std::optional<ResponseLabel>& manual) {
    if (!manual) return heuristic;
    ResponseLabel label = *manual;
    label.source = ResponseSource::Manual;
    return label;
}

}  // namespace adbdiff::report
