#include "adbdiff/features.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>

#include "adbdiff/errors.hpp"
#include "adbdiff/html.hpp"
#include "adbdiff/url.hpp"

namespace adbdiff {
namespace {

const std::vector<std::string> kKeywords = {
    "adblocker", "adblock", "ad block", "ad-block",
    "whitelist", "block-adblock", "pagefair", "fuckadblock"};

bool is_ws(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool all_ws(std::string_view s) {
    return std::all_of(s.begin(), s.end(), is_ws);
}

// Unicode scalar count with each invalid byte reading as one replacement
// character.
long long scalar_count(std::string_view s) {
    long long n = 0;
    size_t i = 0;
    while (i < s.size()) {
        unsigned char lead = static_cast<unsigned char>(s[i]);
        size_t len = lead < 0x80 ? 1 : (lead & 0xE0) == 0xC0 ? 2 : (lead & 0xF0) == 0xE0 ? 3
                     : (lead & 0xF8) == 0xF0                 ? 4
                                                             : 0;
        bool valid = len > 0 && i + len <= s.size();
        for (size_t k = 1; valid && k < len; ++k)
            valid = (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
        ++n;
        i += valid ? len : 1;
    }
    return n;
}

std::string collect_visible_text(const html::Node& root) {
    std::string text;
    std::function<void(const html::Node&)> walk = [&](const html::Node& node) {
        if (node.type == html::NodeType::Element &&
            (node.name == "script" || node.name == "style"))
            return;
        if (node.type == html::NodeType::Text && !all_ws(node.text)) {
            if (!text.empty()) text += '\n';
            text += node.text;
        }
        for (const auto& child : node.children) walk(*child);
    };
    walk(root);
    return text;
}

}  // namespace

std::string visible_text(std::string_view html_text) {
    html::Document doc = html::parse(html_text);
    return collect_visible_text(*doc.root);
}

const std::vector<std::string>& default_keywords() { return kKeywords; }

bool detect_keywords(std::string_view text, const std::vector<std::string>& keywords) {
    std::string lower = to_lower(text);
    return std::any_of(keywords.begin(), keywords.end(), [&](const std::string& kw) {
        return lower.find(to_lower(kw)) != std::string::npos;
    });
}

bool detect_keywords(std::string_view text) { return detect_keywords(text, kKeywords); }

RawCounts count_features(std::string_view html_text, const std::vector<std::string>& keywords) {
    html::Document doc = html::parse(html_text);
    RawCounts counts;

    std::function<void(const html::Node&)> walk = [&](const html::Node& node) {
        if (node.type == html::NodeType::Element) {
            ++counts.tags_total;
            if (node.name == "a") ++counts.a;
            else if (node.name == "div") ++counts.div;
            else if (node.name == "h1") ++counts.h1;
            else if (node.name == "h2") ++counts.h2;
            else if (node.name == "h3") ++counts.h3;
            else if (node.name == "img") ++counts.img;
            else if (node.name == "table") ++counts.table;
            else if (node.name == "p") ++counts.p;
            else if (node.name == "iframe") ++counts.iframe;
            if (node.name == "script" || node.name == "style") return;
        }
        if (node.type == html::NodeType::Text && !all_ws(node.text)) ++counts.text_nodes;
        for (const auto& child : node.children) walk(*child);
    };
    walk(*doc.root);

    std::string text = collect_visible_text(*doc.root);
    counts.chars = scalar_count(text);

    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view line{text.data() + pos,
                              (eol == std::string::npos ? text.size() : eol) - pos};
        if (!all_ws(line)) ++counts.lines;
        if (eol == std::string::npos) break;
        pos = eol + 1;
    }

    bool in_word = false;
    for (char c : text) {
        if (is_ws(c)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++counts.words;
        }
    }

    counts.keywords_present = detect_keywords(text, keywords);
    return counts;
}

RawCounts count_features(std::string_view html_text) {
    return count_features(html_text, kKeywords);
}

namespace {

// Comparison key for url_change: lowercased scheme and host, default port
// dropped, trailing slash-only path difference ignored.
std::string url_change_key(const std::string& url) {
    std::optional<Url> parsed = parse_url(url);
    if (!parsed) return url;
    std::string path = parsed->path;
    if (path.size() > 1 && path.back() == '/') path.pop_back();
    std::string key = parsed->scheme + "://" + parsed->host;
    bool default_port = (parsed->scheme == "http" && parsed->port == "80") ||
                        (parsed->scheme == "https" && parsed->port == "443");
    if (!parsed->port.empty() && !default_port) key += ":" + parsed->port;
    key += path;
    if (!parsed->query.empty()) key += "?" + parsed->query;
    return key;
}

}  // namespace

FeatureVector diff_features(const CapturePair& pair,
                            const std::vector<std::string>& keywords) {
    if (pair.status != PairStatus::OK)
        throw ParameterError("diff_features needs an OK capture pair (site " +
                             pair.site.url + ")");

    RawCounts base = count_features(pair.baseline.html, keywords);
    RawCounts blocked = count_features(pair.blocked.html, keywords);

    FeatureVector vec;
    vec.site = normalize_host(pair.site.url);
    vec.diffs = {blocked.a - base.a,
                 blocked.div - base.div,
                 blocked.h1 - base.h1,
                 blocked.h2 - base.h2,
                 blocked.h3 - base.h3,
                 blocked.img - base.img,
                 blocked.table - base.table,
                 blocked.p - base.p,
                 blocked.iframe - base.iframe,
                 blocked.text_nodes - base.text_nodes,
                 blocked.tags_total - base.tags_total,
                 blocked.lines - base.lines,
                 blocked.words - base.words,
                 blocked.chars - base.chars};
    vec.keyword = blocked.keywords_present && !base.keywords_present;
    vec.url_change = url_change_key(pair.blocked.final_url) != url_change_key(pair.baseline.final_url);
    vec.label = Label::Unlabeled;
    return vec;
}

FeatureVector diff_features(const CapturePair& pair) {
    return diff_features(pair, kKeywords);
}

ExtractReport extract_corpus(const std::filesystem::path& snapshot_root,
                             const std::vector<std::string>& keywords) {
    std::error_code ec;
    if (!std::filesystem::is_directory(snapshot_root, ec))
        throw IoError("snapshot root is not a readable directory: " + snapshot_root.string());

    std::vector<std::string> hosts;
    for (const auto& entry : std::filesystem::directory_iterator(snapshot_root, ec)) {
        if (entry.is_directory()) hosts.push_back(entry.path().filename().string());
    }
    if (ec) throw IoError("cannot list snapshot root: " + ec.message());
    std::sort(hosts.begin(), hosts.end());

    ExtractReport report;
    report.dataset = LabeledDataset::with_default_schema();
    for (const std::string& host : hosts) {
        CapturePair pair;
        try {
            pair = load_pair(snapshot_root, host);
        } catch (const std::exception& e) {
            report.skips.push_back({host, e.what()});
            continue;
        }
        if (pair.status != PairStatus::OK) {
            report.skips.push_back(
                {host, pair.status == PairStatus::Dead ? "dead" : pair.failure_reason});
            continue;
        }
        report.dataset.rows.push_back(diff_features(pair, keywords));
    }
    return report;
}

ExtractReport extract_corpus(const std::filesystem::path& snapshot_root) {
    return extract_corpus(snapshot_root, kKeywords);
}

}  // namespace adbdiff
