#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "adbdiff/capture.hpp"
#include "adbdiff/dataset.hpp"

namespace adbdiff {

// Per-variant counts: nine named tags, all-element total, text-node count,
// and line/word/character statistics over visible text.
struct RawCounts {
    long long a = 0, div = 0, h1 = 0, h2 = 0, h3 = 0;
    long long img = 0, table = 0, p = 0, iframe = 0;
    long long text_nodes = 0;
    long long tags_total = 0;
    long long lines = 0, words = 0, chars = 0;
    bool keywords_present = false;

    bool operator==(const RawCounts&) const = default;
};

// Visible text: every text node with at least one non-whitespace character,
// outside script/style, joined by newlines. noscript content counts — that
// is where anti-adblock walls tend to live.
std::string visible_text(std::string_view html);

// The built-in anti-adblock vocabulary: adblocker, adblock, "ad block",
// ad-block, whitelist, block-adblock, pagefair, fuckadblock. Every keyword
// taker below accepts a replacement list (config key `keywords`).
const std::vector<std::string>& default_keywords();

// True iff the lowercased text contains any keyword as a substring.
bool detect_keywords(std::string_view text);
bool detect_keywords(std::string_view text, const std::vector<std::string>& keywords);

RawCounts count_features(std::string_view html);
RawCounts count_features(std::string_view html, const std::vector<std::string>& keywords);

// blocked − baseline for every count; keyword = present in blocked AND
// absent in baseline (pages about ad blocking stay quiet); url_change
// compares normalized final URLs. Requires an OK pair.
FeatureVector diff_features(const CapturePair& pair);
FeatureVector diff_features(const CapturePair& pair, const std::vector<std::string>& keywords);

struct SkipEntry {
    std::string host;
    std::string reason;
};

struct ExtractReport {
    LabeledDataset dataset;          // one row per OK pair, ordered by host
    std::vector<SkipEntry> skips;    // non-OK / unloadable pairs
};

ExtractReport extract_corpus(const std::filesystem::path& snapshot_root);
ExtractReport extract_corpus(const std::filesystem::path& snapshot_root,
                             const std::vector<std::string>& keywords);

}  // namespace adbdiff
