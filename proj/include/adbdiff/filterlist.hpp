#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adbdiff/url.hpp"

namespace adbdiff {

enum class RuleKind { NetworkBlock, NetworkException, ElementHide, Comment };

enum class ResourceType { Script, Image, Frame, Other };

struct FilterRule {
    RuleKind kind = RuleKind::Comment;
    std::string pattern;  // rule text minus kind markers, anchors and options
    bool anchored_domain = false;  // leading "||"
    bool anchor_start = false;     // leading "|"
    bool anchor_end = false;       // trailing "|"
    std::vector<std::string> options;  // "$..." tokens, verbatim, parse order
    std::string selector;              // ElementHide only, text after "##"
    long source_line = 0;              // 1-based
    // Set on lines that parse but cannot participate in matching: unsupported
    // rule families (#@#, #$#, ...), element hiding with a domain prefix, or
    // selectors outside the tag/.class/#id subset.
    bool diagnostic = false;

    bool operator==(const FilterRule&) const = default;
};

struct FilterSection {
    std::string title;  // banner text between the dash runs
    long start_line = 0;
    long end_line = 0;

    bool operator==(const FilterSection&) const = default;
};

struct FilterList {
    std::vector<FilterRule> rules;        // source order
    std::vector<FilterSection> sections;  // from "!---" banner comments

    bool operator==(const FilterList&) const = default;
};

struct BlockDecision {
    bool blocked = false;
    std::optional<FilterRule> deciding_rule;
};

struct HidingResult {
    std::string html;
    int removed = 0;
};

// Every non-empty line becomes exactly one rule; nothing is dropped and
// nothing throws. Unsupported lines come back as Comment rules with the
// diagnostic flag set.
FilterList parse_filter_list(std::string_view text);

// Drops the blocking rules of every "!---" banner section whose title names
// anti-adblock (case-insensitive "anti adblock" / "anti-adblock" /
// "anti ad-block"), plus any rules between a standalone anti-adblock marker
// comment and the next comment. Comments, including the markers themselves,
// survive; idempotent.
FilterList strip_antiadblock(const FilterList& list);

// True blocking decision for one resource fetch. Exceptions always win; a
// rule whose options include anything outside the supported subset
// (third-party, script, image, subdocument, single un-negated domain=)
// never matches.
BlockDecision match_url(const FilterList& list, std::string_view url,
                        std::string_view doc_host, ResourceType resource_type);

// Removes every subtree matched by an applicable ElementHide selector and
// re-serializes. `removed` counts deleted elements, subtrees included.
HidingResult apply_element_hiding(std::string_view html, const FilterList& list);

// Offline stand-in for a blocking browser profile: element hiding first,
// then script/img/iframe elements whose resolved src would be blocked are
// removed. Scripts are not executed.
std::string simulate_blocking(std::string_view html, const Url& base_url,
                              const FilterList& list);

}  // namespace adbdiff
