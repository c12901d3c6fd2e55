#include "adbdiff/filterlist.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include "adbdiff/errors.hpp"
#include "adbdiff/html.hpp"

namespace adbdiff {
namespace {

constexpr std::array<std::string_view, 3> kAntiAdblockMarkers = {
    "anti adblock", "anti-adblock", "anti ad-block"};

bool names_antiadblock(std::string_view text) {
    std::string lower = to_lower(text);
    return std::any_of(kAntiAdblockMarkers.begin(), kAntiAdblockMarkers.end(),
                       [&](std::string_view marker) { return lower.find(marker) != std::string::npos; });
}

bool is_banner(const FilterRule& rule) {
    return rule.kind == RuleKind::Comment && rule.pattern.rfind("---", 0) == 0;
}

std::string banner_title(std::string_view comment_text) {
    size_t begin = comment_text.find_first_not_of("-! \t");
    if (begin == std::string_view::npos) return "";
    size_t end = comment_text.find_last_not_of("-! \t");
    return std::string(comment_text.substr(begin, end - begin + 1));
}

std::string trim(std::string_view s) {
    size_t begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) return "";
    size_t end = s.find_last_not_of(" \t\r");
    return std::string(s.substr(begin, end - begin + 1));
}

bool valid_option_suffix(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '~' || c == '_' || c == '=' || c == ',' || c == '.' ||
               c == '|' || c == '-';
    });
}

std::vector<std::string> split_options(std::string_view s) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t comma = s.find(',', pos);
        if (comma == std::string_view::npos) {
            out.emplace_back(s.substr(pos));
            break;
        }
        out.emplace_back(s.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return out;
}

FilterRule parse_line(std::string_view line, long line_no) {
    FilterRule rule;
    rule.source_line = line_no;

    if (line[0] == '!') {
        rule.kind = RuleKind::Comment;
        rule.pattern = std::string(line.substr(1));
        return rule;
    }

    // `[Adblock Plus 2.0]` style header line.
    if (line.front() == '[' && line.back() == ']') {
        rule.kind = RuleKind::Comment;
        rule.pattern = std::string(line);
        rule.diagnostic = true;
        return rule;
    }

    // Rule families outside scope: exception hiding, CSS injection,
    // scriptlets, extended-selector hiding.
    for (std::string_view marker : {"#@#", "#$#", "#%#", "#?#"}) {
        if (line.find(marker) != std::string_view::npos) {
            rule.kind = RuleKind::Comment;
            rule.pattern = std::string(line);
            rule.diagnostic = true;
            return rule;
        }
    }

    if (size_t hide = line.find("##"); hide != std::string_view::npos) {
        rule.kind = RuleKind::ElementHide;
        rule.selector = std::string(line.substr(hide + 2));
        if (rule.selector.empty()) {
            rule.kind = RuleKind::Comment;
            rule.pattern = std::string(line);
            rule.diagnostic = true;
            return rule;
        }
        if (hide > 0) {
            // Domain-limited hiding needs a document host, which
            // apply_element_hiding does not take; parsed but never applied.
            rule.pattern = std::string(line.substr(0, hide));
            rule.diagnostic = true;
            return rule;
        }
        rule.diagnostic = !html::parse_selector(rule.selector).supported;
        return rule;
    }

    std::string_view rest = line;
    if (rest.rfind("@@", 0) == 0) {
        rule.kind = RuleKind::NetworkException;
        rest.remove_prefix(2);
    } else {
        rule.kind = RuleKind::NetworkBlock;
    }

    if (size_t dollar = rest.rfind('$');
        dollar != std::string_view::npos && valid_option_suffix(rest.substr(dollar + 1))) {
        rule.options = split_options(rest.substr(dollar + 1));
        rest = rest.substr(0, dollar);
    }

    if (rest.rfind("||", 0) == 0) {
        rule.anchored_domain = true;
        rest.remove_prefix(2);
    } else if (!rest.empty() && rest.front() == '|') {
        rule.anchor_start = true;
        rest.remove_prefix(1);
    }
    if (!rest.empty() && rest.back() == '|') {
        rule.anchor_end = true;
        rest.remove_suffix(1);
    }
    rule.pattern = std::string(rest);
    return rule;
}

bool is_separator(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return !(std::isalnum(u) || c == '_' || c == '-' || c == '.' || c == '%');
}

// Backtracking matcher for the pattern language: '*' spans anything, '^'
// consumes one separator character or matches end-of-string.
bool match_here(std::string_view pat, std::string_view text, size_t pi, size_t ti,
                bool anchor_end) {
    if (pi == pat.size()) return !anchor_end || ti == text.size();
    if (pat[pi] == '*') {
        for (size_t skip = ti; skip <= text.size(); ++skip)
            if (match_here(pat, text, pi + 1, skip, anchor_end)) return true;
        return false;
    }
    if (pat[pi] == '^') {
        if (ti == text.size()) return match_here(pat, text, pi + 1, ti, anchor_end);
        return is_separator(text[ti]) && match_here(pat, text, pi + 1, ti + 1, anchor_end);
    }
    return ti < text.size() && text[ti] == pat[pi] &&
           match_here(pat, text, pi + 1, ti + 1, anchor_end);
}

bool host_matches_domain_option(std::string_view doc_host, std::string_view domain) {
    std::string host = normalize_host(doc_host);
    std::string want = normalize_host(domain);
    if (host == want) return true;
    return host.size() > want.size() && host.ends_with(want) &&
           host[host.size() - want.size() - 1] == '.';
}

// Applies the supported option subset. Returns false when any option keeps
// this rule from matching the request — including options outside the
// subset, which make the rule inapplicable rather than mis-blocking.
bool options_allow(const FilterRule& rule, const Url& url, std::string_view doc_host,
                   ResourceType resource_type) {
    bool type_restricted = false;
    bool type_matched = false;
    for (const std::string& opt : rule.options) {
        if (opt == "third-party") {
            if (registrable_domain(url.host) == registrable_domain(normalize_host(doc_host)))
                return false;
        } else if (opt == "script" || opt == "image" || opt == "subdocument") {
            type_restricted = true;
            type_matched |= (opt == "script" && resource_type == ResourceType::Script) ||
                            (opt == "image" && resource_type == ResourceType::Image) ||
                            (opt == "subdocument" && resource_type == ResourceType::Frame);
        } else if (opt.rfind("domain=", 0) == 0) {
            std::string_view value = std::string_view(opt).substr(7);
            if (value.empty() || value.find('|') != std::string_view::npos ||
                value.find('~') != std::string_view::npos)
                return false;
            if (!host_matches_domain_option(doc_host, value)) return false;
        } else {
            return false;
        }
    }
    return !type_restricted || type_matched;
}

bool rule_matches(const FilterRule& rule, std::string_view url_lower, const Url& url,
                  std::string_view doc_host, ResourceType resource_type) {
    if (rule.kind != RuleKind::NetworkBlock && rule.kind != RuleKind::NetworkException)
        return false;
    if (!options_allow(rule, url, doc_host, resource_type)) return false;

    std::string pat = to_lower(rule.pattern);
    if (rule.anchor_start) return match_here(pat, url_lower, 0, 0, rule.anchor_end);
    if (rule.anchored_domain) {
        size_t scheme_end = url_lower.find("://");
        if (scheme_end == std::string_view::npos) return false;
        size_t host_begin = scheme_end + 3;
        size_t host_end = url_lower.find_first_of("/?:", host_begin);
        if (host_end == std::string_view::npos) host_end = url_lower.size();
        for (size_t start = host_begin; start < host_end;) {
            if (match_here(pat, url_lower, 0, start, rule.anchor_end)) return true;
            size_t dot = url_lower.find('.', start);
            if (dot == std::string_view::npos || dot >= host_end) break;
            start = dot + 1;
        }
        return false;
    }
    for (size_t start = 0; start <= url_lower.size(); ++start)
        if (match_here(pat, url_lower, 0, start, rule.anchor_end)) return true;
    return false;
}

void hide_in_document(html::Document& doc, const FilterList& list, int& removed) {
    for (const FilterRule& rule : list.rules) {
        if (rule.kind != RuleKind::ElementHide || rule.diagnostic) continue;
        html::Selector selector = html::parse_selector(rule.selector);
        if (!selector.supported) continue;
        removed += html::remove_matching(doc, selector);
    }
}

}  // namespace

FilterList parse_filter_list(std::string_view text) {
    FilterList list;
    size_t pos = 0;
    long line_no = 0;
    long last_content_line = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view raw =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        ++line_no;
        bool final_chunk = eol == std::string_view::npos;
        pos = final_chunk ? text.size() + 1 : eol + 1;
        if (final_chunk && raw.empty()) break;

        std::string line = trim(raw);
        if (line.empty()) continue;
        last_content_line = line_no;
        list.rules.push_back(parse_line(line, line_no));
    }

    for (const FilterRule& rule : list.rules) {
        if (!is_banner(rule)) continue;
        if (!list.sections.empty()) list.sections.back().end_line = rule.source_line - 1;
        list.sections.push_back({banner_title(rule.pattern), rule.source_line, 0});
    }
    if (!list.sections.empty()) list.sections.back().end_line = last_content_line;
    return list;
}

FilterList strip_antiadblock(const FilterList& list) {
    std::vector<std::pair<long, long>> strip_ranges;
    for (const FilterSection& section : list.sections)
        if (names_antiadblock(section.title))
            strip_ranges.emplace_back(section.start_line, section.end_line);

    FilterList out;
    out.sections = list.sections;
    bool after_marker = false;
    for (const FilterRule& rule : list.rules) {
        if (rule.kind == RuleKind::Comment) {
            after_marker = !is_banner(rule) && names_antiadblock(rule.pattern);
            out.rules.push_back(rule);
            continue;
        }
        if (after_marker) continue;
        bool in_section =
            std::any_of(strip_ranges.begin(), strip_ranges.end(), [&](const auto& range) {
                return rule.source_line >= range.first && rule.source_line <= range.second;
            });
        if (in_section) continue;
        out.rules.push_back(rule);
    }
    return out;
}

BlockDecision match_url(const FilterList& list, std::string_view url,
                        std::string_view doc_host, ResourceType resource_type) {
    std::optional<Url> parsed = parse_url(url);
    if (!parsed || !is_absolute_http(url))
        throw ParameterError("match_url needs an absolute http(s) URL, got \"" +
                             std::string(url) + "\"");
    std::string url_lower = to_lower(url);

    const FilterRule* block = nullptr;
    for (const FilterRule& rule : list.rules) {
        if (rule.kind != RuleKind::NetworkBlock) continue;
        if (rule_matches(rule, url_lower, *parsed, doc_host, resource_type)) {
            block = &rule;
            break;
        }
    }
    if (!block) return {};

    for (const FilterRule& rule : list.rules) {
        if (rule.kind != RuleKind::NetworkException) continue;
        if (rule_matches(rule, url_lower, *parsed, doc_host, resource_type))
            return {false, rule};
    }
    return {true, *block};
}

HidingResult apply_element_hiding(std::string_view html_text, const FilterList& list) {
    html::Document doc = html::parse(html_text);
    HidingResult result;
    hide_in_document(doc, list, result.removed);
    result.html = html::serialize(doc);
    return result;
}

std::string simulate_blocking(std::string_view html_text, const Url& base_url,
                              const FilterList& list) {
    html::Document doc = html::parse(html_text);
    int removed = 0;
    hide_in_document(doc, list, removed);

    std::function<void(html::Node&)> prune = [&](html::Node& node) {
        for (auto it = node.children.begin(); it != node.children.end();) {
            html::Node& child = **it;
            bool drop = false;
            if (child.type == html::NodeType::Element &&
                (child.name == "script" || child.name == "img" || child.name == "iframe")) {
                ResourceType type = child.name == "script" ? ResourceType::Script
                                    : child.name == "img"  ? ResourceType::Image
                                                           : ResourceType::Frame;
                if (const std::string* src = child.attr("src")) {
                    std::string resolved = resolve_reference(base_url, *src);
                    if (is_absolute_http(resolved))
                        drop = match_url(list, resolved, base_url.host, type).blocked;
                }
            }
            if (drop) {
                it = node.children.erase(it);
            } else {
                prune(child);
                ++it;
            }
        }
    };
    prune(*doc.root);
    return html::serialize(doc);
}

}  // namespace adbdiff
