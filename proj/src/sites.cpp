#include "adbdiff/sites.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <charconv>
#include <regex>
#include <set>
#include <sstream>

#include "adbdiff/errors.hpp"
#include "adbdiff/html.hpp"
#include "adbdiff/url.hpp"

namespace adbdiff {
namespace {

namespace pt = boost::property_tree;

// Element names arrive namespace-prefixed ("aws:Listing"); match on the
// local part so the prefix choice of the producer does not matter.
std::string_view local_name(std::string_view key) {
    size_t colon = key.rfind(':');
    return colon == std::string_view::npos ? key : key.substr(colon + 1);
}

void collect_listings(const pt::ptree& tree, std::vector<const pt::ptree*>& out) {
    for (const auto& [key, child] : tree) {
        if (key == "<xmlattr>" || key == "<xmltext>") continue;
        if (local_name(key) == "Listing") {
            out.push_back(&child);
        } else {
            collect_listings(child, out);
        }
    }
}

const pt::ptree* find_by_local_name(const pt::ptree& tree, std::string_view name) {
    for (const auto& [key, child] : tree) {
        if (key == "<xmlattr>" || key == "<xmltext>") continue;
        if (local_name(key) == name) return &child;
        if (const pt::ptree* found = find_by_local_name(child, name)) return found;
    }
    return nullptr;
}

std::string ensure_scheme(std::string url) {
    if (url.rfind("http://", 0) == 0 || url.rfind("https://", 0) == 0) return url;
    return "http://" + url;
}

int parse_rank(const std::string& text) {
    int rank = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), rank);
    if (ec != std::errc() || ptr != text.data() + text.size() || rank < 1)
        throw ParseError("bad PopularityRank value \"" + text + "\"");
    return rank;
}

std::string node_text(const html::Node& node) {
    std::string out;
    std::function<void(const html::Node&)> walk = [&](const html::Node& n) {
        if (n.type == html::NodeType::Text) out += n.text;
        for (const auto& child : n.children) walk(*child);
    };
    walk(node);
    return out;
}

std::string trim(std::string_view s) {
    size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return "";
    size_t end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

// File-extension finals that a bare domain regex would otherwise accept.
bool looks_like_filename(const std::string& token) {
    static const std::set<std::string> kExtensions = {
        "html", "htm", "php", "asp", "aspx", "jsp", "js", "css",
        "png", "jpg", "jpeg", "gif", "svg", "txt", "md", "json", "xml"};
    size_t dot = token.rfind('.');
    return dot != std::string::npos && kExtensions.count(token.substr(dot + 1)) > 0;
}

}  // namespace

std::string build_awis_request(const std::string& action, int count, int start,
                               const std::string& path, const std::string& sort_by) {
    if (count < 1 || count > 20)
        throw ParameterError("count must be in [1, 20], got " + std::to_string(count));
    if (start < 1) throw ParameterError("start must be >= 1, got " + std::to_string(start));
    std::ostringstream url;
    url << "https://awis.amazonaws.com/api?Action=" << action << "&Count=" << count
        << "&Descriptions=True&Path=" << path
        << "&Recursive=False&ResponseGroup=Listings&SortBy=" << sort_by << "&Start=" << start;
    return url.str();
}

std::vector<SiteRecord> parse_awis_xml(std::string_view xml) {
    pt::ptree tree;
    try {
        std::istringstream stream{std::string(xml)};
        pt::read_xml(stream, tree, pt::xml_parser::trim_whitespace);
    } catch (const pt::xml_parser_error& e) {
        throw ParseError(std::string("malformed XML: ") + e.message(), e.line());
    }

    const pt::ptree* status = find_by_local_name(tree, "StatusCode");
    if (!status) throw RemoteStatusError("(missing StatusCode)");
    std::string code = status->get_value<std::string>();
    if (code != "Success") throw RemoteStatusError(code);

    std::vector<const pt::ptree*> listings;
    collect_listings(tree, listings);

    std::vector<SiteRecord> records;
    records.reserve(listings.size());
    for (const pt::ptree* listing : listings) {
        const pt::ptree* data_url = find_by_local_name(*listing, "DataUrl");
        if (!data_url) throw ParseError("Listing without DataUrl");
        SiteRecord record;
        record.url = ensure_scheme(trim(data_url->get_value<std::string>()));
        if (const pt::ptree* title = find_by_local_name(*listing, "Title"))
            record.title = trim(title->get_value<std::string>());
        const pt::ptree* rank = find_by_local_name(*listing, "PopularityRank");
        if (!rank) throw ParseError("Listing without PopularityRank");
        record.rank = parse_rank(trim(rank->get_value<std::string>()));
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<SiteRecord> dedupe_union(const std::vector<std::vector<SiteRecord>>& lists) {
    std::vector<SiteRecord> out;
    std::set<std::string> seen;
    for (const auto& list : lists) {
        for (const auto& record : list) {
            if (seen.insert(normalize_host(record.url)).second) out.push_back(record);
        }
    }
    return out;
}

std::vector<SiteRecord> parse_issue_corpus(std::string_view page_html) {
    html::Document doc = html::parse(page_html);

    static const std::regex kDomainToken(
        R"((?:[A-Za-z0-9](?:[A-Za-z0-9-]{0,61}[A-Za-z0-9])?\.)+[A-Za-z]{2,24})");

    std::vector<SiteRecord> out;
    std::set<std::string> seen;
    html::for_each_element(*doc.root, [&](const html::Node& element) {
        if (element.name != "a" || !element.has_class("issue-title")) return true;
        std::string title = trim(node_text(element));
        auto begin = std::sregex_iterator(title.begin(), title.end(), kDomainToken);
        for (auto it = begin; it != std::sregex_iterator(); ++it) {
            // Skip email-address remainders and path-like tokens.
            size_t pos = static_cast<size_t>(it->position());
            if (pos > 0 && title[pos - 1] == '@') continue;
            std::string token = to_lower(it->str());
            if (looks_like_filename(token)) continue;
            std::string host = normalize_host(token);
            if (!seen.insert(host).second) continue;
            SiteRecord record;
            record.url = "http://" + token;
            record.title = title;
            record.rank = static_cast<int>(out.size()) + 1;
            record.source_tag = "positive-candidate";
            out.push_back(std::move(record));
        }
        return false;  // nested anchors never occur; skip the subtree
    });
    return out;
}

std::vector<SiteRecord> read_site_list(std::string_view text, const std::string& source_tag) {
    std::vector<SiteRecord> out;
    size_t pos = 0;
    long line_no = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view raw =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        ++line_no;
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        std::string url = ensure_scheme(line);
        if (!is_absolute_http(url))
            throw ParseError("not a site URL: \"" + line + "\"", line_no);
        SiteRecord record;
        record.url = std::move(url);
        record.rank = static_cast<int>(out.size()) + 1;
        record.source_tag = source_tag;
        out.push_back(std::move(record));
    }
    return out;
}

std::string write_site_list(const std::vector<SiteRecord>& sites) {
    std::string out;
    for (const auto& site : sites) {
        out += site.url;
        out += '\n';
    }
    return out;
}

}  // namespace adbdiff
