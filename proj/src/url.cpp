#include "adbdiff/url.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>
#include <vector>

namespace adbdiff {

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string Url::origin() const {
    std::string out = scheme + "://" + host;
    if (!port.empty()) out += ":" + port;
    return out;
}

std::string Url::str() const {
    std::string out = origin() + path;
    if (!query.empty()) out += "?" + query;
    return out;
}

std::optional<Url> parse_url(std::string_view text) {
    auto scheme_end = text.find("://");
    if (scheme_end == std::string_view::npos || scheme_end == 0) return std::nullopt;
    Url url;
    url.scheme = to_lower(text.substr(0, scheme_end));
    for (char c : url.scheme) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.')
            return std::nullopt;
    }
    std::string_view rest = text.substr(scheme_end + 3);

    auto fragment = rest.find('#');
    if (fragment != std::string_view::npos) rest = rest.substr(0, fragment);

    auto authority_end = rest.find_first_of("/?");
    std::string_view authority = rest.substr(0, authority_end);
    if (auto at = authority.rfind('@'); at != std::string_view::npos)
        authority = authority.substr(at + 1);
    if (authority.empty()) return std::nullopt;

    auto colon = authority.rfind(':');
    if (colon != std::string_view::npos &&
        authority.find_first_not_of("0123456789", colon + 1) == std::string_view::npos) {
        url.host = to_lower(authority.substr(0, colon));
        url.port = std::string(authority.substr(colon + 1));
    } else {
        url.host = to_lower(authority);
    }
    if (url.host.empty()) return std::nullopt;

    if (authority_end == std::string_view::npos) {
        url.path = "/";
    } else {
        std::string_view tail = rest.substr(authority_end);
        auto q = tail.find('?');
        if (q == std::string_view::npos) {
            url.path = std::string(tail);
        } else {
            url.path = std::string(tail.substr(0, q));
            url.query = std::string(tail.substr(q + 1));
        }
        if (url.path.empty()) url.path = "/";
    }
    return url;
}

bool is_absolute_http(std::string_view text) {
    auto url = parse_url(text);
    return url && (url->scheme == "http" || url->scheme == "https");
}

std::string normalize_host(std::string_view url_or_host) {
    std::string host;
    if (auto url = parse_url(url_or_host)) {
        host = url->host;
    } else {
        // Bare host, possibly with a path or port glued on.
        std::string_view h = url_or_host;
        if (auto slash = h.find('/'); slash != std::string_view::npos) h = h.substr(0, slash);
        if (auto colon = h.find(':'); colon != std::string_view::npos) h = h.substr(0, colon);
        host = to_lower(h);
    }
    if (host.rfind("www.", 0) == 0) host = host.substr(4);
    return host;
}

namespace {

// Static public-suffix snapshot. Deliberately a snapshot, not a live list:
// registrable-domain decisions must be reproducible across runs.
const std::unordered_set<std::string>& suffix_snapshot() {
    static const std::unordered_set<std::string> suffixes = {
        "com", "org", "net", "edu", "gov", "mil", "int", "info", "biz", "name",
        "io", "co", "me", "tv", "cc", "ws", "mobi", "app", "dev", "xyz",
        "online", "site", "news", "blog", "shop", "cloud",
        "de", "at", "ch", "li", "uk", "fr", "it", "nl", "be", "lu", "es", "pt",
        "pl", "cz", "sk", "hu", "ro", "bg", "gr", "se", "no", "fi", "dk", "ie",
        "is", "ee", "lv", "lt", "ru", "ua", "tr", "us", "ca", "mx", "br", "ar",
        "cl", "au", "nz", "jp", "kr", "cn", "tw", "hk", "sg", "in", "id", "th",
        "vn", "my", "ph", "il", "sa", "ae", "za", "eu",
        "co.uk", "org.uk", "me.uk", "net.uk", "ac.uk", "gov.uk",
        "com.au", "net.au", "org.au", "edu.au", "gov.au",
        "co.nz", "org.nz", "net.nz",
        "co.jp", "or.jp", "ne.jp", "ac.jp", "go.jp",
        "com.br", "net.br", "org.br",
        "com.mx", "com.ar", "com.tr", "com.cn", "com.hk", "com.sg", "com.tw",
        "co.in", "co.kr", "co.za", "co.il", "co.th", "co.id",
        "com.my", "com.ph", "com.vn", "com.sa", "com.ua",
        "gv.at", "ac.at", "co.at", "or.at",
    };
    return suffixes;
}

}  // namespace

std::string registrable_domain(std::string_view host_in) {
    std::string host = to_lower(host_in);
    while (!host.empty() && host.back() == '.') host.pop_back();
    if (host.find('.') == std::string::npos) return host;

    std::vector<size_t> label_starts{0};
    for (size_t i = 0; i < host.size(); ++i)
        if (host[i] == '.') label_starts.push_back(i + 1);

    // Longest matching suffix wins; the registrable domain is one more label.
    const auto& suffixes = suffix_snapshot();
    for (size_t i = 0; i < label_starts.size(); ++i) {
        if (suffixes.contains(host.substr(label_starts[i]))) {
            if (i == 0) return host;  // the host itself is a public suffix
            return host.substr(label_starts[i - 1]);
        }
    }
    // No known suffix: fall back to the last two labels.
    return host.substr(label_starts[label_starts.size() - 2]);
}

std::string resolve_reference(const Url& base, std::string_view ref) {
    if (ref.empty()) return base.str();
    if (ref.find("://") != std::string_view::npos) return std::string(ref);
    if (ref.rfind("//", 0) == 0) return base.scheme + ":" + std::string(ref);
    if (ref[0] == '/') return base.origin() + std::string(ref);
    if (ref[0] == '?') return base.origin() + base.path + std::string(ref);
    std::string dir = base.path;
    auto slash = dir.rfind('/');
    dir = (slash == std::string::npos) ? "/" : dir.substr(0, slash + 1);
    return base.origin() + dir + std::string(ref);
}

}  // namespace adbdiff
