#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace adbdiff {

// Minimal URL split, enough for host extraction, relative-src resolution and
// the filter engine. No percent-decoding is performed.
struct Url {
    std::string scheme;  // lowercased, without "://"
    std::string host;    // lowercased, no port
    std::string port;    // digits only, may be empty
    std::string path;    // starts with '/' when present, else "/"
    std::string query;   // without '?'

    std::string origin() const;  // scheme://host[:port]
    std::string str() const;
};

std::optional<Url> parse_url(std::string_view text);

bool is_absolute_http(std::string_view text);

// Canonical host key used for dedup, snapshot directories and vector sites:
// take the URL's host (or the input itself when it has no scheme), lowercase
// it and strip one leading "www.". Trailing slashes disappear with the path.
std::string normalize_host(std::string_view url_or_host);

// Registrable domain ("example.co.uk" for "a.b.example.co.uk") computed from
// a static public-suffix snapshot bundled in the library. Falls back to the
// last two labels when no suffix matches; single-label hosts map to
// themselves.
std::string registrable_domain(std::string_view host);

// Resolve a possibly relative reference against a base URL. Handles
// absolute URLs, scheme-relative ("//host/x"), root-relative ("/x") and
// path-relative references.
std::string resolve_reference(const Url& base, std::string_view ref);

std::string to_lower(std::string_view s);

}  // namespace adbdiff
