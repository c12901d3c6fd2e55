#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace adbdiff {

enum class Liveness { Unknown, Alive, Dead };

struct SiteRecord {
    std::string url;    // absolute http(s) URL
    std::string title;  // may be empty
    int rank = 1;       // popularity rank, >= 1
    std::string source_tag;
    Liveness alive = Liveness::Unknown;
};

// Query URL for a category-listings request, parameters in the service's
// canonical order. No authorization material is produced; offline use only.
// count must be in [1, 20] (the service pages 20 results per request),
// start must be >= 1.
std::string build_awis_request(const std::string& action, int count, int start,
                               const std::string& path, const std::string& sort_by);

// One SiteRecord per <aws:Listing>, document order. Throws ParseError on
// malformed XML and RemoteStatusError when the response status is not
// "Success".
std::vector<SiteRecord> parse_awis_xml(std::string_view xml);

// Union of several ranked lists, unique by normalized host, first occurrence
// wins, first-seen order preserved.
std::vector<SiteRecord> dedupe_union(const std::vector<std::vector<SiteRecord>>& lists);

// Extracts candidate domains from the issue titles of a saved issue-tracker
// listing page (anchors carrying class "issue-title"; see
// fixtures/README.md for the exact fixture format). Candidates are tagged
// "positive-candidate" and are meant for manual confirmation, never
// auto-labeling. Deduplicated by host; a page without domain-shaped tokens
// yields an empty list.
std::vector<SiteRecord> parse_issue_corpus(std::string_view page_html);

// Site-list file: one URL per line, '#' comments and blank lines ignored.
// Bare hosts get an http:// scheme. rank is the 1-based position in file.
std::vector<SiteRecord> read_site_list(std::string_view text, const std::string& source_tag);
std::string write_site_list(const std::vector<SiteRecord>& sites);

}  // namespace adbdiff
