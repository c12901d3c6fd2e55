#include "doctest.h"

#include <string>
#include <vector>

#include "adbdiff/errors.hpp"
#include "adbdiff/sites.hpp"
#include "adbdiff/url.hpp"

#include "helpers.hpp"

using namespace adbdiff;

TEST_CASE("category-listings request carries parameters in canonical order") {
    std::string url = build_awis_request("CategoryListings", 20, 1, "Top/Regional", "Popularity");
    CHECK(url ==
          "https://awis.amazonaws.com/api?Action=CategoryListings&Count=20&Descriptions=True"
          "&Path=Top/Regional&Recursive=False&ResponseGroup=Listings&SortBy=Popularity&Start=1");
    CHECK_THROWS_AS(build_awis_request("CategoryListings", 0, 1, "Top", "Popularity"),
                    ParameterError);
    CHECK_THROWS_AS(build_awis_request("CategoryListings", 21, 1, "Top", "Popularity"),
                    ParameterError);
    CHECK_THROWS_AS(build_awis_request("CategoryListings", 5, 0, "Top", "Popularity"),
                    ParameterError);
}

TEST_CASE("listing XML yields one record per listing in document order") {
    std::vector<SiteRecord> records = parse_awis_xml(testing::fixture_text("awis_listing2.xml"));
    REQUIRE(records.size() == 2);
    CHECK(normalize_host(records[0].url) == "reddit.com");
    CHECK(records[0].title == "Reddit.com");
    CHECK(records[0].rank == 2);
    CHECK(normalize_host(records[1].url) == "cnn.com");
    CHECK(records[1].title == "CNN");
    CHECK(records[1].rank == 3);
}

TEST_CASE("listing XML failures are loud") {
    CHECK_THROWS_AS(parse_awis_xml("<broken"), ParseError);

    std::string failed = testing::fixture_text("awis_listing2.xml");
    size_t pos = failed.find("Success");
    failed.replace(pos, 7, "AccessDenied");
    CHECK_THROWS_AS(parse_awis_xml(failed), RemoteStatusError);
}

TEST_CASE("dedupe_union keeps the first record per normalized host") {
    std::vector<SiteRecord> a = {{"http://www.example.com/", "first", 1, "l1", Liveness::Unknown},
                                 {"http://news.example.org/", "", 2, "l1", Liveness::Unknown}};
    std::vector<SiteRecord> b = {{"https://example.com", "second", 1, "l2", Liveness::Unknown},
                                 {"http://other.example/", "", 2, "l2", Liveness::Unknown}};
    std::vector<SiteRecord> merged = dedupe_union({a, b});
    REQUIRE(merged.size() == 3);
    CHECK(merged[0].title == "first");
    CHECK(merged[1].url == "http://news.example.org/");
    CHECK(merged[2].url == "http://other.example/");
}

TEST_CASE("dedupe_union is idempotent") {
    std::vector<SiteRecord> a = {{"http://a.example/", "", 1, "t", Liveness::Unknown},
                                 {"http://b.example/", "", 2, "t", Liveness::Unknown}};
    std::vector<SiteRecord> once = dedupe_union({a, a});
    std::vector<SiteRecord> twice = dedupe_union({once, once});
    REQUIRE(once.size() == a.size());
    REQUIRE(twice.size() == once.size());
    for (size_t i = 0; i < once.size(); ++i) CHECK(twice[i].url == once[i].url);
}

TEST_CASE("issue corpus extraction dedupes and skips non-domains") {
    std::vector<SiteRecord> sites =
        parse_issue_corpus(testing::fixture_text("issue_corpus.html"));
    REQUIRE(sites.size() == 4);
    CHECK(normalize_host(sites[0].url) == "example-news.de");
    CHECK(sites[0].rank == 1);
    CHECK(sites[0].source_tag == "positive-candidate");
    CHECK(normalize_host(sites[1].url) == "spiegel.de");
    CHECK(normalize_host(sites[2].url) == "krone.at");
    CHECK(normalize_host(sites[3].url) == "blick.ch");
    CHECK(sites[3].rank == 4);
}

TEST_CASE("issue corpus without domain-shaped tokens is empty") {
    CHECK(parse_issue_corpus("<html><body><p>nothing here</p></body></html>").empty());
}

TEST_CASE("site-list files round-trip with comments ignored") {
    std::string text = "# top sites\nexample.com\n\nhttps://news.example.org/front\n";
    std::vector<SiteRecord> sites = read_site_list(text, "regional");
    REQUIRE(sites.size() == 2);
    CHECK(sites[0].url == "http://example.com");
    CHECK(sites[0].rank == 1);
    CHECK(sites[0].source_tag == "regional");
    CHECK(sites[1].url == "https://news.example.org/front");
    CHECK(sites[1].rank == 2);

    std::string written = write_site_list(sites);
    std::vector<SiteRecord> again = read_site_list(written, "regional");
    REQUIRE(again.size() == sites.size());
    for (size_t i = 0; i < sites.size(); ++i) CHECK(again[i].url == sites[i].url);
}

TEST_CASE("site-list rejects lines that cannot become URLs") {
    CHECK_THROWS_AS(read_site_list("/just-a-path", "t"), ParseError);
}
