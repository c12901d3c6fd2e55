#include "doctest.h"

#include <string>
#include <vector>

#include "adbdiff/config.hpp"
#include "adbdiff/errors.hpp"

#include "helpers.hpp"

using namespace adbdiff;
using config::Config;

TEST_CASE("the shipped example config parses with every key recognized") {
    Config cfg = config::parse_config(testing::fixture_text("config_example.conf"));
    CHECK(cfg.values.size() == config::known_keys().size());
    for (const std::string& key : config::known_keys()) {
        INFO("key " << key);
        CHECK(cfg.has(key));
    }

    CHECK(cfg.get("baseline_driver", "") == "http://127.0.0.1:9515");
    CHECK(cfg.get("blocked_driver", "") == "http://127.0.0.1:9516");
    CHECK(cfg.get_int("settle_delay_ms", 0) == 5000);
    CHECK(cfg.get_int("liveness_timeout_ms", 0) == 30000);
    CHECK(cfg.get_int("parallelism", 0) == 4);
    CHECK(cfg.get_int("seed", 0) == 1);
    CHECK(cfg.get("filter_list", "") == "fixtures/easylist_excerpt.txt");
    CHECK(cfg.get_double("invisibility_threshold", 0.0) == doctest::Approx(0.30));
    CHECK(cfg.get_double("availability_threshold", 0.0) == doctest::Approx(0.80));

    std::vector<std::string> keywords = cfg.get_list("keywords");
    REQUIRE(keywords.size() == 8);
    CHECK(keywords.front() == "adblocker");
    CHECK(keywords.back() == "fuckadblock");
}

TEST_CASE("quotes around values are stripped, spacing is forgiven") {
    Config cfg = config::parse_config(
        "  seed=42\n"
        "filter_list = \" lists/main.txt \"\n"
        "\n"
        "# trailing comment\n");
    CHECK(cfg.get_int("seed", 0) == 42);
    CHECK(cfg.get("filter_list", "") == " lists/main.txt ");
}

TEST_CASE("typos and duplicates fail loudly with the offending line") {
    try {
        config::parse_config("seed = 1\nsede = 2\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("unknown config key 'sede'") != std::string::npos);
    }

    try {
        config::parse_config("seed = 1\n# fine\nseed = 2\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("duplicate config key 'seed'") != std::string::npos);
    }

    try {
        config::parse_config("parallelism\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(std::string(e.what()).find("expected key = value") != std::string::npos);
    }

    CHECK_THROWS_AS(config::parse_config("= 5\n"), ParseError);
}

TEST_CASE("numeric getters validate their values and name the key") {
    Config cfg = config::parse_config("parallelism = four\ninvisibility_threshold = x.3\n");
    try {
        cfg.get_int("parallelism", 1);
        FAIL("expected ParameterError");
    } catch (const ParameterError& e) {
        CHECK(std::string(e.what()).find("parallelism") != std::string::npos);
        CHECK(std::string(e.what()).find("four") != std::string::npos);
    }
    CHECK_THROWS_AS(cfg.get_double("invisibility_threshold", 0.0), ParameterError);

    CHECK(cfg.get_int("seed", 77) == 77);
    CHECK(cfg.get_double("availability_threshold", 0.5) == doctest::Approx(0.5));
    CHECK(cfg.get("missing", "fallback") == "fallback");
    CHECK(cfg.get_list("keywords").empty());
}

TEST_CASE("keyword lists split on commas and trim each entry") {
    Config cfg = config::parse_config("keywords = one, two ,  three words , ,four\n");
    std::vector<std::string> items = cfg.get_list("keywords");
    REQUIRE(items.size() == 4);
    CHECK(items[0] == "one");
    CHECK(items[1] == "two");
    CHECK(items[2] == "three words");
    CHECK(items[3] == "four");
}
