#include "doctest.h"

#include <atomic>
#include <mutex>
#include <chrono>
#include <optional>
#include <string>
#include <thread>

#include "httplib.h"

#include "adbdiff/capture.hpp"
#include "adbdiff/errors.hpp"
#include "adbdiff/filterlist.hpp"
#include "adbdiff/webdriver.hpp"

#include "helpers.hpp"

using namespace adbdiff;
using namespace std::chrono_literals;

namespace {

// In-process WebDriver endpoint speaking just enough of the wire protocol
// for the capture path: one fixed session, canned page and screenshot.
struct FakeDriver {
    httplib::Server server;
    int port = 0;
    std::thread thread;
    std::atomic<int> deletes{0};
    std::atomic<int> navigations{0};
    std::mutex mu;
    std::string new_session_body_;
    std::string final_url;
    std::string page_html = "<html><body><p>landed content</p></body></html>";
    std::atomic<bool> fail_sessions{false};

    std::string new_session_body() {
        std::lock_guard<std::mutex> lock(mu);
        return new_session_body_;
    }

    FakeDriver() {
        server.Post("/session", [this](const httplib::Request& req, httplib::Response& res) {
            {
                std::lock_guard<std::mutex> lock(mu);
                new_session_body_ = req.body;
            }
            if (fail_sessions) {
                res.status = 500;
                res.set_content(
                    R"({"value":{"error":"session not created","message":"boom"}})",
                    "application/json");
                return;
            }
            res.set_content(R"({"value":{"sessionId":"fake-1","capabilities":{}}})",
                            "application/json");
        });
        server.Post("/session/fake-1/url",
                    [this](const httplib::Request&, httplib::Response& res) {
                        ++navigations;
                        res.set_content(R"({"value":null})", "application/json");
                    });
        server.Get("/session/fake-1/url",
                   [this](const httplib::Request&, httplib::Response& res) {
                       res.set_content("{\"value\":\"" + final_url + "\"}", "application/json");
                   });
        server.Get("/session/fake-1/source",
                   [this](const httplib::Request&, httplib::Response& res) {
                       res.set_content("{\"value\":\"" + page_html + "\"}", "application/json");
                   });
        server.Get("/session/fake-1/screenshot",
                   [](const httplib::Request&, httplib::Response& res) {
                       // base64 of the bytes "PNGDATA123"
                       res.set_content(R"({"value":"UE5HREFUQTEyMw=="})", "application/json");
                   });
        server.Delete("/session/fake-1",
                      [this](const httplib::Request&, httplib::Response& res) {
                          ++deletes;
                          res.set_content(R"({"value":null})", "application/json");
                      });
        server.Get("/page", [](const httplib::Request&, httplib::Response& res) {
            res.set_content("ok", "text/html");
        });
        server.Get("/redir", [this](const httplib::Request&, httplib::Response& res) {
            res.status = 302;
            res.set_header("Location", origin() + "/page");
        });
        server.Get("/gone", [](const httplib::Request&, httplib::Response& res) {
            res.status = 404;
            res.set_content("nope", "text/html");
        });

        port = server.bind_to_any_port("127.0.0.1");
        REQUIRE(port > 0);
        final_url = origin() + "/landed";
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }

    ~FakeDriver() {
        server.stop();
        thread.join();
    }

    std::string origin() const { return "http://127.0.0.1:" + std::to_string(port); }

    webdriver::SessionConfig session_config() const {
        webdriver::SessionConfig config;
        config.endpoint = origin();
        config.capabilities = R"({"browserName":"probe"})";
        config.request_timeout = 5000ms;
        return config;
    }
};

}  // namespace

TEST_CASE("webdriver client drives the session lifecycle") {
    FakeDriver drv;
    {
        webdriver::Client client(drv.session_config());
        CHECK(client.session_id() == "fake-1");
        CHECK(drv.new_session_body().find("alwaysMatch") != std::string::npos);
        CHECK(drv.new_session_body().find("probe") != std::string::npos);

        client.navigate("http://site.test/");
        CHECK(drv.navigations == 1);
        CHECK(client.current_url() == drv.final_url);
        CHECK(client.page_source() == drv.page_html);
        CHECK(client.screenshot_png() == "PNGDATA123");
    }
    CHECK(drv.deletes == 1);  // destructor closed the session
}

TEST_CASE("webdriver failures surface the endpoint's error code") {
    FakeDriver drv;
    drv.fail_sessions = true;
    webdriver::SessionConfig config = drv.session_config();
    CHECK_THROWS_AS(webdriver::Client{config}, RemoteStatusError);
    try {
        webdriver::Client client(config);
    } catch (const RemoteStatusError& e) {
        CHECK(std::string(e.what()).find("session not created") != std::string::npos);
        CHECK(std::string(e.what()).find("boom") != std::string::npos);
    }
    webdriver::SessionConfig closed;
    closed.endpoint = "http://127.0.0.1:1";
    closed.request_timeout = 1000ms;
    CHECK_THROWS_AS(webdriver::Client{closed}, IoError);

    webdriver::SessionConfig junk_caps = drv.session_config();
    junk_caps.capabilities = "not json";
    CHECK_THROWS_AS(webdriver::Client{junk_caps}, ParameterError);
}

TEST_CASE("base64 decoding handles padding and rejects junk") {
    CHECK(webdriver::base64_decode("aGVsbG8=") == "hello");
    CHECK(webdriver::base64_decode("aGVsbG8") == "hello");
    CHECK(webdriver::base64_decode("") == "");
    CHECK_THROWS_AS(webdriver::base64_decode("a!b"), ParseError);
}

TEST_CASE("liveness check follows redirects and categorizes failures") {
    FakeDriver drv;

    LivenessResult direct = check_alive(drv.origin() + "/page", 3000ms);
    CHECK(direct.alive);
    CHECK(direct.final_url == drv.origin() + "/page");

    LivenessResult redirected = check_alive(drv.origin() + "/redir", 3000ms);
    CHECK(redirected.alive);
    CHECK(redirected.final_url == drv.origin() + "/page");

    LivenessResult missing = check_alive(drv.origin() + "/gone", 3000ms);
    CHECK_FALSE(missing.alive);
    CHECK(missing.reason == "http 404");

    LivenessResult refused = check_alive("http://127.0.0.1:1/x", 1500ms);
    CHECK_FALSE(refused.alive);
    CHECK(refused.reason == "connect");

    CHECK_THROWS_AS(check_alive("http://x.test/", 0ms), ParameterError);
}

TEST_CASE("capture pair walks baseline then blocked and keeps sessions clean") {
    FakeDriver drv;
    SiteRecord site;
    site.url = drv.origin() + "/page";
    site.rank = 1;

    CapturePair pair = capture_pair(site, drv.session_config(), drv.session_config(), 0ms);
    REQUIRE(pair.status == PairStatus::OK);
    CHECK(pair.site.alive == Liveness::Alive);
    CHECK(pair.baseline.variant == Variant::Baseline);
    CHECK(pair.blocked.variant == Variant::Blocked);
    CHECK(pair.baseline.final_url == drv.final_url);
    CHECK(pair.baseline.html == drv.page_html);
    CHECK(pair.blocked.html == drv.page_html);
    CHECK(pair.baseline.mode == CaptureMode::Live);
    REQUIRE(pair.baseline.screenshot.has_value());
    CHECK(*pair.baseline.screenshot == "PNGDATA123");
    CHECK(pair.baseline.captured_at.find('T') != std::string::npos);
    CHECK(drv.deletes == 2);
    CHECK(drv.navigations == 2);
}

TEST_CASE("a dead site never opens a session") {
    FakeDriver drv;
    SiteRecord site;
    site.url = "http://127.0.0.1:1/x";

    webdriver::SessionConfig config = drv.session_config();
    config.request_timeout = 1500ms;
    CapturePair pair = capture_pair(site, config, config, 0ms);
    CHECK(pair.status == PairStatus::Dead);
    CHECK(pair.failure_reason == "connect");
    CHECK(pair.site.alive == Liveness::Dead);
    CHECK(drv.navigations == 0);
}

TEST_CASE("a blocked-variant failure is reported with its stage") {
    FakeDriver drv;
    SiteRecord site;
    site.url = drv.origin() + "/page";

    webdriver::SessionConfig down = drv.session_config();
    down.endpoint = "http://127.0.0.1:1";
    down.request_timeout = 1500ms;

    CapturePair pair = capture_pair(site, drv.session_config(), down, 0ms);
    CHECK(pair.status == PairStatus::Failed);
    CHECK(pair.failure_reason == "blocked: session");
    CHECK(drv.deletes == 1);  // the baseline session was still closed
}

TEST_CASE("snapshot pairs round-trip through the directory layout") {
    testing::TempDir tmp("pairs");

    CapturePair pair;
    pair.site = {"http://www.roundtrip.test/x", "Round Trip", 7, "list", Liveness::Alive};
    pair.status = PairStatus::OK;
    pair.baseline.requested_url = pair.site.url;
    pair.baseline.final_url = "http://roundtrip.test/landed";
    pair.baseline.variant = Variant::Baseline;
    pair.baseline.html = "<html><body><p>base</p></body></html>";
    pair.baseline.screenshot = std::string("\x89PNG\r\n\x1a\nraw\0bytes", 16);
    pair.baseline.captured_at = "2026-08-19T12:00:00Z";
    pair.baseline.mode = CaptureMode::Live;
    pair.blocked = pair.baseline;
    pair.blocked.variant = Variant::Blocked;
    pair.blocked.html = "<html><body><p>blocked</p></body></html>";
    pair.blocked.final_url = "http://roundtrip.test/wall";

    save_pair(pair, tmp.path);
    CHECK(std::filesystem::exists(tmp.path / "roundtrip.test" / "meta.json"));
    CHECK(std::filesystem::exists(tmp.path / "roundtrip.test" / "baseline.png"));

    CapturePair back = load_pair(tmp.path, "roundtrip.test");
    CHECK(back.status == PairStatus::OK);
    CHECK(back.site.url == pair.site.url);
    CHECK(back.site.rank == 7);
    CHECK(back.baseline.html == pair.baseline.html);
    CHECK(back.blocked.html == pair.blocked.html);
    CHECK(back.baseline.final_url == pair.baseline.final_url);
    CHECK(back.blocked.final_url == pair.blocked.final_url);
    CHECK(back.baseline.variant == Variant::Baseline);
    CHECK(back.blocked.variant == Variant::Blocked);
    CHECK(back.baseline.mode == CaptureMode::Live);
    REQUIRE(back.baseline.screenshot.has_value());
    CHECK(*back.baseline.screenshot == *pair.baseline.screenshot);
}

TEST_CASE("non-captured pairs save their status and reason only") {
    testing::TempDir tmp("deadpairs");

    CapturePair dead;
    dead.site.url = "http://d.test/";
    dead.status = PairStatus::Dead;
    dead.failure_reason = "timeout";
    save_pair(dead, tmp.path);
    CHECK_FALSE(std::filesystem::exists(tmp.path / "d.test" / "baseline.html"));
    CapturePair dead_back = load_pair(tmp.path, "d.test");
    CHECK(dead_back.status == PairStatus::Dead);
    CHECK(dead_back.failure_reason == "timeout");
    CHECK(dead_back.site.alive == Liveness::Dead);

    CapturePair failed;
    failed.site.url = "http://f.test/";
    failed.status = PairStatus::Failed;
    failed.failure_reason = "blocked: navigate";
    save_pair(failed, tmp.path);
    CapturePair failed_back = load_pair(tmp.path, "f.test");
    CHECK(failed_back.status == PairStatus::Failed);
    CHECK(failed_back.failure_reason == "blocked: navigate");

    CHECK_THROWS_AS(load_pair(tmp.path, "missing.test"), IoError);
}

TEST_CASE("synthetic pairs keep the baseline and build the blocked variant") {
    FilterList list = parse_filter_list("||ads.test^\n##.ad\n");
    std::string baseline =
        "<html><body><div class=\"ad\"><img src=\"http://ads.test/b.png\"></div>"
        "<p>article text</p></body></html>";

    CapturePair plain = synth_pair(baseline, list, std::nullopt, "http://s.test/");
    CHECK(plain.status == PairStatus::OK);
    CHECK(plain.baseline.html == baseline);  // byte-for-byte
    CHECK(plain.baseline.mode == CaptureMode::Simulated);
    CHECK(plain.baseline.captured_at == "1970-01-01T00:00:00Z");
    CHECK(plain.blocked.html.find("class=\"ad\"") == std::string::npos);
    CHECK(plain.blocked.html.find("article text") != std::string::npos);

    CapturePair walled = synth_pair(
        baseline, list,
        std::optional<std::string>{"<div class=\"wall\"><p>disable your adblocker</p></div>"},
        "http://s.test/");
    CHECK(walled.blocked.html.find("disable your adblocker") != std::string::npos);
    CHECK(walled.baseline.html.find("disable your adblocker") == std::string::npos);

    CHECK_THROWS_AS(synth_pair(baseline, list, std::nullopt, "not-a-url"), ParameterError);
}
