#include "adbdiff/capture.hpp"

#include <ctime>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "adbdiff/errors.hpp"
#include "adbdiff/html.hpp"
#include "adbdiff/model_io.hpp"

namespace adbdiff {
namespace {

using nlohmann::json;

std::string error_category(httplib::Error err) {
    switch (err) {
        case httplib::Error::Connection:
        case httplib::Error::ProxyConnection:
        case httplib::Error::BindIPAddress: return "connect";
        case httplib::Error::ConnectionTimeout:
        case httplib::Error::Read:
        case httplib::Error::Write: return "timeout";
        case httplib::Error::SSLConnection:
        case httplib::Error::SSLLoadingCerts:
        case httplib::Error::SSLServerVerification: return "tls";
        default: return "transport";
    }
}

std::string now_utc() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string mode_token(CaptureMode mode) {
    switch (mode) {
        case CaptureMode::Live: return "live";
        case CaptureMode::Offline: return "offline";
        case CaptureMode::Simulated: return "simulated";
    }
    return "offline";
}

CaptureMode parse_mode_token(const std::string& token) {
    if (token == "live") return CaptureMode::Live;
    if (token == "offline") return CaptureMode::Offline;
    if (token == "simulated") return CaptureMode::Simulated;
    throw ParseError("unknown capture mode \"" + token + "\"");
}

std::string status_token(PairStatus status) {
    switch (status) {
        case PairStatus::OK: return "ok";
        case PairStatus::Dead: return "dead";
        case PairStatus::Failed: return "failed";
    }
    return "failed";
}

PairStatus parse_status_token(const std::string& token) {
    if (token == "ok") return PairStatus::OK;
    if (token == "dead") return PairStatus::Dead;
    if (token == "failed") return PairStatus::Failed;
    throw ParseError("unknown pair status \"" + token + "\"");
}

json snapshot_meta(const PageSnapshot& snap) {
    return json{{"requested_url", snap.requested_url},
                {"final_url", snap.final_url},
                {"captured_at", snap.captured_at},
                {"mode", mode_token(snap.mode)},
                {"has_screenshot", snap.screenshot.has_value()}};
}

PageSnapshot snapshot_from_meta(const json& j, Variant variant) {
    PageSnapshot snap;
    snap.requested_url = j.at("requested_url").get<std::string>();
    snap.final_url = j.at("final_url").get<std::string>();
    snap.captured_at = j.at("captured_at").get<std::string>();
    snap.mode = parse_mode_token(j.at("mode").get<std::string>());
    snap.variant = variant;
    return snap;
}

}  // namespace

LivenessResult check_alive(const std::string& url, std::chrono::milliseconds timeout) {
    if (timeout.count() <= 0) throw ParameterError("liveness timeout must be positive");

    LivenessResult result;
    result.final_url = url;
    auto deadline = std::chrono::steady_clock::now() + timeout;
    std::string current = url;

    for (int hop = 0; hop <= 10; ++hop) {
        std::optional<Url> parsed = parse_url(current);
        if (!parsed || !is_absolute_http(current)) {
            result.reason = "non-http redirect target";
            return result;
        }
        auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
            deadline - std::chrono::steady_clock::now());
        if (remaining.count() <= 0) {
            result.reason = "timeout";
            return result;
        }

        httplib::Client http(parsed->origin());
        time_t sec = std::max<time_t>(1, remaining.count() / 1000);
        http.set_connection_timeout(sec, 0);
        http.set_read_timeout(sec, 0);
        std::string target = parsed->path;
        if (!parsed->query.empty()) target += "?" + parsed->query;
        httplib::Result res = http.Get(target, {{"User-Agent", "adbdiff/1.0"}});
        if (!res) {
            result.reason = error_category(res.error());
            return result;
        }

        bool redirect = res->status >= 300 && res->status < 400 && res->has_header("Location");
        if (redirect) {
            current = resolve_reference(*parsed, res->get_header_value("Location"));
            continue;
        }
        if (res->status >= 200 && res->status < 400) {
            result.alive = true;
            result.final_url = current;
            return result;
        }
        result.reason = "http " + std::to_string(res->status);
        result.final_url = current;
        return result;
    }
    result.reason = "too many redirects";
    return result;
}

namespace {

PageSnapshot capture_variant(const SiteRecord& site, const webdriver::SessionConfig& config,
                             Variant variant, std::chrono::milliseconds settle_delay,
                             std::string& stage) {
    PageSnapshot snap;
    snap.requested_url = site.url;
    snap.variant = variant;
    snap.mode = CaptureMode::Live;

    stage = "session";
    webdriver::Client session(config);
    stage = "navigate";
    session.navigate(site.url);
    if (settle_delay.count() > 0) std::this_thread::sleep_for(settle_delay);
    stage = "url";
    snap.final_url = session.current_url();
    stage = "source";
    snap.html = session.page_source();
    stage = "screenshot";
    snap.screenshot = session.screenshot_png();
    snap.captured_at = now_utc();
    return snap;
}

}  // namespace

CapturePair capture_pair(const SiteRecord& site, const webdriver::SessionConfig& baseline_session,
                         const webdriver::SessionConfig& blocked_session,
                         std::chrono::milliseconds settle_delay) {
    if (settle_delay.count() < 0) throw ParameterError("settle delay must be >= 0");

    CapturePair pair;
    pair.site = site;

    LivenessResult liveness = check_alive(site.url, baseline_session.request_timeout);
    if (!liveness.alive) {
        pair.site.alive = Liveness::Dead;
        pair.status = PairStatus::Dead;
        pair.failure_reason = liveness.reason;
        return pair;
    }
    pair.site.alive = Liveness::Alive;

    struct Step {
        const char* name;
        Variant variant;
        const webdriver::SessionConfig* config;
        PageSnapshot* out;
    };
    Step steps[] = {{"baseline", Variant::Baseline, &baseline_session, &pair.baseline},
                    {"blocked", Variant::Blocked, &blocked_session, &pair.blocked}};
    for (const Step& step : steps) {
        std::string stage = "session";
        try {
            *step.out = capture_variant(site, *step.config, step.variant, settle_delay, stage);
        } catch (const std::exception&) {
            pair.status = PairStatus::Failed;
            pair.failure_reason = std::string(step.name) + ": " + stage;
            return pair;
        }
    }
    pair.status = PairStatus::OK;
    return pair;
}

void save_pair(const CapturePair& pair, const std::filesystem::path& root) {
    std::filesystem::path dir = root / normalize_host(pair.site.url);
    std::filesystem::create_directories(dir);

    json meta{{"site",
               {{"url", pair.site.url},
                {"title", pair.site.title},
                {"rank", pair.site.rank},
                {"source_tag", pair.site.source_tag}}},
              {"status", status_token(pair.status)}};
    if (!pair.failure_reason.empty()) meta["failure_reason"] = pair.failure_reason;
    if (pair.status == PairStatus::OK) {
        meta["baseline"] = snapshot_meta(pair.baseline);
        meta["blocked"] = snapshot_meta(pair.blocked);
        write_text_file(dir / "baseline.html", pair.baseline.html);
        write_text_file(dir / "blocked.html", pair.blocked.html);
        if (pair.baseline.screenshot)
            write_text_file(dir / "baseline.png", *pair.baseline.screenshot);
        if (pair.blocked.screenshot)
            write_text_file(dir / "blocked.png", *pair.blocked.screenshot);
    }
    write_text_file(dir / "meta.json", meta.dump(2) + "\n");
}

CapturePair load_pair(const std::filesystem::path& root, std::string_view host) {
    std::filesystem::path dir = root / host;
    std::filesystem::path meta_path = dir / "meta.json";
    if (!std::filesystem::exists(meta_path))
        throw IoError("no snapshot meta.json under " + dir.string());

    json meta;
    try {
        meta = json::parse(read_text_file(meta_path));
    } catch (const json::parse_error& e) {
        throw ParseError(meta_path.string() + " is not valid JSON: " + e.what());
    }

    CapturePair pair;
    try {
        const json& site = meta.at("site");
        pair.site.url = site.at("url").get<std::string>();
        pair.site.title = site.value("title", "");
        pair.site.rank = site.value("rank", 1);
        pair.site.source_tag = site.value("source_tag", "");
        pair.status = parse_status_token(meta.at("status").get<std::string>());
        pair.failure_reason = meta.value("failure_reason", "");
        if (pair.status != PairStatus::OK) {
            pair.site.alive = pair.status == PairStatus::Dead ? Liveness::Dead : Liveness::Unknown;
            return pair;
        }
        pair.site.alive = Liveness::Alive;
        pair.baseline = snapshot_from_meta(meta.at("baseline"), Variant::Baseline);
        pair.blocked = snapshot_from_meta(meta.at("blocked"), Variant::Blocked);
    } catch (const json::exception& e) {
        throw ParseError(meta_path.string() + " structure: " + e.what());
    }

    for (PageSnapshot* snap : {&pair.baseline, &pair.blocked}) {
        const char* name = snap->variant == Variant::Baseline ? "baseline" : "blocked";
        std::filesystem::path html_path = dir / (std::string(name) + ".html");
        if (!std::filesystem::exists(html_path))
            throw IoError("missing " + std::string(name) + ".html for " + std::string(host));
        snap->html = read_text_file(html_path);
        std::filesystem::path png_path = dir / (std::string(name) + ".png");
        if (std::filesystem::exists(png_path)) snap->screenshot = read_text_file(png_path);
    }
    return pair;
}

CapturePair synth_pair(std::string_view baseline_html, const FilterList& list,
                       const std::optional<std::string>& wall_html, const std::string& url) {
    CapturePair pair;
    pair.site.url = url;
    pair.site.rank = 1;
    pair.site.source_tag = "synthetic";
    pair.status = PairStatus::OK;

    const char* epoch = "1970-01-01T00:00:00Z";
    pair.baseline.requested_url = url;
    pair.baseline.final_url = url;
    pair.baseline.variant = Variant::Baseline;
    pair.baseline.html = std::string(baseline_html);
    pair.baseline.captured_at = epoch;
    pair.baseline.mode = CaptureMode::Simulated;

    std::optional<Url> base = parse_url(url);
    if (!base) throw ParameterError("synth_pair needs an absolute URL, got \"" + url + "\"");
    std::string blocked_html = simulate_blocking(baseline_html, *base, list);

    if (wall_html && !wall_html->empty()) {
        html::Document doc = html::parse(blocked_html);
        html::Document wall = html::parse(*wall_html);
        html::Node* target = doc.body();
        html::Node* source = wall.body();
        if (target && source) {
            for (auto& child : source->children) {
                child->parent = target;
                target->children.push_back(std::move(child));
            }
            source->children.clear();
            blocked_html = html::serialize(doc);
        }
    }

    pair.blocked = pair.baseline;
    pair.blocked.variant = Variant::Blocked;
    pair.blocked.html = std::move(blocked_html);
    return pair;
}

}  // namespace adbdiff
