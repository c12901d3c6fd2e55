#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "adbdiff/filterlist.hpp"
#include "adbdiff/sites.hpp"
#include "adbdiff/webdriver.hpp"

namespace adbdiff {

enum class Variant { Baseline, Blocked };
enum class CaptureMode { Live, Offline, Simulated };
enum class PairStatus { OK, Dead, Failed };

struct PageSnapshot {
    std::string requested_url;
    std::string final_url;
    Variant variant = Variant::Baseline;
    std::string html;
    std::optional<std::string> screenshot;  // PNG bytes
    std::string captured_at;                // UTC ISO-8601
    CaptureMode mode = CaptureMode::Offline;
};

struct CapturePair {
    SiteRecord site;
    PageSnapshot baseline;
    PageSnapshot blocked;
    PairStatus status = PairStatus::OK;
    std::string failure_reason;  // "<variant>: <stage>" for Failed, category for Dead
};

struct LivenessResult {
    bool alive = false;
    std::string final_url;
    std::string reason;  // failure category when not alive
};

// Plain HTTP GET with up to 10 redirects followed manually so the landing
// URL is known. alive iff a 200-399 status arrives within the timeout.
LivenessResult check_alive(const std::string& url, std::chrono::milliseconds timeout);

// Live A/B capture: liveness check, then per variant (baseline first)
// create session / navigate / wait settle_delay / read URL + source /
// screenshot / delete session. Any variant failure fails the whole pair;
// sessions are always closed.
CapturePair capture_pair(const SiteRecord& site, const webdriver::SessionConfig& baseline_session,
                         const webdriver::SessionConfig& blocked_session,
                         std::chrono::milliseconds settle_delay);

// Snapshot directory layout per site:
//   <root>/<normalized-host>/{baseline.html, blocked.html,
//                             baseline.png, blocked.png, meta.json}
// PNGs are written only when a screenshot was taken. load(save(x))
// reproduces html, final_url, variant and mode exactly.
void save_pair(const CapturePair& pair, const std::filesystem::path& root);
CapturePair load_pair(const std::filesystem::path& root, std::string_view host);

// Offline pair: blocked = simulate_blocking(baseline) with the wall
// fragment appended to the body when provided. Walls present = planted
// positives for pipeline tests.
CapturePair synth_pair(std::string_view baseline_html, const FilterList& list,
                       const std::optional<std::string>& wall_html,
                       const std::string& url = "http://synth.invalid/");

}  // namespace adbdiff
