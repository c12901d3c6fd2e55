#include "adbdiff/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

#include "adbdiff/capture.hpp"
#include "adbdiff/errors.hpp"
#include "adbdiff/filterlist.hpp"
#include "adbdiff/model_io.hpp"
#include "adbdiff/rand.hpp"

namespace adbdiff::synth {

namespace {

// Neutral filler vocabulary: nothing here may contain an anti-adblock
// keyword or start with a paywall term, or planted signals would leak
// into negative pages.
const std::vector<std::string> kWords = {
    "river",  "stone",  "meadow", "cedar",  "lantern", "harbor", "violet", "ember",
    "quill",  "drift",  "canyon", "summit", "orchid",  "slate",  "willow", "comet",
    "marble", "fern",   "tide",   "grove",  "plume",   "amber",  "basalt", "cinder",
    "dune",   "elm",    "flint",  "garnet", "hazel",   "iris",   "juniper", "kelp",
    "linden", "maple",  "nectar", "oak",    "pebble",  "reed",   "sage",   "thorn",
    "umber",  "vale",   "wren",   "yarrow", "zephyr",  "cliff",  "mist",   "glade"};

const std::string& pick(std::mt19937_64& rng, const std::vector<std::string>& pool) {
    return pool[static_cast<std::size_t>(bounded_draw(rng, pool.size()))];
}

std::size_t draw_range(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(bounded_draw(rng, hi - lo + 1));
}

std::string sentence(std::mt19937_64& rng, std::size_t words) {
    std::string out;
    for (std::size_t i = 0; i < words; ++i) {
        if (i) out += ' ';
        out += pick(rng, kWords);
    }
    out += '.';
    return out;
}

// rich_text forces enough body text that a wall page replacing it stays
// well under the invisibility threshold.
std::string build_page(std::mt19937_64& rng, const std::string& host, bool rich_text) {
    std::ostringstream page;
    page << "<html>\n<head>\n<title>" << pick(rng, kWords) << ' ' << pick(rng, kWords)
         << " | " << host << "</title>\n"
         << "<meta charset=\"utf-8\">\n"
         << "<style>body { margin: 0; font: 16px/1.5 serif; }</style>\n"
         << "</head>\n<body>\n<nav>\n";
    std::size_t links = draw_range(rng, 3, 6);
    for (std::size_t i = 0; i < links; ++i)
        page << "<a href=\"/p" << i << "\">" << pick(rng, kWords) << "</a>\n";
    page << "</nav>\n";

    std::size_t h1s = draw_range(rng, 1, 2);
    for (std::size_t i = 0; i < h1s; ++i)
        page << "<h1>" << pick(rng, kWords) << ' ' << pick(rng, kWords) << "</h1>\n";
    std::size_t h2s = draw_range(rng, 0, 2);
    for (std::size_t i = 0; i < h2s; ++i)
        page << "<h2>" << pick(rng, kWords) << ' ' << pick(rng, kWords) << "</h2>\n";
    std::size_t h3s = draw_range(rng, 0, 3);
    for (std::size_t i = 0; i < h3s; ++i)
        page << "<h3>" << pick(rng, kWords) << "</h3>\n";

    std::size_t paras = rich_text ? draw_range(rng, 6, 9) : draw_range(rng, 3, 7);
    std::size_t min_words = rich_text ? 12 : 8;
    for (std::size_t i = 0; i < paras; ++i)
        page << "<p>" << sentence(rng, draw_range(rng, min_words, 20)) << "</p>\n";

    page << "<p class=\"rotator\">" << sentence(rng, 3) << "</p>\n";

    std::size_t imgs = draw_range(rng, 1, 4);
    for (std::size_t i = 0; i < imgs; ++i)
        page << "<img src=\"/media/img" << i << ".png\" alt=\"" << pick(rng, kWords) << "\">\n";

    if (bounded_draw(rng, 2) == 0) {
        page << "<table>\n<tr><td>" << pick(rng, kWords) << "</td><td>" << pick(rng, kWords)
             << "</td></tr>\n<tr><td>" << pick(rng, kWords) << "</td><td>" << pick(rng, kWords)
             << "</td></tr>\n</table>\n";
    }

    if (bounded_draw(rng, 10) < 6) {
        std::size_t ads = draw_range(rng, 1, 3);
        for (std::size_t i = 0; i < ads; ++i) {
            page << "<div class=\"ad\"><img src=\"http://ads.test/b" << i << ".png\">"
                 << "<script src=\"http://ads.test/track.js\"></script>";
            if (bounded_draw(rng, 2) == 0)
                page << "<iframe src=\"http://ads.test/frame.html\"></iframe>";
            page << "</div>\n";
        }
    }

    page << "<footer><p>" << sentence(rng, 4) << "</p></footer>\n</body>\n</html>\n";
    return page.str();
}

std::string availability_wall() {
    return "<div class=\"adblock-wall\"><h2>Ad blocker detected</h2>"
           "<p>Please disable your adblocker and whitelist this site to keep reading.</p></div>";
}

std::string cost_wall() {
    return "<div class=\"paywall\"><h2>Ad blocker detected</h2>"
           "<p>You are using an ad blocker. Pay to view up to 90% less adverts, "
           "or turn the blocker off.</p><p>Subscribe today for full access.</p></div>";
}

std::string invisibility_page(const std::string& host) {
    return "<html>\n<head>\n<title>" + host + "</title>\n</head>\n<body>\n"
           "<div class=\"wall\"><h2>Adblock detected</h2>"
           "<p>Turn off your adblocker to see this page.</p></div>\n</body>\n</html>\n";
}

// Benign variant drift: swap the rotator paragraph's text in the blocked
// copy, so negative pairs are not byte-identical across variants.
void apply_drift(std::mt19937_64& rng, const std::string& baseline, std::string& blocked) {
    std::string::size_type from = baseline.find("<p class=\"rotator\">");
    if (from == std::string::npos) return;
    std::string::size_type to = baseline.find("</p>", from);
    if (to == std::string::npos) return;
    std::string old_para = baseline.substr(from, to + 4 - from);
    std::string new_para = "<p class=\"rotator\">" + sentence(rng, 3) + "</p>";
    std::string::size_type at = blocked.find(old_para);
    if (at != std::string::npos) blocked.replace(at, old_para.size(), new_para);
}

}  // namespace

std::string synth_filter_list() {
    return "! synthetic ad servers\n"
           "||ads.test^\n"
           "||tracker.test^\n"
           "##.ad\n"
           "##.sponsor\n";
}

SynthSummary generate_synth_corpus(const std::filesystem::path& root, const SynthOptions& opts) {
    if (opts.pairs == 0) throw ParameterError("corpus needs at least one pair");
    if (opts.walls + opts.dead > opts.pairs)
        throw ParameterError("walls + dead exceeds the number of pairs");

    std::filesystem::create_directories(root);
    const FilterList list = parse_filter_list(
        opts.filter_list_text.empty() ? synth_filter_list() : opts.filter_list_text);

    std::mt19937_64 master(opts.seed);

    std::vector<std::size_t> order(opts.pairs);
    std::iota(order.begin(), order.end(), 0);
    shuffle_values(order, master);
    enum Role { Normal, Wall, DeadSite };
    std::vector<Role> role(opts.pairs, Normal);
    for (std::size_t i = 0; i < opts.walls; ++i) role[order[i]] = Wall;
    for (std::size_t i = 0; i < opts.dead; ++i) role[order[opts.walls + i]] = DeadSite;

    SynthSummary summary;
    summary.pairs = opts.pairs;
    std::vector<std::pair<std::string, bool>> truth;

    std::size_t wall_seq = 0;
    std::size_t negative_seq = 0;
    for (std::size_t i = 0; i < opts.pairs; ++i) {
        std::mt19937_64 site_rng(master());
        char buf[48];
        std::snprintf(buf, sizeof buf, "site%03zu.test", i);
        std::string host = buf;
        std::string url = "http://" + host + "/";

        if (role[i] == DeadSite) {
            CapturePair pair;
            pair.site = SiteRecord{url, host, static_cast<int>(i + 1), "synthetic", Liveness::Dead};
            pair.status = PairStatus::Dead;
            pair.failure_reason = "connect";
            save_pair(pair, root);
            ++summary.dead;
            continue;
        }

        bool is_wall = role[i] == Wall;
        std::string baseline = build_page(site_rng, host, is_wall && wall_seq % 3 == 2);

        std::optional<std::string> wall;
        if (is_wall) {
            switch (wall_seq % 3) {
                case 0: wall = availability_wall(); break;
                case 1: wall = cost_wall(); break;
                default: break;  // invisibility replaces the page below
            }
        } else if (negative_seq % 25 == 3) {
            // A page legitimately writing about blockers: the keyword shows
            // up in both variants, so the keyword flag must stay off.
            std::string article = "<p>Our latest review covers adblock extensions in depth.</p>\n";
            std::string::size_type at = baseline.find("<footer>");
            if (at != std::string::npos) baseline.insert(at, article);
        }

        CapturePair pair = synth_pair(baseline, list, wall, url);
        pair.site.title = host;
        pair.site.rank = static_cast<int>(i + 1);

        if (is_wall && wall_seq % 3 == 2) pair.blocked.html = invisibility_page(host);

        if (is_wall) {
            if (wall_seq % 4 == 0) pair.blocked.final_url = url + "adblock-notice";
        } else {
            if (negative_seq % 40 == 7) pair.blocked.final_url = "https://" + host + "/";
            if (bounded_draw(site_rng, 10) < 3) apply_drift(site_rng, baseline, pair.blocked.html);
        }

        save_pair(pair, root);
        truth.emplace_back(host, is_wall);
        if (is_wall) {
            summary.wall_hosts.push_back(host);
            ++summary.walls;
            ++wall_seq;
        } else {
            ++negative_seq;
        }
    }

    std::sort(truth.begin(), truth.end());
    std::sort(summary.wall_hosts.begin(), summary.wall_hosts.end());
    std::string csv = "host,verdict\n";
    for (const auto& [host, positive] : truth) csv += host + (positive ? ",true\n" : ",false\n");
    write_text_file(root / "truth.csv", csv);
    return summary;
}

}  // namespace adbdiff::synth
