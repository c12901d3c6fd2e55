#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace adbdiff::synth {

struct SynthOptions {
    std::size_t pairs = 200;
    std::size_t walls = 40;  // pairs that get an anti-adblock wall planted
    std::size_t dead = 0;    // pairs recorded as unreachable, no snapshots
    std::uint64_t seed = 1;
    std::string filter_list_text;  // empty -> synth_filter_list()
};

struct SynthSummary {
    std::size_t pairs = 0;
    std::size_t walls = 0;
    std::size_t dead = 0;
    std::vector<std::string> wall_hosts;  // sorted
};

// Filter list the generator blocks against (synthetic ad hosts + cosmetic
// rules for the ad containers it emits).
std::string synth_filter_list();

// Writes snapshot pairs under root (one directory per generated host) and
// ground truth to root/truth.csv as `host,verdict` rows covering every
// non-dead pair. Wall pairs cycle through availability / cost / invisibility
// responses; every fourth wall also redirects the blocked variant. Output is
// fully determined by opts.seed.
SynthSummary generate_synth_corpus(const std::filesystem::path& root, const SynthOptions& opts);

}  // namespace adbdiff::synth
