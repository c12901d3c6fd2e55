#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace adbdiff {

// Unbiased draw in [0, n) from raw 64-bit output. No std distribution is
// involved, so sequences are identical across standard libraries.
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                          (std::numeric_limits<std::uint64_t>::max() % n + 1) % n;
    while (true) {
        std::uint64_t r = rng();
        if (r <= limit) return r % n;
    }
}

template <typename T>
void shuffle_values(std::vector<T>& v, std::mt19937_64& rng) {
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[bounded_draw(rng, i)]);
}

}  // namespace adbdiff
