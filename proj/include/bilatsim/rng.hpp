#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "bilatsim/config.hpp"

namespace bilatsim {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Agent attributes come from the attribute stream, which depends on the seed
// alone; landscape, placement, and per-step draws come from the run stream,
// which also folds in the replication index.
inline constexpr std::uint64_t kAttributeStream = 1;
inline constexpr std::uint64_t kRunStream = 2;

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_tag, std::uint64_t index) {
    return splitmix64(splitmix64(seed ^ (0x9E3779B97F4A7C15ULL * (stream_tag + 1))) + index);
}

/// Deterministic random stream. All draws are derived from u01() so results do
/// not depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double u01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). Requires n >= 1.
    std::uint64_t below(std::uint64_t n) {
        auto r = static_cast<std::uint64_t>(u01() * static_cast<double>(n));
        return r < n ? r : n - 1;
    }

    int uniform_int(const IntRange& r) {
        return r.lo + static_cast<int>(below(static_cast<std::uint64_t>(r.hi - r.lo) + 1));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[static_cast<std::size_t>(below(i))]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace bilatsim
