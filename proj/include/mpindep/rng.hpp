#pragma once

#include <cstdint>
#include <random>

namespace mpindep {

// Seed mixing. Replicate r of a run with base seed s always draws from
// substream(s, r), so results do not depend on execution order or worker
// count. The constant is the 64-bit golden-ratio increment used by
// splitmix64.
inline constexpr std::uint64_t kSeedMixConstant = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += kSeedMixConstant;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derive an independent stream seed from (seed, salt). Salts are small
// integers naming the role of the stream (replicate index, column index,
// innovation set); callers keep their salt spaces disjoint by first mixing
// in a role tag.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t salt) {
    return splitmix64(seed ^ splitmix64(salt));
}

// Role tags for nested derivation.
enum class StreamRole : std::uint64_t {
    calibration = 0x01,
    evaluation = 0x02,
    column = 0x03,
    row = 0x04,
    factor = 0x05,
    second_innovation = 0x06,  // the xi stream of the SEC model
    weights = 0x07,            // per-replicate spatial weight matrices
    selection = 0x08,          // ticker subsampling
};

inline std::uint64_t substream(std::uint64_t seed, StreamRole role,
                               std::uint64_t salt) {
    return substream(substream(seed, static_cast<std::uint64_t>(role)), salt);
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

}  // namespace mpindep
