#pragma once

#include <array>
#include <cstdint>

#include "gaussians.hpp"

namespace wiener {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11): a keyed bijection of 128-bit counters.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter apply(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }
};

enum class StreamPurpose : std::uint32_t {
    increments = 1,
    bridge = 2,
    generic = 3,
};

/**
 * Random access standard normal draws for one stream (seed, stream id, purpose).
 * Draw i depends only on those values and i, never on which thread asks or in what order.
 * Uniforms use 53 bits mapped into the open interval (0, 1), normals the quantile transform.
 */
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream, StreamPurpose purpose)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_lo_(static_cast<std::uint32_t>(stream)),
          stream_hi_(static_cast<std::uint32_t>(stream >> 32)),
          purpose_(static_cast<std::uint32_t>(purpose)) {}

    double uniform(std::uint64_t index) {
        const std::uint64_t block = index >> 1;
        if (block != cached_block_) {
            cached_ = Philox4x32::apply({stream_lo_, stream_hi_, static_cast<std::uint32_t>(block),
                                         purpose_ ^ (static_cast<std::uint32_t>(block >> 32) << 8)},
                                        key_);
            cached_block_ = block;
        }
        const std::size_t w = (index & 1) * 2;
        const std::uint64_t bits = ((std::uint64_t{cached_[w]} << 32) | cached_[w + 1]) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    double normal(std::uint64_t index) { return std_normal_quantile(uniform(index)); }

private:
    Philox4x32::Key key_;
    std::uint32_t stream_lo_, stream_hi_, purpose_;
    std::uint64_t cached_block_ = ~std::uint64_t{0};
    Philox4x32::Counter cached_{};
};

/// SplitMix64 finalizer; derives independent seeds for auxiliary uses (random test bands, etc.).
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace wiener
