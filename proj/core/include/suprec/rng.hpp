#pragma once

#include <array>
#include <cstdint>

namespace suprec {

/// Counter-based random stream (Philox4x32-10).
///
/// A stream is identified by (seed, stream id). Streams with distinct ids are
/// statistically independent, so parallel trials can each own one stream and
/// the aggregate result does not depend on scheduling or worker count.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01();

    /// Uniform on (0, 1]; safe to feed into log().
    double uniform_open01();

    /// Standard normal via Box-Muller. Second value of each pair is cached.
    double gaussian();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    /// One Philox4x32-10 block. Exposed for known-answer tests.
    static std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                                   std::array<std::uint32_t, 2> key);

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int block_pos_ = 4; // 4 == exhausted
    double cached_gauss_ = 0.0;
    bool has_cached_gauss_ = false;
};

/// Stream id for a given trial and purpose. Purposes separate the support,
/// matrix, signal-value, and per-column noise draws inside one trial so that
/// reduced configurations (e.g. a single measurement vector) consume exactly
/// the same substreams as their general counterparts.
inline std::uint64_t trial_stream(std::uint64_t trial, unsigned purpose) {
    return (trial << 8) | (purpose & 0xffu);
}

namespace stream_purpose {
inline constexpr unsigned support = 0;
inline constexpr unsigned matrix = 1;
inline constexpr unsigned values = 2;
inline constexpr unsigned tail = 3;
inline constexpr unsigned outage = 4;
inline constexpr unsigned noise0 = 8; // noise for column j uses noise0 + j
} // namespace stream_purpose

} // namespace suprec
