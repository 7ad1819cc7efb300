#include "suprec/rng.hpp"

#include <cmath>

namespace suprec {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& ctr, const std::array<std::uint32_t, 2>& key) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

} // namespace

std::array<std::uint32_t, 4> Rng::philox4x32(std::array<std::uint32_t, 4> ctr,
                                             std::array<std::uint32_t, 2> key) {
    philox_round(ctr, key);
    for (int r = 1; r < 10; ++r) {
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
        philox_round(ctr, key);
    }
    return ctr;
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

void Rng::refill() {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(counter_),
        static_cast<std::uint32_t>(counter_ >> 32),
        static_cast<std::uint32_t>(stream_),
        static_cast<std::uint32_t>(stream_ >> 32),
    };
    const std::array<std::uint32_t, 2> key = {
        static_cast<std::uint32_t>(seed_),
        static_cast<std::uint32_t>(seed_ >> 32),
    };
    block_ = philox4x32(ctr, key);
    ++counter_;
    block_pos_ = 0;
}

std::uint64_t Rng::next_u64() {
    if (block_pos_ >= 4) refill();
    const std::uint64_t lo = block_[block_pos_];
    const std::uint64_t hi = block_[block_pos_ + 1];
    block_pos_ += 2;
    return lo | (hi << 32);
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open01() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (has_cached_gauss_) {
        has_cached_gauss_ = false;
        return cached_gauss_;
    }
    // Marsaglia polar method.
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double mag = std::sqrt(-2.0 * std::log(s) / s);
    cached_gauss_ = v * mag;
    has_cached_gauss_ = true;
    return u * mag;
}

} // namespace suprec
