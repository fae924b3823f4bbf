#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace spdelab::rng {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011). A pure function
// from (counter, key) to four 32-bit words; streams are addressed by choosing
// counters, so ensemble member k is reproducible without serial generation.

inline constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85u;
inline constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57u;

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

inline Counter philox4x32(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM4x32A) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM4x32B) * ctr[2];
        const Counter next = {
            static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
            static_cast<std::uint32_t>(p1),
            static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
            static_cast<std::uint32_t>(p0),
        };
        ctr = next;
        key[0] += kPhiloxW32A;
        key[1] += kPhiloxW32B;
    }
    return ctr;
}

inline Key key_from_seed(std::uint64_t seed) {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

// Two 64-bit words from one block.
inline std::array<std::uint64_t, 2> philox_pair(std::uint64_t seed, Counter ctr) {
    const Counter out = philox4x32(ctr, key_from_seed(seed));
    return {(static_cast<std::uint64_t>(out[0]) << 32) | out[1],
            (static_cast<std::uint64_t>(out[2]) << 32) | out[3]};
}

// Uniform in the open interval (0, 1): the top 52 bits place the value at
// (k + 1/2) / 2^52, every one of which is exactly representable, so the result is
// confined to [2^-53, 1 - 2^-53] with no rounding at either end. (One more mantissa
// bit would put the largest value within half an ulp of 1, where it rounds up and
// breaks the open-interval contract that log() safety relies on.)
inline double uniform_from_bits(std::uint64_t bits) {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

// Box-Muller: two independent standard normals from two uniform words.
inline std::array<double, 2> normals_from_bits(std::uint64_t bits_a, std::uint64_t bits_b) {
    const double u1 = uniform_from_bits(bits_a);
    const double u2 = uniform_from_bits(bits_b);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
}

// Derives an independent 64-bit stream seed from a base seed, a purpose tag, and a
// member index. Distinct (tag, k) pairs give statistically independent streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint32_t tag, std::uint64_t k) {
    const Counter ctr = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32),
                         tag, 0xD5EED5EEu};
    return philox_pair(base, ctr)[0];
}

// Purpose tags for derived streams; one tag per independent consumer of randomness.
enum StreamTag : std::uint32_t {
    kTagHeatPath = 1,
    kTagDirectPath = 2,
    kTagSupportPath = 3,
    kTagPermutation = 4,
    kTagBootstrap = 5,
};

// Sequential uniform/normal draws from a reserved counter lane. Counter layout:
// (k_lo, k_hi, lane0, lane1) with k the block index; consumers must pick disjoint
// (lane0, lane1) pairs per key to stay collision-free.
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint32_t lane0, std::uint32_t lane1)
        : seed_(seed), lane0_(lane0), lane1_(lane1) {}

    double next_uniform() {
        if (have_buffered_) {
            have_buffered_ = false;
            return uniform_from_bits(buffered_);
        }
        const auto words = next_block();
        buffered_ = words[1];
        have_buffered_ = true;
        return uniform_from_bits(words[0]);
    }

    // Consumes one full block (independent of any buffered uniform word).
    double next_normal() {
        if (have_normal_) {
            have_normal_ = false;
            return spare_normal_;
        }
        const auto words = next_block();
        const auto z = normals_from_bits(words[0], words[1]);
        spare_normal_ = z[1];
        have_normal_ = true;
        return z[0];
    }

private:
    std::array<std::uint64_t, 2> next_block() {
        const Counter ctr = {static_cast<std::uint32_t>(k_), static_cast<std::uint32_t>(k_ >> 32),
                             lane0_, lane1_};
        ++k_;
        return philox_pair(seed_, ctr);
    }

    std::uint64_t seed_;
    std::uint32_t lane0_;
    std::uint32_t lane1_;
    std::uint64_t k_ = 0;
    std::uint64_t buffered_ = 0;
    bool have_buffered_ = false;
    double spare_normal_ = 0.0;
    bool have_normal_ = false;
};

// Exact Poisson sample by exponential-interarrival counting (Knuth's method in the
// log domain, underflow-free for any mean). O(mean) draws; exact for all means.
inline std::uint64_t poisson_draw(double mean, CounterStream& stream) {
    if (!(mean > 0.0)) return 0;
    double s = 0.0;
    std::uint64_t k = 0;
    while (true) {
        s += -std::log(stream.next_uniform());
        if (s >= mean) return k;
        ++k;
    }
}

// Gamma(shape = k, scale = 1) for integer k, as a sum of exponentials. Exact.
inline double gamma_integer_draw(std::uint64_t k, CounterStream& stream) {
    double s = 0.0;
    for (std::uint64_t i = 0; i < k; ++i) {
        s += -std::log(stream.next_uniform());
    }
    return s;
}

}  // namespace spdelab::rng
