#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace bmlab::rng {

// Philox-4x32-10 counter-based generator (Salmon et al., "Parallel random
// numbers: as easy as 1, 2, 3").  A block is a pure function of
// (key, counter), so independent streams are addressed rather than stepped:
// key <- seed, counter <- (stream, index).  No shared state, identical
// output regardless of evaluation order or thread count.
struct Philox4x32 {
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::uint64_t key,
                                              std::uint64_t ctr_hi,
                                              std::uint64_t ctr_lo) {
        std::uint32_t k0 = static_cast<std::uint32_t>(key);
        std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
        std::uint32_t c0 = static_cast<std::uint32_t>(ctr_lo);
        std::uint32_t c1 = static_cast<std::uint32_t>(ctr_lo >> 32);
        std::uint32_t c2 = static_cast<std::uint32_t>(ctr_hi);
        std::uint32_t c3 = static_cast<std::uint32_t>(ctr_hi >> 32);
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0;
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2;
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            const std::uint32_t n0 = hi1 ^ c1 ^ k0;
            const std::uint32_t n2 = hi0 ^ c3 ^ k1;
            c0 = n0;
            c1 = lo1;
            c2 = n2;
            c3 = lo0;
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        return {c0, c1, c2, c3};
    }
};

// Two uniform doubles in (0,1), from one Philox block.
inline std::array<double, 2> uniform_pair(std::uint64_t seed, std::uint64_t stream,
                                          std::uint64_t index) {
    const auto w = Philox4x32::block(seed, stream, index);
    const std::uint64_t u0 = (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
    const std::uint64_t u1 = (static_cast<std::uint64_t>(w[2]) << 32) | w[3];
    // 53-bit mantissa, offset by half an ulp so 0 is excluded.
    const double a = (static_cast<double>(u0 >> 11) + 0.5) * 0x1.0p-53;
    const double b = (static_cast<double>(u1 >> 11) + 0.5) * 0x1.0p-53;
    return {a, b};
}

// Two independent standard normals via Box-Muller.
inline std::array<double, 2> normal_pair(std::uint64_t seed, std::uint64_t stream,
                                         std::uint64_t index) {
    const auto u = uniform_pair(seed, stream, index);
    const double r = std::sqrt(-2.0 * std::log(u[0]));
    const double theta = 6.283185307179586476925286766559 * u[1];
    return {r * std::cos(theta), r * std::sin(theta)};
}

inline double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return normal_pair(seed, stream, index)[0];
}

// Unbiased-to-2^-64 integer in [0, n).
inline std::uint64_t uniform_index(std::uint64_t seed, std::uint64_t stream,
                                   std::uint64_t index, std::uint64_t n) {
    const auto w = Philox4x32::block(seed, stream, index);
    const std::uint64_t u = (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(u) * n) >> 64);
}

// Distinct stream domains so module-internal draws never collide with
// user-facing replica streams sharing a seed.
constexpr std::uint64_t kStreamDomainField = 0;
constexpr std::uint64_t kStreamDomainWalk = 1ull << 56;
constexpr std::uint64_t kStreamDomainTest = 2ull << 56;

}  // namespace bmlab::rng
