#pragma once

// Counter-based random number generation (Philox 4x32-10).
// Salmon et al., "Parallel random numbers: as easy as 1, 2, 3", SC 2011.
//
// Every draw in the simulator is a pure function of
// (seed, outer index, substream, inner index, component), so results are
// reproducible regardless of thread count or evaluation order.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace relaynet::rng {

namespace detail {
inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(p);
    hi = static_cast<std::uint32_t>(p >> 32);
}
} // namespace detail

inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t kM0 = 0xD2511F53u;
    constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u;
    constexpr std::uint32_t kW1 = 0xBB67AE85u;

    for (int round = 0; round < 10; ++round) {
        std::uint32_t lo0, hi0, lo1, hi1;
        detail::mul_hi_lo(kM0, ctr[0], lo0, hi0);
        detail::mul_hi_lo(kM1, ctr[2], lo1, hi1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kW0;
        key[1] += kW1;
    }
    return ctr;
}

/// Identifies one independent draw. `outer` indexes the channel
/// realization, `substream` separates usage domains within a realization
/// (realization itself, estimator inner draws, decision-rule inner draws),
/// `inner` indexes the conditional redraw and `component` the scalar
/// random component (one per link, plus path-loss distances).
struct DrawKey {
    std::uint32_t outer = 0;
    std::uint32_t substream = 0;
    std::uint32_t inner = 0;
    std::uint32_t component = 0;
};

inline constexpr std::uint32_t kSubstreamRealization = 0;
inline constexpr std::uint32_t kSubstreamEstimator = 1;
inline constexpr std::uint32_t kSubstreamDecision = 2;

inline std::array<std::uint32_t, 4> block(std::uint64_t seed, const DrawKey& k) {
    return philox4x32({k.outer, k.substream, k.inner, k.component},
                      {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
}

/// Uniform draw on (0, 1]; never returns 0 so log() is always safe.
inline double uniform(std::uint64_t seed, const DrawKey& k) {
    const auto b = block(seed, k);
    const std::uint64_t bits = (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

/// Circularly symmetric complex Gaussian with E|z|^2 = variance.
inline std::complex<double> complex_normal(std::uint64_t seed, const DrawKey& k, double variance) {
    const auto b = block(seed, k);
    const std::uint64_t bits1 = (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
    const std::uint64_t bits2 = (static_cast<std::uint64_t>(b[2]) << 32) | b[3];
    const double u1 = static_cast<double>((bits1 >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>((bits2 >> 11) + 1) * 0x1.0p-53;
    const double amplitude = std::sqrt(-variance * std::log(u1));
    const double phase = 2.0 * M_PI * u2;
    return {amplitude * std::cos(phase), amplitude * std::sin(phase)};
}

} // namespace relaynet::rng
