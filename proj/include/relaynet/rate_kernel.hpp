#pragma once

// Optimized evaluator of the mixed-strategy rate across many
// destination-side fading draws for one relay-side realization and policy.
//
// Everything that does not involve the destination output Y1 is computed
// once: relay decoding terms and feasibility checks depend only on
// theta_r, and each destination-side log-determinant splits as
//   log2 det Sigma_{G + Y1} = log2 det Sigma_G + log2 condvar(Y1 | G),
// where condvar(Y1 | G) = sigma_d^2 + u^H A_G u is a quadratic form in the
// destination link gains u with a matrix A_G precomputed per subset G.
// Per draw, a destination term costs a handful of small dot products and
// one log2.
//
// This path is verified against the reference i_cmnnc evaluation in the
// test suite; the only intentional difference is that per-MI clamping at
// zero is skipped inside destination terms (effect <= 1e-12 bits).

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "relaynet/channel.hpp"

namespace relaynet {

namespace detail {
struct KernelPlan;
}

class ConditionalRateEvaluator {
public:
    ConditionalRateEvaluator(const NetworkTopology& topology, const ChannelRealization& theta_r,
                             const InputPolicy& inputs, const CompressionPolicy& compression,
                             StrategyAssignment cf_set, EvalMode mode);

    /// A principal minor failed to factor during precompute; rate values
    /// are unusable and the caller should count the draw as singular.
    bool singular() const { return singular_; }

    /// min over DF relays of their decoding bound; +inf when every relay
    /// compresses. Independent of the destination-side draw.
    double relay_bound() const { return relay_bound_; }
    const std::vector<int>& relay_ids() const { return relay_ids_; }
    const std::vector<double>& relay_values() const { return relay_values_; }

    /// Destination max-min term for one draw of the destination link
    /// gains; `dest_gains` has n_relays+1 entries ordered source->dest,
    /// relay 1->dest, .., relay N->dest. Not safe for concurrent calls on
    /// one instance (uses internal scratch).
    double dest_rate(const std::complex<double>* dest_gains) const;

    /// Full rate: min(dest, relay bound), clamped at zero.
    double rate(const std::complex<double>* dest_gains) const;

    int n_dest_gains() const { return n_ + 1; }

private:
    void precompute(const NetworkTopology& topology, const ChannelRealization& theta_r,
                    const InputPolicy& inputs, const CompressionPolicy& compression);

    int n_ = 0;
    std::shared_ptr<const detail::KernelPlan> plan_;
    bool singular_ = false;
    double dest_noise_ = 1.0;
    double relay_bound_ = 0.0;
    std::vector<int> relay_ids_;
    std::vector<double> relay_values_;

    // destination term evaluation data
    struct DestTermData {
        double base = 0.0;
        std::uint8_t n_num = 0, n_den = 0;
        std::uint16_t slots[8] = {0, 0, 0, 0, 0, 0, 0, 0}; // numerators then denominators
    };
    std::vector<DestTermData> dest_terms_;
    std::vector<int> dest_t_offsets_; // start index per T, plus one past the end
    std::vector<double> a_packed_;    // per Y1-subset: packed quadratic form
    int a_stride_ = 0;
    mutable std::vector<double> scratch_u_; // packed |u|^2 and cross products
    mutable std::vector<double> scratch_v_; // per-subset conditional variances
};

/// Draws the gain of one link for a conditional redraw, identical to the
/// draws used by resample_destination_links.
std::complex<double> sample_link_gain(const NetworkTopology& topology, int link,
                                      std::uint64_t seed, std::uint32_t outer_index,
                                      std::uint32_t substream, std::uint32_t inner_index);

/// Fills `out[0..n]` with the destination link gains (source->dest,
/// relay k->dest) for inner draw `inner_index`.
void draw_destination_gains(const NetworkTopology& topology, std::uint64_t seed,
                            std::uint32_t outer_index, std::uint32_t substream,
                            std::uint32_t inner_index, std::complex<double>* out);

} // namespace relaynet
