#pragma once

// Composite Gaussian relay network model: static topology, per-draw channel
// realizations, input/compression policies, and assembly of the joint
// covariance consumed by the rate expressions.
//
// Channel equations, with g the per-link gains (path loss folded in):
//   Z_k = g_{0k} X + sum_{j != k} g_{jk} X_j + N_k
//   Y_1 = g_{0d} X + sum_k g_{kd} X_k + N_d
//   Zhat_k = Z_k + Nhat_k                      (CF relays only)
// The relays observe every link gain except those into the destination.

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "relaynet/covariance.hpp"
#include "relaynet/errors.hpp"
#include "relaynet/philox.hpp"

namespace relaynet {

/// Random distance with gain divided by d^alpha; drawn once per
/// realization, visible to the relays.
struct PathLoss {
    double d_lo = 0.0;
    double d_hi = 0.1;
    double alpha = 1.0;
};

struct GainModel {
    enum class Kind { Rayleigh, Constant };
    Kind kind = Kind::Rayleigh;
    double variance = 1.0;               // Rayleigh: E|h|^2
    std::complex<double> value{0.0, 0.0}; // Constant
    std::optional<PathLoss> path_loss;
};

/// CF relay subset. Bit (k-1) set means relay k compresses; the
/// complement decodes-and-forwards.
struct StrategyAssignment {
    std::uint32_t cf_mask = 0;

    bool is_cf(int k) const { return (cf_mask >> (k - 1)) & 1u; }
    static StrategyAssignment all_cf(int n_relays) {
        return {n_relays >= 32 ? ~0u : ((1u << n_relays) - 1u)};
    }
    friend bool operator==(const StrategyAssignment&, const StrategyAssignment&) = default;
};

class NetworkTopology {
public:
    NetworkTopology(int n_relays, double source_power, std::vector<double> relay_powers,
                    std::vector<double> relay_noise_variances, double dest_noise_variance,
                    std::vector<GainModel> links);

    int n_relays() const { return n_relays_; }
    double source_power() const { return source_power_; }
    double relay_power(int k) const { return relay_powers_[k - 1]; }
    double relay_noise_variance(int k) const { return relay_noise_[k - 1]; }
    double dest_noise_variance() const { return dest_noise_; }

    // Link index space: [0, n_links). Order: source->relay k, then
    // source->dest, then relay j -> relay k (j != k, row-major), then
    // relay k -> dest.
    int n_links() const { return static_cast<int>(links_.size()); }
    int link_source_to_relay(int k) const;
    int link_source_to_dest() const;
    int link_relay_to_relay(int j, int k) const;
    int link_relay_to_dest(int k) const;
    const GainModel& link(int index) const { return links_[index]; }

    /// Links whose gains belong to theta_d (unknown at the relays): all
    /// links into the destination.
    bool link_visible_to_relays(int index) const;

private:
    int n_relays_;
    double source_power_;
    std::vector<double> relay_powers_;
    std::vector<double> relay_noise_;
    double dest_noise_;
    std::vector<GainModel> links_;
};

/// One draw theta = (theta_r, theta_d): complex gain per link with path
/// loss already folded in, plus the relay-visibility partition.
struct ChannelRealization {
    std::vector<std::complex<double>> gains;
    std::vector<bool> visible_to_relays;
    double distance = 1.0; // drawn path-loss distance (last link that has one)

    std::complex<double> gain(int link) const { return gains[link]; }
};

/// Correlation between the source input and each relay's DF codeword.
/// The source input decomposes as X = sum_k c_k X_k^{(1)} + X' with
/// mutually independent codewords, so sum of rho_k^2 over the relays that
/// actually enter the superposition must stay <= 1.
struct InputPolicy {
    std::vector<double> df_correlations; // size n_relays, each in [0, 1)
};

/// Compression noise variance per relay; only entries of CF relays are
/// meaningful and they must be strictly positive.
struct CompressionPolicy {
    std::vector<double> sigma_hat_sq;
};

/// Rate-expression flavor: Theorem1 is the fixed mixed-strategy region;
/// Selective adds the untransmitted DF codewords of CF relays so that
/// relay-side terms can condition on all N potential DF inputs.
enum class EvalMode { Theorem1, Selective };

ChannelRealization sample_realization(const NetworkTopology& topology, std::uint64_t seed,
                                      std::uint32_t outer_index);

/// Redraws only the theta_d components (links into the destination),
/// keeping the relay-visible gains from `base`.
ChannelRealization resample_destination_links(const NetworkTopology& topology,
                                              const ChannelRealization& base, std::uint64_t seed,
                                              std::uint32_t outer_index, std::uint32_t substream,
                                              std::uint32_t inner_index);

/// Joint covariance of (X, X_1..X_N, [DF codewords of CF relays],
/// Z_1..Z_N, Zhat_k for k in V, Y_1) under the policy law. In Theorem1
/// mode CF relays' correlations are ignored (their inputs are independent
/// of the source by construction); in Selective mode every rho_k enters
/// through the corresponding codeword variable.
CovarianceMap assemble_covariance(const NetworkTopology& topology, const ChannelRealization& theta,
                                  const InputPolicy& inputs, const CompressionPolicy& compression,
                                  StrategyAssignment cf_set, EvalMode mode = EvalMode::Theorem1);

/// Covariance of (X, X_1..X_N, Z_1..Z_N, Y_1) for an arbitrary
/// jointly-Gaussian input law (used by the cut-based bound).
CovarianceMap assemble_covariance_with_inputs(const NetworkTopology& topology,
                                              const ChannelRealization& theta,
                                              const Eigen::MatrixXcd& input_covariance);

/// Input covariance over (X, X_1..X_N) implied by an InputPolicy for a
/// given CF set and mode. Entry checks mirror assemble_covariance.
Eigen::MatrixXcd policy_input_covariance(const NetworkTopology& topology, const InputPolicy& inputs,
                                         StrategyAssignment cf_set, EvalMode mode);

} // namespace relaynet
