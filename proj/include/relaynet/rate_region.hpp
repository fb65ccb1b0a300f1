#pragma once

// Mixed DF/CF achievable rate for a fixed channel realization: destination
// and relay decoding terms with their max-min subset structure, the
// feasibility families controlling which compressions may be used, and the
// cut-based upper bound.
//
// Subsets of relays are bitmasks with bit (k-1) standing for relay k.

#include <cstdint>
#include <vector>

#include "relaynet/channel.hpp"
#include "relaynet/covariance.hpp"

namespace relaynet {

struct DestBreakdown {
    double value = 0.0;
    std::uint32_t best_t = 0;
    std::uint32_t worst_s = 0;
};

struct RelayBreakdown {
    int relay = 0;
    double value = 0.0;
    std::uint32_t best_t = 0;
    std::uint32_t worst_s = 0;
    std::vector<std::uint32_t> excluded_t; // subsets rejected by the feasibility family
};

struct RateBreakdown {
    double rate = 0.0; // min of the parts, clamped at 0
    DestBreakdown dest;
    std::vector<RelayBreakdown> relay_terms; // one per DF relay, ascending
};

/// Destination decoding term R_T(S) for S subseteq T subseteq V; may be
/// negative (callers take the max-min).
double rate_dest_term(const CovarianceMap& sigma, StrategyAssignment cf_set, std::uint32_t t_mask,
                      std::uint32_t s_mask);

/// Decoding term of DF relay k exploiting compressions T_k, S subseteq
/// T_k. In Selective mode the conditioning uses all N potential DF
/// codewords instead of the transmitted DF inputs.
double rate_relay_term(const CovarianceMap& sigma, StrategyAssignment cf_set, int relay,
                       std::uint32_t t_mask, std::uint32_t s_mask,
                       EvalMode mode = EvalMode::Theorem1);

/// Feasibility margins whose sign determines membership of T in the
/// destination/relay feasibility families. S = empty returns exactly 0.
double q_dest(const CovarianceMap& sigma, StrategyAssignment cf_set, std::uint32_t t_mask,
              std::uint32_t s_mask);
double q_relay(const CovarianceMap& sigma, StrategyAssignment cf_set, int relay,
               std::uint32_t t_mask, std::uint32_t s_mask, EvalMode mode = EvalMode::Theorem1);

/// Full mixed-strategy rate for one realization: destination max over all
/// T subseteq V of the min over S, relay terms maximized over feasible
/// T_k only, overall min clamped at 0. Enforces n_relays <= 16.
RateBreakdown i_cmnnc(const CovarianceMap& sigma, StrategyAssignment cf_set,
                      EvalMode mode = EvalMode::Theorem1);

/// Min over the 2^N source-side cuts of I(X X_S; Z_{S^c} Y_1 | X_{S^c})
/// for one jointly-Gaussian input covariance over (X, X_1..X_N).
double cutset_min_cut(const NetworkTopology& topology, const ChannelRealization& theta,
                      const Eigen::MatrixXcd& input_covariance);

/// Cut bound maximized over a family of input covariances generated from
/// the correlation grid: per-relay real-valued correlations matching the
/// achievable schemes' input laws, plus a common-correlation family with
/// phases aligned to the destination links.
double rate_cutset(const NetworkTopology& topology, const ChannelRealization& theta,
                   const std::vector<double>& correlation_grid);

} // namespace relaynet
