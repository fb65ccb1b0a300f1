#include "relaynet/channel.hpp"

#include <cmath>

namespace relaynet {

namespace {

void check_positive(double v, const char* what) {
    if (!(v > 0.0)) throw ModelError(std::string(what) + " must be positive");
}

} // namespace

NetworkTopology::NetworkTopology(int n_relays, double source_power,
                                 std::vector<double> relay_powers,
                                 std::vector<double> relay_noise_variances,
                                 double dest_noise_variance, std::vector<GainModel> links)
    : n_relays_(n_relays),
      source_power_(source_power),
      relay_powers_(std::move(relay_powers)),
      relay_noise_(std::move(relay_noise_variances)),
      dest_noise_(dest_noise_variance),
      links_(std::move(links)) {
    if (n_relays_ < 0) throw ModelError("n_relays must be nonnegative");
    check_positive(source_power_, "source_power");
    if (relay_powers_.size() != static_cast<std::size_t>(n_relays_) ||
        relay_noise_.size() != static_cast<std::size_t>(n_relays_))
        throw ModelError("relay parameter vectors must have n_relays entries");
    for (double p : relay_powers_) check_positive(p, "relay power");
    for (double v : relay_noise_) check_positive(v, "relay noise variance");
    check_positive(dest_noise_, "destination noise variance");

    const std::size_t expected = static_cast<std::size_t>(n_relays_) + 1 +
                                 static_cast<std::size_t>(n_relays_) * (n_relays_ - 1 > 0 ? n_relays_ - 1 : 0) +
                                 static_cast<std::size_t>(n_relays_);
    if (links_.size() != expected) throw ModelError("unexpected number of links");
    for (const auto& l : links_) {
        if (l.kind == GainModel::Kind::Rayleigh) check_positive(l.variance, "fading variance");
        if (l.path_loss) {
            if (!(l.path_loss->d_lo >= 0.0 && l.path_loss->d_lo < l.path_loss->d_hi))
                throw ModelError("path loss range requires 0 <= lo < hi");
            if (!(l.path_loss->alpha >= 0.0)) throw ModelError("path loss exponent must be >= 0");
        }
    }
}

int NetworkTopology::link_source_to_relay(int k) const { return k - 1; }

int NetworkTopology::link_source_to_dest() const { return n_relays_; }

int NetworkTopology::link_relay_to_relay(int j, int k) const {
    // relays j -> k with k != j, row-major over j, ascending k skipping j
    const int base = n_relays_ + 1;
    const int row = (j - 1) * (n_relays_ - 1);
    const int col = (k < j) ? (k - 1) : (k - 2);
    return base + row + col;
}

int NetworkTopology::link_relay_to_dest(int k) const {
    return n_relays_ + 1 + n_relays_ * (n_relays_ > 1 ? n_relays_ - 1 : 0) + (k - 1);
}

bool NetworkTopology::link_visible_to_relays(int index) const {
    if (index == link_source_to_dest()) return false;
    for (int k = 1; k <= n_relays_; ++k)
        if (index == link_relay_to_dest(k)) return false;
    return true;
}

namespace {

std::complex<double> draw_link_gain(const NetworkTopology& topology, int link, std::uint64_t seed,
                                    std::uint32_t outer, std::uint32_t substream,
                                    std::uint32_t inner, double* distance_out) {
    const GainModel& model = topology.link(link);
    std::complex<double> g = model.value;
    if (model.kind == GainModel::Kind::Rayleigh) {
        g = rng::complex_normal(seed, {outer, substream, inner, static_cast<std::uint32_t>(link)},
                                model.variance);
    }
    if (model.path_loss) {
        const auto& pl = *model.path_loss;
        const double u = rng::uniform(
            seed, {outer, substream, inner,
                   static_cast<std::uint32_t>(topology.n_links() + link)});
        const double d = pl.d_lo + (pl.d_hi - pl.d_lo) * u; // in (d_lo, d_hi]
        g /= std::pow(d, pl.alpha);
        if (distance_out) *distance_out = d;
    }
    return g;
}

} // namespace

ChannelRealization sample_realization(const NetworkTopology& topology, std::uint64_t seed,
                                      std::uint32_t outer_index) {
    ChannelRealization out;
    out.gains.resize(topology.n_links());
    out.visible_to_relays.resize(topology.n_links());
    for (int link = 0; link < topology.n_links(); ++link) {
        out.gains[link] = draw_link_gain(topology, link, seed, outer_index,
                                         rng::kSubstreamRealization, 0, &out.distance);
        out.visible_to_relays[link] = topology.link_visible_to_relays(link);
    }
    return out;
}

ChannelRealization resample_destination_links(const NetworkTopology& topology,
                                              const ChannelRealization& base, std::uint64_t seed,
                                              std::uint32_t outer_index, std::uint32_t substream,
                                              std::uint32_t inner_index) {
    ChannelRealization out = base;
    for (int link = 0; link < topology.n_links(); ++link) {
        if (!topology.link_visible_to_relays(link))
            out.gains[link] =
                draw_link_gain(topology, link, seed, outer_index, substream, inner_index, nullptr);
    }
    return out;
}

Eigen::MatrixXcd policy_input_covariance(const NetworkTopology& topology, const InputPolicy& inputs,
                                         StrategyAssignment cf_set, EvalMode mode) {
    const int n = topology.n_relays();
    if (inputs.df_correlations.size() != static_cast<std::size_t>(n))
        throw ModelError("df_correlations must have one entry per relay");

    double rho_budget = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double rho = inputs.df_correlations[k - 1];
        if (!(rho >= 0.0 && rho < 1.0)) throw ModelError("df correlation must lie in [0, 1)");
        const bool enters = (mode == EvalMode::Selective) || !cf_set.is_cf(k);
        if (enters) rho_budget += rho * rho;
    }
    if (rho_budget > 1.0 + 1e-12)
        throw ModelError("df correlations violate the input power budget (sum of rho^2 > 1)");

    const double p = topology.source_power();
    Eigen::MatrixXcd sigma = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    sigma(0, 0) = p;
    for (int k = 1; k <= n; ++k) {
        sigma(k, k) = topology.relay_power(k);
        if (!cf_set.is_cf(k)) {
            const double rho = inputs.df_correlations[k - 1];
            sigma(0, k) = sigma(k, 0) = rho * std::sqrt(p * topology.relay_power(k));
        }
    }
    return sigma;
}

namespace {

// Common assembly: W is the jointly Gaussian "input side" block (source,
// transmitted relay inputs, optional untransmitted DF codewords); the
// observation rows are linear in the transmitted inputs plus receiver
// noise, with Zhat_k sharing the Z_k noise and adding its own.
CovarianceMap assemble_joint(const NetworkTopology& topology, const ChannelRealization& theta,
                             const Eigen::MatrixXcd& sigma_w, const std::vector<VariableId>& w_vars,
                             StrategyAssignment cf_set, const CompressionPolicy* compression,
                             bool include_compressed) {
    const int n = topology.n_relays();
    const int m0 = static_cast<int>(w_vars.size());

    std::vector<int> cf_relays;
    for (int k = 1; k <= n; ++k)
        if (include_compressed && cf_set.is_cf(k)) cf_relays.push_back(k);

    if (include_compressed && !cf_relays.empty()) {
        if (!compression || compression->sigma_hat_sq.size() < static_cast<std::size_t>(n))
            throw ModelError("compression policy must define sigma_hat_sq for every CF relay");
        for (int k : cf_relays)
            if (!(compression->sigma_hat_sq[k - 1] > 0.0))
                throw ModelError("compression noise variance must be strictly positive");
    }

    const int n_obs = n + static_cast<int>(cf_relays.size()) + 1;

    // coefficient rows over W: relay outputs, compressed outputs, destination
    Eigen::MatrixXcd coef = Eigen::MatrixXcd::Zero(n_obs, m0);
    Eigen::MatrixXcd noise = Eigen::MatrixXcd::Zero(n_obs, n_obs);

    auto input_col = [&](int k) { return k; }; // w_vars[0]=X, w_vars[k]=X_k for k=1..n

    for (int k = 1; k <= n; ++k) {
        const int row = k - 1;
        coef(row, 0) = theta.gain(topology.link_source_to_relay(k));
        for (int j = 1; j <= n; ++j)
            if (j != k) coef(row, input_col(j)) = theta.gain(topology.link_relay_to_relay(j, k));
        noise(row, row) = topology.relay_noise_variance(k);
    }
    for (std::size_t i = 0; i < cf_relays.size(); ++i) {
        const int k = cf_relays[i];
        const int row = n + static_cast<int>(i);
        coef.row(row) = coef.row(k - 1);
        noise(row, row) = topology.relay_noise_variance(k) + compression->sigma_hat_sq[k - 1];
        noise(row, k - 1) = noise(k - 1, row) = topology.relay_noise_variance(k);
    }
    const int dest_row = n_obs - 1;
    coef(dest_row, 0) = theta.gain(topology.link_source_to_dest());
    for (int k = 1; k <= n; ++k)
        coef(dest_row, input_col(k)) = theta.gain(topology.link_relay_to_dest(k));
    noise(dest_row, dest_row) = topology.dest_noise_variance();

    const Eigen::MatrixXcd cross = sigma_w * coef.adjoint();
    Eigen::MatrixXcd obs = coef * cross + noise;
    obs = 0.5 * (obs + obs.adjoint()).eval();

    const int dim = m0 + n_obs;
    Eigen::MatrixXcd full(dim, dim);
    full.topLeftCorner(m0, m0) = sigma_w;
    full.topRightCorner(m0, n_obs) = cross;
    full.bottomLeftCorner(n_obs, m0) = cross.adjoint();
    full.bottomRightCorner(n_obs, n_obs) = obs;

    std::vector<VariableId> order = w_vars;
    for (int k = 1; k <= n; ++k) order.push_back(relay_output(k));
    for (int k : cf_relays) order.push_back(compressed_output(k));
    order.push_back(dest_output());

    return CovarianceMap(std::move(full), std::move(order));
}

} // namespace

CovarianceMap assemble_covariance(const NetworkTopology& topology, const ChannelRealization& theta,
                                  const InputPolicy& inputs, const CompressionPolicy& compression,
                                  StrategyAssignment cf_set, EvalMode mode) {
    const int n = topology.n_relays();
    Eigen::MatrixXcd sigma_tx = policy_input_covariance(topology, inputs, cf_set, mode);

    std::vector<VariableId> w_vars;
    w_vars.push_back(source_input());
    for (int k = 1; k <= n; ++k) w_vars.push_back(relay_input(k));

    Eigen::MatrixXcd sigma_w;
    if (mode == EvalMode::Theorem1) {
        sigma_w = std::move(sigma_tx);
    } else {
        // untransmitted DF codewords of CF relays: independent of
        // everything except the source superposition
        std::vector<int> cf_relays;
        for (int k = 1; k <= n; ++k)
            if (cf_set.is_cf(k)) cf_relays.push_back(k);
        const int m0 = n + 1 + static_cast<int>(cf_relays.size());
        sigma_w = Eigen::MatrixXcd::Zero(m0, m0);
        sigma_w.topLeftCorner(n + 1, n + 1) = sigma_tx;
        for (std::size_t i = 0; i < cf_relays.size(); ++i) {
            const int k = cf_relays[i];
            const int idx = n + 1 + static_cast<int>(i);
            const double rho = inputs.df_correlations[k - 1];
            sigma_w(idx, idx) = topology.relay_power(k);
            sigma_w(0, idx) = sigma_w(idx, 0) =
                rho * std::sqrt(topology.source_power() * topology.relay_power(k));
            w_vars.push_back(df_codeword(k));
        }
    }

    return assemble_joint(topology, theta, sigma_w, w_vars, cf_set, &compression, true);
}

CovarianceMap assemble_covariance_with_inputs(const NetworkTopology& topology,
                                              const ChannelRealization& theta,
                                              const Eigen::MatrixXcd& input_covariance) {
    const int n = topology.n_relays();
    if (input_covariance.rows() != n + 1 || input_covariance.cols() != n + 1)
        throw ModelError("input covariance must be (n_relays+1) x (n_relays+1)");
    std::vector<VariableId> w_vars;
    w_vars.push_back(source_input());
    for (int k = 1; k <= n; ++k) w_vars.push_back(relay_input(k));
    return assemble_joint(topology, theta, input_covariance, w_vars, StrategyAssignment{0}, nullptr,
                          false);
}

} // namespace relaynet
