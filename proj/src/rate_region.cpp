#include "relaynet/rate_region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace relaynet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

VarSet relay_inputs_of(std::uint32_t mask) {
    VarSet out;
    for (int k = 1; mask; ++k, mask >>= 1)
        if (mask & 1u) out.push_back(relay_input(k));
    return out;
}

VarSet relay_outputs_of(std::uint32_t mask) {
    VarSet out;
    for (int k = 1; mask; ++k, mask >>= 1)
        if (mask & 1u) out.push_back(relay_output(k));
    return out;
}

VarSet compressed_of(std::uint32_t mask) {
    VarSet out;
    for (int k = 1; mask; ++k, mask >>= 1)
        if (mask & 1u) out.push_back(compressed_output(k));
    return out;
}

void append(VarSet& dst, const VarSet& src) { dst.insert(dst.end(), src.begin(), src.end()); }

int relay_count(const CovarianceMap& sigma) {
    int n = 0;
    for (const auto& v : sigma.variables())
        if (v.kind == VarKind::RelayOutput) ++n;
    return n;
}

std::uint32_t df_mask(StrategyAssignment cf_set, int n_relays) {
    const std::uint32_t all = n_relays >= 32 ? ~0u : ((1u << n_relays) - 1u);
    return all & ~cf_set.cf_mask;
}

// DF conditioning block: the transmitted DF inputs, or all N potential DF
// codewords in Selective mode.
VarSet df_conditioning(StrategyAssignment cf_set, int n_relays, EvalMode mode) {
    VarSet out;
    for (int k = 1; k <= n_relays; ++k) {
        if (!cf_set.is_cf(k))
            out.push_back(relay_input(k));
        else if (mode == EvalMode::Selective)
            out.push_back(df_codeword(k));
    }
    return out;
}

void check_nested(std::uint32_t v, std::uint32_t t, std::uint32_t s) {
    if ((t & ~v) || (s & ~t)) throw ModelError("subset arguments must satisfy S <= T <= V");
}

} // namespace

double rate_dest_term(const CovarianceMap& sigma, StrategyAssignment cf_set, std::uint32_t t_mask,
                      std::uint32_t s_mask) {
    const int n = relay_count(sigma);
    check_nested(cf_set.cf_mask, t_mask, s_mask);
    const std::uint32_t sc_mask = t_mask & ~s_mask;

    VarSet a{source_input()};
    append(a, relay_inputs_of(df_mask(cf_set, n)));
    append(a, relay_inputs_of(s_mask));
    VarSet b = compressed_of(sc_mask);
    b.push_back(dest_output());
    const VarSet c = relay_inputs_of(sc_mask);
    const double mi1 = conditional_mi(sigma, a, b, c);

    double mi2 = 0.0;
    if (s_mask) {
        VarSet cc{source_input()};
        append(cc, relay_inputs_of(t_mask | df_mask(cf_set, n)));
        append(cc, compressed_of(sc_mask));
        cc.push_back(dest_output());
        mi2 = conditional_mi(sigma, relay_outputs_of(s_mask), compressed_of(s_mask), cc);
    }
    return mi1 - mi2;
}

double rate_relay_term(const CovarianceMap& sigma, StrategyAssignment cf_set, int relay,
                       std::uint32_t t_mask, std::uint32_t s_mask, EvalMode mode) {
    const int n = relay_count(sigma);
    check_nested(cf_set.cf_mask, t_mask, s_mask);
    if (cf_set.is_cf(relay)) throw ModelError("relay term requested for a CF relay");
    const std::uint32_t sc_mask = t_mask & ~s_mask;
    const VarSet xc = df_conditioning(cf_set, n, mode);

    VarSet b = compressed_of(t_mask);
    b.push_back(relay_output(relay));
    VarSet c = xc;
    append(c, relay_inputs_of(t_mask));
    const double mi_a = conditional_mi(sigma, {source_input()}, b, c);

    double mi_b = 0.0, mi_c = 0.0;
    if (s_mask) {
        VarSet cb = xc;
        append(cb, relay_inputs_of(sc_mask));
        mi_b = conditional_mi(sigma, relay_inputs_of(s_mask), {relay_output(relay)}, cb);

        VarSet cc = xc;
        append(cc, relay_inputs_of(t_mask));
        append(cc, compressed_of(sc_mask));
        cc.push_back(relay_output(relay));
        mi_c = conditional_mi(sigma, compressed_of(s_mask), relay_outputs_of(s_mask), cc);
    }
    return mi_a + mi_b - mi_c;
}

double q_dest(const CovarianceMap& sigma, StrategyAssignment cf_set, std::uint32_t t_mask,
              std::uint32_t s_mask) {
    const int n = relay_count(sigma);
    check_nested(cf_set.cf_mask, t_mask, s_mask);
    if (!s_mask) return 0.0;
    const std::uint32_t sc_mask = t_mask & ~s_mask;

    VarSet b = compressed_of(sc_mask);
    b.push_back(dest_output());
    VarSet c{source_input()};
    append(c, relay_inputs_of(sc_mask | df_mask(cf_set, n)));
    const double mi1 = conditional_mi(sigma, relay_inputs_of(s_mask), b, c);

    VarSet cc{source_input()};
    append(cc, relay_inputs_of(t_mask | df_mask(cf_set, n)));
    append(cc, compressed_of(sc_mask));
    cc.push_back(dest_output());
    const double mi2 = conditional_mi(sigma, relay_outputs_of(s_mask), compressed_of(s_mask), cc);
    return mi1 - mi2;
}

double q_relay(const CovarianceMap& sigma, StrategyAssignment cf_set, int relay,
               std::uint32_t t_mask, std::uint32_t s_mask, EvalMode mode) {
    const int n = relay_count(sigma);
    check_nested(cf_set.cf_mask, t_mask, s_mask);
    if (cf_set.is_cf(relay)) throw ModelError("feasibility margin requested for a CF relay");
    if (!s_mask) return 0.0;
    const std::uint32_t sc_mask = t_mask & ~s_mask;
    const VarSet xc = df_conditioning(cf_set, n, mode);

    VarSet cb = xc;
    append(cb, relay_inputs_of(sc_mask));
    const double mi1 = conditional_mi(sigma, relay_inputs_of(s_mask), {relay_output(relay)}, cb);

    VarSet cc{source_input()};
    append(cc, xc);
    append(cc, relay_inputs_of(t_mask));
    append(cc, compressed_of(sc_mask));
    cc.push_back(relay_output(relay));
    const double mi2 = conditional_mi(sigma, compressed_of(s_mask), relay_outputs_of(s_mask), cc);
    return mi1 - mi2;
}

RateBreakdown i_cmnnc(const CovarianceMap& sigma, StrategyAssignment cf_set, EvalMode mode) {
    const int n = relay_count(sigma);
    if (n > 16) throw ModelError("subset enumeration supports at most 16 relays");

    RateBreakdown out;
    const std::uint32_t v = cf_set.cf_mask;

    out.dest.value = -kInf;
    for (std::uint32_t t = v;; t = (t - 1) & v) {
        double worst = kInf;
        std::uint32_t worst_s = 0;
        for (std::uint32_t s = t;; s = (s - 1) & t) {
            const double val = rate_dest_term(sigma, cf_set, t, s);
            if (val < worst) {
                worst = val;
                worst_s = s;
            }
            if (s == 0) break;
        }
        if (worst > out.dest.value) {
            out.dest.value = worst;
            out.dest.best_t = t;
            out.dest.worst_s = worst_s;
        }
        if (t == 0) break;
    }

    double overall = out.dest.value;
    for (int k = 1; k <= n; ++k) {
        if (cf_set.is_cf(k)) continue;
        RelayBreakdown rb;
        rb.relay = k;
        rb.value = -kInf;
        for (std::uint32_t t = v;; t = (t - 1) & v) {
            bool feasible = true;
            for (std::uint32_t s = t; s != 0; s = (s - 1) & t) {
                if (q_relay(sigma, cf_set, k, t, s, mode) < 0.0) {
                    feasible = false;
                    break;
                }
            }
            if (!feasible) {
                rb.excluded_t.push_back(t);
            } else {
                double worst = kInf;
                std::uint32_t worst_s = 0;
                for (std::uint32_t s = t;; s = (s - 1) & t) {
                    const double val = rate_relay_term(sigma, cf_set, k, t, s, mode);
                    if (val < worst) {
                        worst = val;
                        worst_s = s;
                    }
                    if (s == 0) break;
                }
                if (worst > rb.value) {
                    rb.value = worst;
                    rb.best_t = t;
                    rb.worst_s = worst_s;
                }
            }
            if (t == 0) break;
        }
        overall = std::min(overall, rb.value);
        out.relay_terms.push_back(std::move(rb));
    }

    out.rate = std::max(0.0, overall);
    return out;
}

namespace {

// log2-determinants of principal minors, memoized by variable bitmask
class SubsetLogdet {
public:
    explicit SubsetLogdet(const Eigen::MatrixXcd& sigma) : sigma_(sigma) {
        const double tr = sigma_.real().trace();
        jitter_ = 1e-12 * tr / static_cast<double>(sigma_.rows());
    }

    double operator()(std::uint64_t mask) {
        if (mask == 0) return 0.0;
        const auto it = cache_.find(mask);
        if (it != cache_.end()) return it->second;

        std::vector<int> idx;
        for (int i = 0; i < sigma_.rows(); ++i)
            if ((mask >> i) & 1u) idx.push_back(i);
        Eigen::MatrixXcd sub(idx.size(), idx.size());
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t c = 0; c < idx.size(); ++c)
                sub(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    sigma_(idx[r], idx[c]);
        sub.diagonal().array() += jitter_;

        const Eigen::LLT<Eigen::MatrixXcd> llt(sub);
        if (llt.info() != Eigen::Success)
            throw SingularConditioning("principal minor is not positive definite");
        double ld = 0.0;
        for (Eigen::Index i = 0; i < sub.rows(); ++i)
            ld += 2.0 * std::log2(llt.matrixLLT()(i, i).real());
        cache_.emplace(mask, ld);
        return ld;
    }

private:
    const Eigen::MatrixXcd& sigma_;
    double jitter_ = 0.0;
    std::unordered_map<std::uint64_t, double> cache_;
};

} // namespace

double cutset_min_cut(const NetworkTopology& topology, const ChannelRealization& theta,
                      const Eigen::MatrixXcd& input_covariance) {
    const int n = topology.n_relays();
    const CovarianceMap joint = assemble_covariance_with_inputs(topology, theta, input_covariance);
    SubsetLogdet ld(joint.matrix());

    // variable layout: X=0, X_k=k, Z_k=n+k, Y1=2n+1
    const auto x_bit = [](int k) { return std::uint64_t{1} << k; };
    const auto z_bit = [n](int k) { return std::uint64_t{1} << (n + k); };
    const std::uint64_t y_bit = std::uint64_t{1} << (2 * n + 1);

    double best = kInf;
    const std::uint32_t all = n >= 32 ? ~0u : ((1u << n) - 1u);
    for (std::uint32_t s = 0; s <= all; ++s) {
        std::uint64_t a = x_bit(0);
        std::uint64_t b = y_bit;
        std::uint64_t c = 0;
        for (int k = 1; k <= n; ++k) {
            if ((s >> (k - 1)) & 1u)
                a |= x_bit(k);
            else {
                b |= z_bit(k);
                c |= x_bit(k);
            }
        }
        // I(A;B|C) from four joint log-determinants
        const double mi = std::max(0.0, ld(a | c) + ld(b | c) - ld(c) - ld(a | b | c));
        best = std::min(best, mi);
        if (all == 0) break;
    }
    return best;
}

double rate_cutset(const NetworkTopology& topology, const ChannelRealization& theta,
                   const std::vector<double>& correlation_grid) {
    const int n = topology.n_relays();
    for (double rho : correlation_grid)
        if (!(rho >= 0.0 && rho < 1.0)) throw ModelError("correlation grid values must lie in [0, 1)");

    const double p = topology.source_power();
    std::vector<Eigen::MatrixXcd> candidates;

    // per-relay real correlations with mutually independent relay inputs,
    // matching the achievable schemes' input family
    if (n <= 6) {
        std::vector<std::size_t> pick(n, 0);
        const std::size_t g = correlation_grid.size();
        const std::size_t total = [&] {
            std::size_t t = 1;
            for (int i = 0; i < n; ++i) t *= g;
            return t;
        }();
        for (std::size_t it = 0; it < total; ++it) {
            std::size_t rem = it;
            double budget = 0.0;
            std::vector<double> rho(n);
            for (int i = 0; i < n; ++i) {
                rho[i] = correlation_grid[rem % g];
                rem /= g;
                budget += rho[i] * rho[i];
            }
            if (budget > 1.0) continue;
            Eigen::MatrixXcd sigma = Eigen::MatrixXcd::Zero(n + 1, n + 1);
            sigma(0, 0) = p;
            for (int k = 1; k <= n; ++k) {
                sigma(k, k) = topology.relay_power(k);
                sigma(0, k) = sigma(k, 0) = rho[k - 1] * std::sqrt(p * topology.relay_power(k));
            }
            candidates.push_back(std::move(sigma));
        }
    }

    // common correlation magnitude through a shared factor, phases aligned
    // to the destination links (conjugate beamforming)
    std::vector<double> phase(n + 1, 0.0);
    phase[0] = -std::arg(theta.gain(topology.link_source_to_dest()));
    for (int k = 1; k <= n; ++k) phase[k] = -std::arg(theta.gain(topology.link_relay_to_dest(k)));
    for (double rho : correlation_grid) {
        Eigen::MatrixXcd sigma(n + 1, n + 1);
        const auto power = [&](int i) { return i == 0 ? p : topology.relay_power(i); };
        for (int i = 0; i <= n; ++i) {
            for (int j = 0; j <= n; ++j) {
                if (i == j) {
                    sigma(i, j) = power(i);
                } else {
                    const double mag = (i == 0 || j == 0) ? rho : rho * rho;
                    sigma(i, j) = mag * std::sqrt(power(i) * power(j)) *
                                  std::exp(std::complex<double>(0.0, phase[i] - phase[j]));
                }
            }
        }
        candidates.push_back(std::move(sigma));
    }

    double best = -kInf;
    std::size_t failures = 0;
    for (const auto& sigma : candidates) {
        try {
            best = std::max(best, cutset_min_cut(topology, theta, sigma));
        } catch (const SingularConditioning&) {
            ++failures;
        }
    }
    if (failures == candidates.size())
        throw SingularConditioning("every cut-bound input candidate was singular");
    return best;
}

} // namespace relaynet
