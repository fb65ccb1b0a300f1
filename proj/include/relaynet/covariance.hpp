#pragma once

// Complex Gaussian covariance algebra: conditional covariances,
// differential entropies and conditional mutual informations via
// log-determinants. Every information term in the rate expressions is
// evaluated through this module.
//
// Conventions: circularly symmetric complex Gaussians, so
// h(A) = log2 det(pi e Sigma_A) bits (no 1/2 factor), and all mutual
// informations are in bits.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "relaynet/errors.hpp"

namespace relaynet {

enum class VarKind : std::uint8_t {
    SourceInput,      // X
    RelayInput,       // X_k, the codeword relay k actually transmits
    RelayOutput,      // Z_k
    CompressedOutput, // Zhat_k, defined for CF relays
    DestOutput,       // Y_1
    DfCodeword,       // untransmitted DF codeword of a CF relay (selective mode)
};

/// One signal variable of the joint Gaussian law. `relay` is 1-based and
/// present exactly for the relay-specific kinds.
struct VariableId {
    VarKind kind = VarKind::SourceInput;
    int relay = 0;

    friend bool operator==(const VariableId&, const VariableId&) = default;
    friend auto operator<=>(const VariableId&, const VariableId&) = default;
};

inline VariableId source_input() { return {VarKind::SourceInput, 0}; }
inline VariableId relay_input(int k) { return {VarKind::RelayInput, k}; }
inline VariableId relay_output(int k) { return {VarKind::RelayOutput, k}; }
inline VariableId compressed_output(int k) { return {VarKind::CompressedOutput, k}; }
inline VariableId dest_output() { return {VarKind::DestOutput, 0}; }
inline VariableId df_codeword(int k) { return {VarKind::DfCodeword, k}; }

std::string to_string(const VariableId& v);

using VarSet = std::vector<VariableId>;

/// Hermitian joint covariance of a set of signal variables together with
/// the variable -> row/column map. Construction validates hermiticity
/// (1e-12 relative), positive semidefiniteness (min eigenvalue >=
/// -1e-9 * max eigenvalue) and uniqueness of the variable order.
class CovarianceMap {
public:
    CovarianceMap(Eigen::MatrixXcd matrix, std::vector<VariableId> order);

    int dim() const { return static_cast<int>(order_.size()); }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    const std::vector<VariableId>& variables() const { return order_; }

    bool contains(const VariableId& v) const;
    int index_of(const VariableId& v) const; // throws ModelError if absent

private:
    Eigen::MatrixXcd matrix_;
    std::vector<VariableId> order_;
};

/// Schur complement Sigma_A - Sigma_AC Sigma_C^-1 Sigma_CA. The
/// conditioning block is regularized by 1e-12 * trace/dim on the diagonal
/// before inversion; a condition number above 1e14 raises
/// SingularConditioning. C may be empty. A and C must be disjoint and A
/// nonempty.
Eigen::MatrixXcd conditional_covariance(const CovarianceMap& sigma, const VarSet& a,
                                        const VarSet& c);

/// h(A | C) = log2 det(pi e Sigma_{A|C}) in bits.
double conditional_entropy(const CovarianceMap& sigma, const VarSet& a, const VarSet& c);

/// I(A; B | C) = h(A|C) - h(A|B,C), clamped to 0 from below. A, B, C must
/// be pairwise disjoint with A and B nonempty.
double conditional_mi(const CovarianceMap& sigma, const VarSet& a, const VarSet& b,
                      const VarSet& c);

inline constexpr double kLog2PiE = 3.094191170361282; // log2(pi*e)

} // namespace relaynet
