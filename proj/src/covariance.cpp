#include "relaynet/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace relaynet {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kPsdTol = 1e-9;
constexpr double kRegularization = 1e-12;
constexpr double kMaxCondition = 1e14;

Eigen::MatrixXcd submatrix(const Eigen::MatrixXcd& m, const std::vector<int>& rows,
                           const std::vector<int>& cols) {
    Eigen::MatrixXcd out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                m(rows[i], cols[j]);
    return out;
}

std::vector<int> indices_of(const CovarianceMap& sigma, const VarSet& vars) {
    std::vector<int> idx;
    idx.reserve(vars.size());
    for (const auto& v : vars) idx.push_back(sigma.index_of(v));
    return idx;
}

void require_disjoint(const VarSet& a, const VarSet& b, const char* what) {
    std::set<VariableId> seen(a.begin(), a.end());
    if (seen.size() != a.size()) throw ModelError(std::string(what) + ": duplicate variable in set");
    for (const auto& v : b)
        if (seen.count(v)) throw ModelError(std::string(what) + ": sets not disjoint (" + to_string(v) + ")");
}

VarSet set_union(const VarSet& a, const VarSet& b) {
    VarSet out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

} // namespace

std::string to_string(const VariableId& v) {
    switch (v.kind) {
        case VarKind::SourceInput: return "X";
        case VarKind::RelayInput: return "X" + std::to_string(v.relay);
        case VarKind::RelayOutput: return "Z" + std::to_string(v.relay);
        case VarKind::CompressedOutput: return "Zh" + std::to_string(v.relay);
        case VarKind::DestOutput: return "Y1";
        case VarKind::DfCodeword: return "X1_" + std::to_string(v.relay);
    }
    return "?";
}

CovarianceMap::CovarianceMap(Eigen::MatrixXcd matrix, std::vector<VariableId> order)
    : matrix_(std::move(matrix)), order_(std::move(order)) {
    const auto n = static_cast<Eigen::Index>(order_.size());
    if (matrix_.rows() != n || matrix_.cols() != n)
        throw ModelError("covariance dimension does not match variable count");
    if (n == 0) throw ModelError("empty covariance");

    std::set<VariableId> uniq(order_.begin(), order_.end());
    if (uniq.size() != order_.size()) throw ModelError("duplicate variable in covariance order");

    const double scale = matrix_.cwiseAbs().maxCoeff();
    const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermitianTol * std::max(scale, 1e-300))
        throw ModelError("covariance is not Hermitian");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_, Eigen::EigenvaluesOnly);
    const double max_eig = es.eigenvalues().maxCoeff();
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -kPsdTol * std::max(max_eig, 0.0))
        throw ModelError("covariance is not positive semidefinite");
}

bool CovarianceMap::contains(const VariableId& v) const {
    return std::find(order_.begin(), order_.end(), v) != order_.end();
}

int CovarianceMap::index_of(const VariableId& v) const {
    const auto it = std::find(order_.begin(), order_.end(), v);
    if (it == order_.end()) throw ModelError("variable " + to_string(v) + " not in covariance");
    return static_cast<int>(it - order_.begin());
}

Eigen::MatrixXcd conditional_covariance(const CovarianceMap& sigma, const VarSet& a,
                                        const VarSet& c) {
    if (a.empty()) throw ModelError("conditional_covariance: empty target set");
    require_disjoint(a, c, "conditional_covariance");

    const auto ia = indices_of(sigma, a);
    const Eigen::MatrixXcd saa = submatrix(sigma.matrix(), ia, ia);
    if (c.empty()) return saa;

    const auto ic = indices_of(sigma, c);
    Eigen::MatrixXcd scc = submatrix(sigma.matrix(), ic, ic);
    const double jitter = kRegularization * scc.real().trace() / static_cast<double>(ic.size());
    scc.diagonal().array() += jitter;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(scc, Eigen::EigenvaluesOnly);
    const double max_eig = es.eigenvalues().maxCoeff();
    const double min_eig = es.eigenvalues().minCoeff();
    if (!(min_eig > 0.0) || max_eig / min_eig > kMaxCondition)
        throw SingularConditioning("conditioning block is numerically singular");

    const Eigen::MatrixXcd sac = submatrix(sigma.matrix(), ia, ic);
    const Eigen::MatrixXcd solved = scc.ldlt().solve(sac.adjoint());
    Eigen::MatrixXcd out = saa - sac * solved;
    // kill the Hermitian drift accumulated by the solve
    out = 0.5 * (out + out.adjoint()).eval();
    return out;
}

double conditional_entropy(const CovarianceMap& sigma, const VarSet& a, const VarSet& c) {
    const Eigen::MatrixXcd cond = conditional_covariance(sigma, a, c);
    const double det = cond.determinant().real();
    if (!(det > 0.0)) throw NonPositiveDeterminant("conditional covariance has non-positive determinant");
    return static_cast<double>(a.size()) * kLog2PiE + std::log2(det);
}

double conditional_mi(const CovarianceMap& sigma, const VarSet& a, const VarSet& b,
                      const VarSet& c) {
    if (a.empty() || b.empty()) throw ModelError("conditional_mi: empty argument set");
    require_disjoint(a, b, "conditional_mi");
    require_disjoint(a, c, "conditional_mi");
    require_disjoint(b, c, "conditional_mi");

    const double h_a_c = conditional_entropy(sigma, a, c);
    const double h_a_bc = conditional_entropy(sigma, a, set_union(b, c));
    return std::max(0.0, h_a_c - h_a_bc);
}

} // namespace relaynet
