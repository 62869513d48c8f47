#include "rddisim/hilbert.h"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rddisim {

namespace {

void require_atom(int atom)
{
    if (atom != 1 && atom != 2) {
        throw std::invalid_argument("atom index must be 1 or 2, got " + std::to_string(atom));
    }
}

void require_level(int level)
{
    if (level < 1 || level > num_levels) {
        throw std::invalid_argument("level must be in {1,2,3}, got " + std::to_string(level));
    }
}

Operator9 embed(int atom, const Eigen::Matrix3cd &single)
{
    const Eigen::Matrix3cd id = Eigen::Matrix3cd::Identity();
    const Eigen::Matrix3cd &left = atom == 1 ? single : id;
    const Eigen::Matrix3cd &right = atom == 1 ? id : single;
    Operator9 op;
    for (int a = 0; a < num_levels; ++a) {
        for (int b = 0; b < num_levels; ++b) {
            for (int c = 0; c < num_levels; ++c) {
                for (int d = 0; d < num_levels; ++d) {
                    op(3*a + b, 3*c + d) = left(a, c)*right(b, d);
                }
            }
        }
    }
    return op;
}

Operator9 build_dicke_basis()
{
    Operator9 u = Operator9::Zero();
    const auto &labels = dicke_labels();
    for (int j = 0; j < dim; ++j) {
        u.col(j) = dicke_state_from_label(labels[j]).vector();
    }
    return u;
}

} // unnamed namespace

BasisIndex BasisIndex::from_flat(int flat)
{
    if (flat < 0 || flat >= dim) {
        throw std::invalid_argument("flat basis index out of range");
    }
    return BasisIndex{flat/3 + 1, flat%3 + 1};
}

std::string BasisIndex::label() const
{
    return std::to_string(a) + std::to_string(b);
}

StateVector basis_ket(int a, int b)
{
    require_level(a);
    require_level(b);
    StateVector v = StateVector::Zero();
    v(BasisIndex{a, b}.flat()) = 1.0;
    return v;
}

Operator9 transition_op(int atom, int from_level, int to_level)
{
    require_atom(atom);
    require_level(from_level);
    require_level(to_level);
    Eigen::Matrix3cd single = Eigen::Matrix3cd::Zero();
    single(to_level - 1, from_level - 1) = 1.0;
    return embed(atom, single);
}

Operator9 number_op(int atom, int level)
{
    return transition_op(atom, level, level);
}

Operator9 swap_op()
{
    Operator9 op = Operator9::Zero();
    for (int a = 1; a <= num_levels; ++a) {
        for (int b = 1; b <= num_levels; ++b) {
            op(BasisIndex{b, a}.flat(), BasisIndex{a, b}.flat()) = 1.0;
        }
    }
    return op;
}

QuantumState QuantumState::pure(const StateVector &psi)
{
    return QuantumState(psi);
}

QuantumState QuantumState::mixed(const Operator9 &rho)
{
    return QuantumState(rho);
}

const StateVector &QuantumState::vector() const
{
    if (!is_pure()) {
        throw std::logic_error("state is mixed; no state vector");
    }
    return std::get<StateVector>(m_data);
}

const Operator9 &QuantumState::matrix() const
{
    if (is_pure()) {
        throw std::logic_error("state is pure; use density()");
    }
    return std::get<Operator9>(m_data);
}

Operator9 QuantumState::density() const
{
    if (is_pure()) {
        const StateVector &psi = std::get<StateVector>(m_data);
        return psi*psi.adjoint();
    }
    return std::get<Operator9>(m_data);
}

void QuantumState::validate() const
{
    if (is_pure()) {
        const StateVector &psi = std::get<StateVector>(m_data);
        if (!psi.allFinite() || std::abs(psi.norm() - 1.0) > 1e-9) {
            throw std::domain_error("pure state is not normalized");
        }
        return;
    }
    const Operator9 &rho = std::get<Operator9>(m_data);
    if (!rho.allFinite()) {
        throw std::domain_error("density matrix has non-finite entries");
    }
    if (hermiticity_error(rho) > 1e-9) {
        throw std::domain_error("density matrix is not hermitian");
    }
    if (std::abs(rho.trace() - 1.0) > 1e-9) {
        throw std::domain_error("density matrix does not have unit trace");
    }
    if (min_eigenvalue(rho) < -1e-8) {
        throw std::domain_error("density matrix is not positive semidefinite");
    }
}

QuantumState dicke_state(DickeKind kind, int k, int l)
{
    require_level(k);
    require_level(l);
    if (kind == DickeKind::product) {
        return QuantumState::pure(basis_ket(k, l));
    }
    if (k >= l) {
        throw std::invalid_argument("entangled Dicke-like states need k < l");
    }
    const double sign = kind == DickeKind::symmetric ? 1.0 : -1.0;
    const StateVector psi = (basis_ket(k, l) + sign*basis_ket(l, k))/std::sqrt(2.0);
    return QuantumState::pure(psi);
}

const std::array<std::string, dim> &dicke_labels()
{
    static const std::array<std::string, dim> labels = {
        "11", "22", "33", "s12", "s13", "s23", "a12", "a13", "a23"};
    return labels;
}

const Operator9 &dicke_basis()
{
    static const Operator9 u = build_dicke_basis();
    return u;
}

QuantumState dicke_state_from_label(const std::string &label)
{
    if (label.size() == 2 && label[0] == label[1]) {
        const int k = label[0] - '0';
        return dicke_state(DickeKind::product, k, k);
    }
    if (label.size() == 3 && (label[0] == 's' || label[0] == 'a')) {
        const DickeKind kind = label[0] == 's' ? DickeKind::symmetric : DickeKind::antisymmetric;
        return dicke_state(kind, label[1] - '0', label[2] - '0');
    }
    throw std::invalid_argument("unknown Dicke-like state label '" + label + "'");
}

int dicke_index(const std::string &label)
{
    const auto &labels = dicke_labels();
    for (int j = 0; j < dim; ++j) {
        if (labels[j] == label) {
            return j;
        }
    }
    throw std::invalid_argument("unknown Dicke-like state label '" + label + "'");
}

Operator9 to_dicke_basis(const Operator9 &op)
{
    return dicke_basis().adjoint()*op*dicke_basis();
}

Operator9 from_dicke_basis(const Operator9 &op)
{
    return dicke_basis()*op*dicke_basis().adjoint();
}

double population(const Operator9 &rho, const StateVector &target)
{
    return (target.adjoint()*rho*target)(0, 0).real();
}

double population(const StateVector &psi, const StateVector &target)
{
    return std::norm(target.dot(psi));
}

double fidelity(const QuantumState &state, const QuantumState &target)
{
    state.validate();
    target.validate();
    const double value = state.is_pure() ? population(state.vector(), target.vector())
                                         : population(state.matrix(), target.vector());
    // Round-off can push a valid population a few ulps outside [0,1].
    return std::clamp(value, 0.0, 1.0);
}

double trace_distance(const Operator9 &a, const Operator9 &b)
{
    const Operator9 diff = 0.5*((a - b) + (a - b).adjoint());
    Eigen::SelfAdjointEigenSolver<Operator9> es(diff, Eigen::EigenvaluesOnly);
    return 0.5*es.eigenvalues().cwiseAbs().sum();
}

double hermiticity_error(const Operator9 &op)
{
    return (op - op.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Operator9 &rho)
{
    const Operator9 h = 0.5*(rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Operator9> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

} // namespace rddisim
