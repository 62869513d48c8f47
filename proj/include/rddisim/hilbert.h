#ifndef RDDISIM_HILBERT_H
#define RDDISIM_HILBERT_H

#include <Eigen/Core>

#include <array>
#include <complex>
#include <string>
#include <variant>

namespace rddisim {

using complex = std::complex<double>;

constexpr int num_levels = 3;
constexpr int dim = num_levels*num_levels;

using Operator9 = Eigen::Matrix<complex, dim, dim>;
using StateVector = Eigen::Matrix<complex, dim, 1>;

// Product basis |a>_1 |b>_2 with levels a, b in {1,2,3}; flat index is
// row-major in (atom 1 level, atom 2 level).
struct BasisIndex
{
    int a = 1;
    int b = 1;

    int flat() const { return 3*(a - 1) + (b - 1); }
    static BasisIndex from_flat(int flat);
    std::string label() const; // "11", "12", ...
};

StateVector basis_ket(int a, int b);

// Embedding of |l><k| on the given atom (1 or 2): sigma_kl maps level k to l.
Operator9 transition_op(int atom, int from_level, int to_level);
// Projector onto level k of the given atom.
Operator9 number_op(int atom, int level);
// Exchanges the two atoms.
Operator9 swap_op();

enum class DickeKind { product, symmetric, antisymmetric };

class QuantumState
{
public:
    static QuantumState pure(const StateVector &psi);
    static QuantumState mixed(const Operator9 &rho);

    bool is_pure() const { return std::holds_alternative<StateVector>(m_data); }
    const StateVector &vector() const;
    const Operator9 &matrix() const;
    // rho, formed as |psi><psi| for pure states.
    Operator9 density() const;

    // Throws std::domain_error when the state violates the invariants.
    void validate() const;

private:
    explicit QuantumState(std::variant<StateVector, Operator9> data) :
        m_data(std::move(data))
    {}
    std::variant<StateVector, Operator9> m_data;
};

QuantumState dicke_state(DickeKind kind, int k, int l);

// Labels of the Dicke-like basis, in the column order of dicke_basis().
const std::array<std::string, dim> &dicke_labels();
// Column j is the Dicke-like state with label dicke_labels()[j]:
// 11 22 33 s12 s13 s23 a12 a13 a23.
const Operator9 &dicke_basis();
// Resolves "11", "s12", "a13", ... to the corresponding pure state.
QuantumState dicke_state_from_label(const std::string &label);
int dicke_index(const std::string &label);

Operator9 to_dicke_basis(const Operator9 &op);
Operator9 from_dicke_basis(const Operator9 &op);

// <target|rho|target> and |<target|psi>|^2, without validation.
double population(const Operator9 &rho, const StateVector &target);
double population(const StateVector &psi, const StateVector &target);

// Population of the pure target in the given state.
double fidelity(const QuantumState &state, const QuantumState &target);

double trace_distance(const Operator9 &a, const Operator9 &b);
double hermiticity_error(const Operator9 &op);
double min_eigenvalue(const Operator9 &rho);

} // namespace rddisim

#endif // RDDISIM_HILBERT_H
