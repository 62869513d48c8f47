#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rddisim/dynamics.h"
#include "rddisim/hilbert.h"

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

using namespace rddisim;

namespace {

template <typename A, typename B>
bool near(const A &a, const B &b, double tol = 1e-12)
{
    return (a - b).cwiseAbs().maxCoeff() <= tol;
}

} // namespace

TEST_CASE("flat index is a bijection")
{
    std::set<int> seen;
    for (int a = 1; a <= 3; ++a) {
        for (int b = 1; b <= 3; ++b) {
            const BasisIndex idx{a, b};
            const int f = idx.flat();
            CHECK(f >= 0);
            CHECK(f < 9);
            seen.insert(f);
            const BasisIndex back = BasisIndex::from_flat(f);
            CHECK(back.a == a);
            CHECK(back.b == b);
            CHECK(idx.label() == std::to_string(a) + std::to_string(b));
        }
    }
    CHECK(seen.size() == 9);
    CHECK(BasisIndex{2, 3}.flat() == 5);
    CHECK_THROWS_AS(BasisIndex::from_flat(9), std::invalid_argument);
    CHECK_THROWS_AS(BasisIndex::from_flat(-1), std::invalid_argument);
}

TEST_CASE("transition operators")
{
    CHECK(near(transition_op(1, 1, 3)*basis_ket(1, 1), basis_ket(3, 1)));
    CHECK(near(transition_op(2, 1, 3)*basis_ket(1, 1), basis_ket(1, 3)));
    for (int i = 1; i <= 2; ++i) {
        for (int k = 1; k <= 3; ++k) {
            for (int l = 1; l <= 3; ++l) {
                CHECK(near(transition_op(i, k, l).adjoint(), transition_op(i, l, k)));
                for (int m = 1; m <= 3; ++m) {
                    CHECK(near(transition_op(i, k, l)*transition_op(i, m, k), transition_op(i, m, l)));
                }
            }
        }
    }
    for (int k = 1; k <= 3; ++k) {
        for (int l = 1; l <= 3; ++l) {
            const Operator9 a = transition_op(1, k, l);
            const Operator9 b = transition_op(2, l, k);
            CHECK(near(a*b, b*a));
        }
    }
    CHECK_THROWS_AS(transition_op(3, 1, 2), std::invalid_argument);
    CHECK_THROWS_AS(transition_op(1, 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(transition_op(1, 1, 4), std::invalid_argument);
}

TEST_CASE("number operators")
{
    CHECK(near(number_op(1, 1)*basis_ket(1, 1), basis_ket(1, 1)));
    CHECK(near(number_op(1, 1)*basis_ket(2, 1), StateVector::Zero()));
    for (int i = 1; i <= 2; ++i) {
        CHECK(near(number_op(i, 1) + number_op(i, 2) + number_op(i, 3), Operator9::Identity()));
    }
    CHECK_THROWS_AS(number_op(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(number_op(1, 4), std::invalid_argument);
}

TEST_CASE("Dicke-like states")
{
    const StateVector s12 = dicke_state(DickeKind::symmetric, 1, 2).vector();
    const StateVector a12 = dicke_state(DickeKind::antisymmetric, 1, 2).vector();
    CHECK(std::abs(a12.norm() - 1) < 1e-15);
    CHECK(std::abs(s12.dot(a12)) < 1e-15);
    CHECK(near(swap_op()*a12, -a12));
    CHECK(near(swap_op()*s12, s12));
    CHECK(near(dicke_state(DickeKind::product, 2, 3).vector(), basis_ket(2, 3)));
    CHECK(near(s12, (basis_ket(1, 2) + basis_ket(2, 1))/std::sqrt(2.0)));
    CHECK(near(a12, (basis_ket(1, 2) - basis_ket(2, 1))/std::sqrt(2.0)));

    const Operator9 &u = dicke_basis();
    CHECK(near(u.adjoint()*u, Operator9::Identity()));
    for (int j = 0; j < dim; ++j) {
        CHECK(dicke_index(dicke_labels()[j]) == j);
        CHECK(near(dicke_state_from_label(dicke_labels()[j]).vector(), u.col(j)));
    }

    CHECK_THROWS_AS(dicke_state(DickeKind::symmetric, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(dicke_state(DickeKind::antisymmetric, 2, 1), std::invalid_argument);
    CHECK_THROWS(dicke_state_from_label("x12"));
    CHECK_THROWS(dicke_index("s11"));
}

TEST_CASE("basis change round trip")
{
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n;
    Operator9 op;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            op(i, j) = complex(n(rng), n(rng));
    CHECK(near(from_dicke_basis(to_dicke_basis(op)), op));
}

TEST_CASE("symmetry selection of the drive")
{
    // Equal Rabi frequencies couple within a sector, opposite ones across.
    const Operator9 &u = dicke_basis();
    const auto symmetric_sector = [](int j) { return j < 6; };
    for (const Transition tr : {Transition::k13, Transition::k23}) {
        const Operator9 d_sym = u.adjoint()*unit_drive_operator(tr, 0.0)*u;
        const Operator9 d_anti = u.adjoint()*unit_drive_operator(tr, std::numbers::pi)*u;
        for (int a = 0; a < dim; ++a) {
            for (int b = 0; b < dim; ++b) {
                if (symmetric_sector(a) != symmetric_sector(b)) {
                    CHECK(std::abs(d_sym(a, b)) < 1e-12);
                } else {
                    CHECK(std::abs(d_anti(a, b)) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("fidelity")
{
    const QuantumState a12 = dicke_state(DickeKind::antisymmetric, 1, 2);
    const QuantumState s12 = dicke_state(DickeKind::symmetric, 1, 2);
    CHECK(std::abs(fidelity(QuantumState::mixed(a12.density()), a12) - 1) < 1e-15);
    CHECK(std::abs(fidelity(a12, a12) - 1) < 1e-15);
    const QuantumState mixed = QuantumState::mixed(Operator9::Identity()/9.0);
    CHECK(std::abs(fidelity(mixed, s12) - 1.0/9) < 1e-15);
    const QuantumState p12 = QuantumState::pure(basis_ket(1, 2));
    CHECK(std::abs(fidelity(QuantumState::mixed(p12.density()), s12) - 0.5) < 1e-15);
    CHECK(std::abs(fidelity(p12, s12) - 0.5) < 1e-15);
}

TEST_CASE("state validation")
{
    CHECK_NOTHROW(QuantumState::pure(basis_ket(1, 1)).validate());
    CHECK_THROWS_AS(QuantumState::pure(2.0*basis_ket(1, 1)).validate(), std::domain_error);

    Operator9 rho = Operator9::Zero();
    rho(0, 0) = 1;
    CHECK_NOTHROW(QuantumState::mixed(rho).validate());
    Operator9 bad_trace = rho*1.1;
    CHECK_THROWS_AS(QuantumState::mixed(bad_trace).validate(), std::domain_error);
    Operator9 non_herm = rho;
    non_herm(0, 1) = 0.1;
    CHECK_THROWS_AS(QuantumState::mixed(non_herm).validate(), std::domain_error);
    Operator9 negative = Operator9::Zero();
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    CHECK_THROWS_AS(QuantumState::mixed(negative).validate(), std::domain_error);
    Operator9 nan = rho;
    nan(2, 2) = std::nan("");
    CHECK_THROWS_AS(QuantumState::mixed(nan).validate(), std::domain_error);
    CHECK_THROWS_AS(fidelity(QuantumState::mixed(negative), dicke_state_from_label("11")),
                    std::domain_error);

    const QuantumState pure = QuantumState::pure(basis_ket(1, 1));
    CHECK_THROWS_AS(pure.matrix(), std::logic_error);
    CHECK_THROWS_AS(QuantumState::mixed(rho).vector(), std::logic_error);
}

TEST_CASE("matrix diagnostics")
{
    Operator9 a = Operator9::Zero();
    a(0, 0) = 1;
    Operator9 b = Operator9::Zero();
    b(1, 1) = 1;
    CHECK(std::abs(trace_distance(a, b) - 1) < 1e-12);
    CHECK(trace_distance(a, a) < 1e-15);
    CHECK(hermiticity_error(a) == 0);
    CHECK(std::abs(min_eigenvalue(Operator9::Identity()/9.0) - 1.0/9) < 1e-15);
}
