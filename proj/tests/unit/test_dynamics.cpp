#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rddisim/dynamics.h"
#include "oracles.h"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace rddisim;

namespace {

DriveSpec drive_from(const oracle::Params &p)
{
    DriveSpec d;
    d.t13 = TransitionDrive{ConstantEnvelope{p.omega[0]}, p.alpha[0], p.delta[0]};
    d.t23 = TransitionDrive{ConstantEnvelope{p.omega[1]}, p.alpha[1], p.delta[1]};
    return d;
}

RDDICouplings couplings_from(const oracle::Params &p)
{
    RDDICouplings c;
    c.chi13 = p.chi[0];
    c.chi23 = p.chi[1];
    c.gamma12_13 = p.gamma12[0];
    c.gamma12_23 = p.gamma12[1];
    return c;
}

SystemConfig system_from(const oracle::Params &p)
{
    SystemConfig s;
    s.gamma13 = p.gamma[0];
    s.gamma23 = p.gamma[1];
    return s;
}

JitterSpec jitter_from(const oracle::Params &p)
{
    return JitterSpec{p.jitter, p.collective ? JitterMode::collective : JitterMode::independent};
}

double max_abs(const Operator9 &m)
{
    return m.cwiseAbs().maxCoeff();
}

Operator9 random_hermitian(std::mt19937_64 &rng)
{
    return oracle::random_density(rng);
}

VectorizedState identity_vec()
{
    return vectorize(Operator9::Identity());
}

} // namespace

TEST_CASE("drive-free spectrum shows the RDDI doublets")
{
    RDDICouplings c;
    c.chi13 = 10;
    c.chi23 = 7;
    const DriveSpec none;
    const Operator9 h = build_hamiltonian(none, c, 0.0);
    CHECK(max_abs(h - h.adjoint()) < 1e-12);
    const Operator9 hd = to_dicke_basis(h);
    // diagonal in the Dicke-like basis
    Operator9 off = hd;
    off.diagonal().setZero();
    CHECK(max_abs(off) < 1e-12);
    CHECK(std::abs(hd(dicke_index("s13"), dicke_index("s13")) - 10.0) < 1e-12);
    CHECK(std::abs(hd(dicke_index("a13"), dicke_index("a13")) + 10.0) < 1e-12);
    CHECK(std::abs(hd(dicke_index("s23"), dicke_index("s23")) - 7.0) < 1e-12);
    CHECK(std::abs(hd(dicke_index("a23"), dicke_index("a23")) + 7.0) < 1e-12);
    for (const char *zero : {"11", "22", "33", "s12", "a12"}) {
        CHECK(std::abs(hd(dicke_index(zero), dicke_index(zero))) < 1e-12);
    }
}

TEST_CASE("detunings count once per atom")
{
    DriveSpec d;
    d.t13.delta = 0.3;
    d.t23.delta = -0.7;
    const Operator9 hd = to_dicke_basis(build_hamiltonian(d, RDDICouplings{}, 0.0));
    CHECK(std::abs(hd(dicke_index("11"), dicke_index("11")).real() - 0.6) < 1e-12);
    CHECK(std::abs(hd(dicke_index("22"), dicke_index("22")).real() + 1.4) < 1e-12);
    CHECK(std::abs(hd(dicke_index("s12"), dicke_index("s12")).real() + 0.4) < 1e-12);
    CHECK(std::abs(hd(dicke_index("33"), dicke_index("33")).real()) < 1e-12);
}

TEST_CASE("symmetric drive matrix elements")
{
    DriveSpec d;
    d.t13.envelope = ConstantEnvelope{0.8};
    const Operator9 h = build_hamiltonian(d, RDDICouplings{}, 0.0);
    const StateVector s11 = dicke_state_from_label("11").vector();
    const StateVector s13 = dicke_state_from_label("s13").vector();
    const StateVector a13 = dicke_state_from_label("a13").vector();
    CHECK(std::abs(s13.dot(h*s11) - std::sqrt(2.0)*0.8/2) < 1e-12);
    CHECK(std::abs(a13.dot(h*s11)) < 1e-12);
}

TEST_CASE("Hamiltonian is hermitian for random inputs")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const oracle::Params p = oracle::random_params(rng);
        const Operator9 h = build_hamiltonian(drive_from(p), couplings_from(p), 0.0);
        CHECK(max_abs(h - h.adjoint()) < 1e-12);
        CHECK(max_abs(h - oracle::hamiltonian(p)) < 1e-12);
    }
}

TEST_CASE("symmetric sector is invariant in the Dicke limit")
{
    DriveSpec d;
    d.t13 = TransitionDrive{ConstantEnvelope{0.7}, 0.0, 0.2};
    d.t23 = TransitionDrive{ConstantEnvelope{1.3}, 0.0, -0.4};
    RDDICouplings c;
    c.chi13 = 5;
    c.chi23 = 4;
    c.g13 = c.g23 = 1;
    c.gamma12_13 = c.gamma12_23 = 1;
    const Operator9 hd = to_dicke_basis(build_hamiltonian(d, c, 0.0));
    for (int a = 0; a < 6; ++a) {
        for (int b = 6; b < dim; ++b) {
            CHECK(std::abs(hd(a, b)) < 1e-12);
        }
    }
}

TEST_CASE("dissipator")
{
    SystemConfig s;
    s.gamma13 = 1.0;
    s.gamma23 = 0.6;
    RDDICouplings c;
    c.gamma12_13 = 0.4;
    c.gamma12_23 = -0.2;

    const Operator9 p33 = QuantumState::pure(basis_ket(3, 3)).density();
    const Operator9 d33 = apply_dissipator(p33, c, s);
    const int i33 = BasisIndex{3, 3}.flat();
    CHECK(std::abs(d33(i33, i33).real() + 2*(1.0 + 0.6)) < 1e-12);

    const Operator9 a12 = dicke_state_from_label("a12").density();
    CHECK(max_abs(apply_dissipator(a12, c, s)) < 1e-15);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const Operator9 rho = random_hermitian(rng);
        const Operator9 out = apply_dissipator(rho, c, s);
        CHECK(std::abs(out.trace()) < 1e-12);
        CHECK(max_abs(out - out.adjoint()) < 1e-12);
    }
}

TEST_CASE("jitter")
{
    const JitterSpec collective{0.05, JitterMode::collective};
    const JitterSpec independent{0.05, JitterMode::independent};
    const JitterSpec none{0.0, JitterMode::collective};
    const int i11 = BasisIndex{1, 1}.flat();
    const int i12 = BasisIndex{1, 2}.flat();
    const int i21 = BasisIndex{2, 1}.flat();

    Operator9 diag = Operator9::Zero();
    for (int i = 0; i < dim; ++i) {
        diag(i, i) = 1.0/9;
    }
    CHECK(max_abs(apply_jitter(diag, collective)) < 1e-15);
    CHECK(max_abs(apply_jitter(diag, independent)) < 1e-15);

    Operator9 coh = Operator9::Zero();
    coh(i12, i11) = 1;
    CHECK(std::abs(apply_jitter(coh, collective)(i12, i11) + 4*0.05) < 1e-12);
    CHECK(std::abs(apply_jitter(coh, independent)(i12, i11) + 4*0.05) < 1e-12);

    Operator9 swap = Operator9::Zero();
    swap(i12, i21) = 1;
    CHECK(std::abs(apply_jitter(swap, collective)(i12, i21)) < 1e-15);
    CHECK(std::abs(apply_jitter(swap, independent)(i12, i21) + 8*0.05) < 1e-12);

    CHECK(max_abs(apply_jitter(coh, none)) == 0);
    CHECK_THROWS_AS(JitterSpec({-0.1, JitterMode::collective}).validate(), std::invalid_argument);
}

TEST_CASE("Liouvillian action matches the direct formula")
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const oracle::Params p = oracle::random_params(rng);
        const Liouvillian l = assemble_liouvillian(drive_from(p), couplings_from(p), system_from(p),
                                                   jitter_from(p));
        const Operator9 rho = oracle::random_density(rng);
        const Operator9 expected = oracle::master_rhs(rho, p);
        const Operator9 direct = complex(0, -1)*(build_hamiltonian(drive_from(p), couplings_from(p), 0.0)*rho
                                                 - rho*build_hamiltonian(drive_from(p), couplings_from(p), 0.0))
            + apply_dissipator(rho, couplings_from(p), system_from(p)) + apply_jitter(rho, jitter_from(p));
        const Operator9 got = unvectorize(l.matrix()*vectorize(rho));
        CHECK(max_abs(got - expected) < 1e-12);
        CHECK(max_abs(direct - expected) < 1e-12);
        // left null vector: Tr(L rho) = 0 for every rho
        const double scale = l.matrix().cwiseAbs().maxCoeff();
        CHECK((identity_vec().adjoint()*l.matrix()).cwiseAbs().maxCoeff() < 1e-10*std::max(1.0, scale));
    }
}

TEST_CASE("trace preservation over random states")
{
    std::mt19937_64 rng(99);
    const oracle::Params p = oracle::random_params(rng);
    const Liouvillian l = assemble_liouvillian(drive_from(p), couplings_from(p), system_from(p),
                                               jitter_from(p));
    const double scale = l.matrix().cwiseAbs().maxCoeff();
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Operator9 rho = oracle::random_density(rng);
        worst = std::max(worst, std::abs(unvectorize(l.matrix()*vectorize(rho)).trace())/scale);
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("bare decay leaves lower-level mixtures alone")
{
    const Liouvillian l = assemble_liouvillian(DriveSpec{}, RDDICouplings{}, SystemConfig{}, JitterSpec{});
    Operator9 rho = Operator9::Zero();
    rho(BasisIndex{1, 1}.flat(), BasisIndex{1, 1}.flat()) = 0.2;
    rho(BasisIndex{1, 2}.flat(), BasisIndex{1, 2}.flat()) = 0.3;
    rho(BasisIndex{2, 2}.flat(), BasisIndex{2, 2}.flat()) = 0.5;
    rho(BasisIndex{1, 2}.flat(), BasisIndex{2, 1}.flat()) = 0.1;
    rho(BasisIndex{2, 1}.flat(), BasisIndex{1, 2}.flat()) = 0.1;
    CHECK(max_abs(unvectorize(l.matrix()*vectorize(rho))) < 1e-15);
}

TEST_CASE("decay switch removes only the dissipator")
{
    std::mt19937_64 rng(5);
    oracle::Params p = oracle::random_params(rng);
    const Liouvillian coherent = assemble_liouvillian(drive_from(p), couplings_from(p), system_from(p),
                                                      jitter_from(p), false);
    p.gamma[0] = p.gamma[1] = 0;
    p.gamma12[0] = p.gamma12[1] = 0;
    const Operator9 rho = oracle::random_density(rng);
    CHECK(max_abs(unvectorize(coherent.matrix()*vectorize(rho)) - oracle::master_rhs(rho, p)) < 1e-12);
}

TEST_CASE("vectorization")
{
    std::mt19937_64 rng(8);
    const Operator9 a = oracle::random_density(rng);
    const Operator9 b = oracle::random_density(rng)*complex(0.3, 0.7);
    const Operator9 rho = oracle::random_density(rng);
    CHECK(max_abs(unvectorize(vectorize(rho)) - rho) == 0);
    CHECK(vectorize(rho)(dim*2 + 5) == rho(2, 5));
    CHECK(max_abs(unvectorize(sandwich(a, b)*vectorize(rho)) - a*rho*b) < 1e-14);
    CHECK_THROWS_AS(unvectorize(VectorizedState::Zero(80)), std::invalid_argument);
}

TEST_CASE("pulse envelopes")
{
    const GaussianEnvelope g{3.0, 0.05, 0.1};
    CHECK(pulse_envelope(g, 0.1) == 3.0);
    CHECK(pulse_envelope(g, 0.1 + 5*0.05) < 4e-6*3.0);
    CHECK(pulse_envelope(g, 0.1 - 5*0.05) < 4e-6*3.0);
    CHECK(std::abs(pulse_envelope(g, 0.15) - 3.0*std::exp(-0.5)) < 1e-15);
    const RectangularEnvelope r{2.0, 1.0, 2.0};
    CHECK(pulse_envelope(r, 0.5) == 0);
    CHECK(pulse_envelope(r, 1.5) == 2.0);
    CHECK(pulse_envelope(r, 2.5) == 0);
    CHECK(pulse_envelope(ConstantEnvelope{1.7}, 123.0) == 1.7);
    CHECK(peak_amplitude(g) == 3.0);
    CHECK(is_constant(ConstantEnvelope{}));
    CHECK_FALSE(is_constant(g));

    CHECK_THROWS_AS(validate(Envelope{ConstantEnvelope{-1}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(Envelope{GaussianEnvelope{1, 0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(Envelope{RectangularEnvelope{1, 2, 1}}), std::invalid_argument);
}

TEST_CASE("time-dependent Liouvillian")
{
    DriveSpec d;
    d.t13.envelope = GaussianEnvelope{2.0, 0.1, 0.0};
    d.t23.envelope = ConstantEnvelope{0.5};
    const Liouvillian l = assemble_liouvillian(d, RDDICouplings{}, SystemConfig{}, JitterSpec{});
    CHECK(l.time_dependent());
    CHECK_THROWS_AS(l.matrix(), std::logic_error);
    std::mt19937_64 rng(1);
    const Operator9 rho = oracle::random_density(rng);
    for (const double t : {-0.2, 0.0, 0.05}) {
        DriveSpec frozen = d;
        frozen.t13.envelope = ConstantEnvelope{pulse_envelope(d.t13.envelope, t)};
        const Liouvillian lt = assemble_liouvillian(frozen, RDDICouplings{}, SystemConfig{}, JitterSpec{});
        VectorizedState out;
        l.apply(t, vectorize(rho), out);
        CHECK((out - lt.matrix()*vectorize(rho)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((l.at(t) - lt.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    }
}
