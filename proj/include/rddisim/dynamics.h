#ifndef RDDISIM_DYNAMICS_H
#define RDDISIM_DYNAMICS_H

#include "rddisim/hilbert.h"
#include "rddisim/rddi.h"

#include <Eigen/Core>

#include <array>
#include <variant>

namespace rddisim {

// Laser-driven transition |k> <-> |3>, identified by its lower level k.
enum class Transition { k13 = 1, k23 = 2 };

inline int lower_level(Transition tr) { return static_cast<int>(tr); }

struct ConstantEnvelope
{
    double amplitude = 0;
};

struct GaussianEnvelope
{
    double amplitude = 0; // peak Rabi frequency Omega_0
    double width = 1;     // tau_p
    double center = 0;    // t_0
};

struct RectangularEnvelope
{
    double amplitude = 0;
    double start = 0;
    double stop = 0;
};

using Envelope = std::variant<ConstantEnvelope, GaussianEnvelope, RectangularEnvelope>;

// Rabi amplitude |Omega(t)| of the envelope at time t.
double pulse_envelope(const Envelope &envelope, double t);
double peak_amplitude(const Envelope &envelope);
bool is_constant(const Envelope &envelope);
void validate(const Envelope &envelope);

// Drive of one transition. Atom 2 sees Omega(t), atom 1 sees
// Omega(t) exp(i alpha).
struct TransitionDrive
{
    Envelope envelope = ConstantEnvelope{};
    double alpha = 0;
    double delta = 0;

    double omega() const { return peak_amplitude(envelope); }
};

struct DriveSpec
{
    TransitionDrive t13;
    TransitionDrive t23;

    const TransitionDrive &operator[](Transition tr) const { return tr == Transition::k13 ? t13 : t23; }
    TransitionDrive &operator[](Transition tr) { return tr == Transition::k13 ? t13 : t23; }

    bool time_dependent() const { return !is_constant(t13.envelope) || !is_constant(t23.envelope); }
    void validate() const;
};

enum class JitterMode { collective, independent };

struct JitterSpec
{
    double rate = 0; // Gamma_12
    JitterMode mode = JitterMode::collective;

    void validate() const;
};

// Drive-independent part of H: detunings plus the dipole-dipole exchange.
Operator9 static_hamiltonian(const DriveSpec &drive, const RDDICouplings &couplings);
// Drive operator of a transition for unit Rabi amplitude, including the
// inter-atom phase alpha.
Operator9 unit_drive_operator(Transition tr, double alpha);

// Effective Hamiltonian (hbar = 1) at time t.
Operator9 build_hamiltonian(const DriveSpec &drive, const RDDICouplings &couplings, double t);

// Radiative decay contribution to d(rho)/dt, including the collective
// cross-atom terms.
Operator9 apply_dissipator(const Operator9 &rho, const RDDICouplings &couplings,
                           const SystemConfig &config);
// Lower-level dephasing contribution to d(rho)/dt.
Operator9 apply_jitter(const Operator9 &rho, const JitterSpec &jitter);

using Superoperator = Eigen::MatrixXcd;
using VectorizedState = Eigen::VectorXcd;

// Row-major vectorization: vec(rho)[9*m + n] = rho(m, n).
VectorizedState vectorize(const Operator9 &rho);
Operator9 unvectorize(const VectorizedState &v);
// Superoperator of rho -> a rho b.
Superoperator sandwich(const Operator9 &a, const Operator9 &b);
Superoperator commutator_superop(const Operator9 &h);

class Liouvillian
{
public:
    Liouvillian(Superoperator static_part,
                std::array<Superoperator, 2> drive_parts,
                std::array<Envelope, 2> envelopes);

    bool time_dependent() const { return m_time_dependent; }
    // Generator at time t.
    Superoperator at(double t) const;
    // Generator of a time-independent Liouvillian; throws std::logic_error otherwise.
    const Superoperator &matrix() const;
    // out = L(t) in
    void apply(double t, const VectorizedState &in, VectorizedState &out) const;

private:
    Superoperator m_static;
    std::array<Superoperator, 2> m_drive;
    std::array<Envelope, 2> m_envelopes;
    bool m_time_dependent;
};

// radiative_decay = false drops the dissipator (coherent comparison runs).
Liouvillian assemble_liouvillian(const DriveSpec &drive, const RDDICouplings &couplings,
                                 const SystemConfig &config, const JitterSpec &jitter,
                                 bool radiative_decay = true);

} // namespace rddisim

#endif // RDDISIM_DYNAMICS_H
