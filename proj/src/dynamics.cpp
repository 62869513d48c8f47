#include "rddisim/dynamics.h"

#include <cmath>
#include <stdexcept>

namespace rddisim {

namespace {

template <class... Ts>
struct overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::array<Transition, 2> transitions = {Transition::k13, Transition::k23};

Operator9 lower_population_difference(int atom)
{
    return number_op(atom, 1) - number_op(atom, 2);
}

Superoperator lindblad_term(const Operator9 &a, const Operator9 &b, double rate)
{
    // rate/2 (2 a rho b^+ - b^+ a rho - rho b^+ a)
    const Operator9 bd = b.adjoint();
    const Operator9 bda = bd*a;
    const Operator9 id = Operator9::Identity();
    return 0.5*rate*(2.0*sandwich(a, bd) - sandwich(bda, id) - sandwich(id, bda));
}

} // unnamed namespace

double pulse_envelope(const Envelope &envelope, double t)
{
    return std::visit(overloaded{
        [](const ConstantEnvelope &e) { return e.amplitude; },
        [t](const GaussianEnvelope &e) {
            const double x = (t - e.center)/e.width;
            return e.amplitude*std::exp(-0.5*x*x);
        },
        [t](const RectangularEnvelope &e) {
            return (t >= e.start && t <= e.stop) ? e.amplitude : 0.0;
        },
    }, envelope);
}

double peak_amplitude(const Envelope &envelope)
{
    return std::visit([](const auto &e) { return e.amplitude; }, envelope);
}

bool is_constant(const Envelope &envelope)
{
    return std::holds_alternative<ConstantEnvelope>(envelope);
}

void validate(const Envelope &envelope)
{
    if (!(peak_amplitude(envelope) >= 0) || !std::isfinite(peak_amplitude(envelope))) {
        throw std::invalid_argument("Rabi amplitude must be non-negative");
    }
    if (const auto *g = std::get_if<GaussianEnvelope>(&envelope)) {
        if (!(g->width > 0) || !std::isfinite(g->center)) {
            throw std::invalid_argument("gaussian envelope needs a positive width");
        }
    }
    if (const auto *r = std::get_if<RectangularEnvelope>(&envelope)) {
        if (!(r->stop >= r->start)) {
            throw std::invalid_argument("rectangular envelope needs start <= stop");
        }
    }
}

void DriveSpec::validate() const
{
    for (const Transition tr : transitions) {
        const TransitionDrive &d = (*this)[tr];
        rddisim::validate(d.envelope);
        if (!std::isfinite(d.alpha) || !std::isfinite(d.delta)) {
            throw std::invalid_argument("drive phase and detuning must be finite");
        }
    }
}

void JitterSpec::validate() const
{
    if (!(rate >= 0) || !std::isfinite(rate)) {
        throw std::invalid_argument("jitter rate Gamma12 must be non-negative");
    }
}

Operator9 static_hamiltonian(const DriveSpec &drive, const RDDICouplings &couplings)
{
    Operator9 h = Operator9::Zero();
    for (const Transition tr : transitions) {
        const int k = lower_level(tr);
        const double delta = drive[tr].delta;
        h += delta*(number_op(1, k) + number_op(2, k));
        const double chi = tr == Transition::k13 ? couplings.chi13 : couplings.chi23;
        const Operator9 exchange = transition_op(1, k, 3)*transition_op(2, 3, k);
        h += chi*(exchange + exchange.adjoint());
    }
    return h;
}

Operator9 unit_drive_operator(Transition tr, double alpha)
{
    const int k = lower_level(tr);
    const complex phase1 = std::polar(1.0, alpha);
    const Operator9 raise = 0.5*(phase1*transition_op(1, k, 3) + transition_op(2, k, 3));
    return raise + raise.adjoint();
}

Operator9 build_hamiltonian(const DriveSpec &drive, const RDDICouplings &couplings, double t)
{
    Operator9 h = static_hamiltonian(drive, couplings);
    for (const Transition tr : transitions) {
        const double omega = pulse_envelope(drive[tr].envelope, t);
        if (omega != 0) {
            h += omega*unit_drive_operator(tr, drive[tr].alpha);
        }
    }
    return h;
}

Operator9 apply_dissipator(const Operator9 &rho, const RDDICouplings &couplings,
                           const SystemConfig &config)
{
    Operator9 out = Operator9::Zero();
    for (const Transition tr : transitions) {
        const int k = lower_level(tr);
        const double gamma = tr == Transition::k13 ? config.gamma13 : config.gamma23;
        const double gamma12 = tr == Transition::k13 ? couplings.gamma12_13 : couplings.gamma12_23;
        for (int i = 1; i <= 2; ++i) {
            const Operator9 li = transition_op(i, 3, k);
            for (int j = 1; j <= 2; ++j) {
                const double rate = i == j ? gamma : gamma12;
                const Operator9 ljd = transition_op(j, 3, k).adjoint();
                const Operator9 ljd_li = ljd*li;
                out += 0.5*rate*(2.0*li*rho*ljd - ljd_li*rho - rho*ljd_li);
            }
        }
    }
    return out;
}

Operator9 apply_jitter(const Operator9 &rho, const JitterSpec &jitter)
{
    Operator9 out = Operator9::Zero();
    if (jitter.rate == 0) {
        return out;
    }
    for (int i = 1; i <= 2; ++i) {
        const Operator9 zi = lower_population_difference(i);
        for (int j = 1; j <= 2; ++j) {
            if (jitter.mode == JitterMode::independent && i != j) {
                continue;
            }
            const Operator9 zj = lower_population_difference(j);
            const Operator9 zizj = zi*zj;
            out += jitter.rate*(2.0*zi*rho*zj - rho*zizj - zizj*rho);
        }
    }
    return out;
}

VectorizedState vectorize(const Operator9 &rho)
{
    VectorizedState v(dim*dim);
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            v(dim*m + n) = rho(m, n);
        }
    }
    return v;
}

Operator9 unvectorize(const VectorizedState &v)
{
    if (v.size() != dim*dim) {
        throw std::invalid_argument("vectorized state must have 81 entries");
    }
    Operator9 rho;
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            rho(m, n) = v(dim*m + n);
        }
    }
    return rho;
}

Superoperator sandwich(const Operator9 &a, const Operator9 &b)
{
    // vec(a rho b) = (a kron b^T) vec(rho) for row-major vec.
    Superoperator s(dim*dim, dim*dim);
    for (int m = 0; m < dim; ++m) {
        for (int p = 0; p < dim; ++p) {
            s.block(dim*m, dim*p, dim, dim) = a(m, p)*b.transpose();
        }
    }
    return s;
}

Superoperator commutator_superop(const Operator9 &h)
{
    const Operator9 id = Operator9::Identity();
    return complex(0, -1)*(sandwich(h, id) - sandwich(id, h));
}

Liouvillian::Liouvillian(Superoperator static_part,
                         std::array<Superoperator, 2> drive_parts,
                         std::array<Envelope, 2> envelopes) :
    m_static(std::move(static_part)),
    m_drive(std::move(drive_parts)),
    m_envelopes(std::move(envelopes)),
    m_time_dependent(false)
{
    for (int c = 0; c < 2; ++c) {
        if (m_drive[c].size() == 0) {
            continue;
        }
        if (is_constant(m_envelopes[c])) {
            m_static += pulse_envelope(m_envelopes[c], 0.0)*m_drive[c];
            m_drive[c].resize(0, 0);
        } else {
            m_time_dependent = true;
        }
    }
}

Superoperator Liouvillian::at(double t) const
{
    Superoperator l = m_static;
    for (int c = 0; c < 2; ++c) {
        if (m_drive[c].size() != 0) {
            l += pulse_envelope(m_envelopes[c], t)*m_drive[c];
        }
    }
    return l;
}

const Superoperator &Liouvillian::matrix() const
{
    if (m_time_dependent) {
        throw std::logic_error("Liouvillian is time dependent; use at(t)");
    }
    return m_static;
}

void Liouvillian::apply(double t, const VectorizedState &in, VectorizedState &out) const
{
    out.noalias() = m_static*in;
    for (int c = 0; c < 2; ++c) {
        if (m_drive[c].size() == 0) {
            continue;
        }
        const double omega = pulse_envelope(m_envelopes[c], t);
        if (omega != 0) {
            out.noalias() += omega*(m_drive[c]*in);
        }
    }
}

Liouvillian assemble_liouvillian(const DriveSpec &drive, const RDDICouplings &couplings,
                                 const SystemConfig &config, const JitterSpec &jitter,
                                 bool radiative_decay)
{
    drive.validate();
    config.validate();
    jitter.validate();

    Superoperator l = commutator_superop(static_hamiltonian(drive, couplings));
    for (const Transition tr : transitions) {
        if (!radiative_decay) {
            break;
        }
        const int k = lower_level(tr);
        const double gamma = tr == Transition::k13 ? config.gamma13 : config.gamma23;
        const double gamma12 = tr == Transition::k13 ? couplings.gamma12_13 : couplings.gamma12_23;
        for (int i = 1; i <= 2; ++i) {
            for (int j = 1; j <= 2; ++j) {
                const double rate = i == j ? gamma : gamma12;
                if (rate != 0) {
                    l += lindblad_term(transition_op(i, 3, k), transition_op(j, 3, k), rate);
                }
            }
        }
    }
    if (jitter.rate != 0) {
        for (int i = 1; i <= 2; ++i) {
            for (int j = 1; j <= 2; ++j) {
                if (jitter.mode == JitterMode::independent && i != j) {
                    continue;
                }
                // Gamma (2 zi rho zj - rho zi zj - zi zj rho) is twice the
                // lindblad_term normalization.
                l += lindblad_term(lower_population_difference(i),
                                   lower_population_difference(j), 2.0*jitter.rate);
            }
        }
    }

    std::array<Superoperator, 2> drive_parts;
    std::array<Envelope, 2> envelopes;
    for (const Transition tr : transitions) {
        const int c = lower_level(tr) - 1;
        envelopes[c] = drive[tr].envelope;
        if (peak_amplitude(drive[tr].envelope) != 0) {
            drive_parts[c] = commutator_superop(unit_drive_operator(tr, drive[tr].alpha));
        }
    }
    return Liouvillian(std::move(l), std::move(drive_parts), std::move(envelopes));
}

} // namespace rddisim
