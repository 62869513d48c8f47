#ifndef RDDISIM_SOLVERS_H
#define RDDISIM_SOLVERS_H

#include "rddisim/dynamics.h"
#include "rddisim/hilbert.h"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rddisim {

class SolverError : public std::runtime_error
{
public:
    SolverError(const std::string &what, double time) :
        std::runtime_error(what), m_time(time)
    {}
    // Integration time at which the failure occurred.
    double time() const { return m_time; }

private:
    double m_time;
};

struct IntegratorConfig
{
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = 0;             // 0 means no cap
    std::vector<double> sample_times; // empty: record the span endpoints only
    long max_steps = 50'000'000;

    void validate() const;
};

struct TimeSpan
{
    double start = 0;
    double stop = 0;
};

// Worst deviations from the state invariants over a trajectory.
struct StateChecks
{
    double max_trace_error = 0;       // |Tr rho - 1| or |<psi|psi> - 1|
    double max_hermiticity_error = 0;
    double min_eigenvalue = 1;
};

struct Observable
{
    std::string name;
    std::vector<double> values;
};

struct Trajectory
{
    std::vector<double> times;
    std::vector<QuantumState> states;
    // Populations of the nine product states (flat basis order, named
    // "p11" ... "p33") followed by the fidelities "F_s12", "F_a12",
    // "F_s13", "F_a13".
    std::vector<Observable> observables;
    StateChecks checks;
    std::vector<std::string> warnings;
    long accepted_steps = 0;
    long rejected_steps = 0;

    const std::vector<double> &observable(const std::string &name) const;
    const QuantumState &final_state() const { return states.back(); }
};

// Names of the observables recorded for every trajectory, in column order.
const std::vector<std::string> &observable_names();

using HamiltonianFn = std::function<Operator9(double)>;

// Schroedinger evolution d(psi)/dt = -i H(t) psi.
Trajectory propagate_state(const QuantumState &psi0, const HamiltonianFn &hamiltonian,
                           TimeSpan span, const IntegratorConfig &cfg = {});
// Master equation d(rho)/dt = L(t) rho.
Trajectory propagate_density(const QuantumState &rho0, const Liouvillian &liouvillian,
                             TimeSpan span, const IntegratorConfig &cfg = {});

// exp(L t) rho0 for a time-independent generator.
QuantumState expm_propagate(const QuantumState &rho0, const Liouvillian &liouvillian, double t);

struct SteadyState
{
    std::optional<QuantumState> state; // set when the null space is one-dimensional
    int null_dimension = 0;
    std::vector<Operator9> null_basis; // orthonormal in the Hilbert-Schmidt product
    double residual = 0;               // ||L vec(rho)|| of the returned state
    double generator_norm = 0;         // largest singular value of L
    double gap_ratio = 0;              // smallest non-null singular value / largest

    bool unique() const { return null_dimension == 1; }
};

// Null space of a time-independent Liouvillian from its singular values,
// with null threshold 1e-10 times the largest singular value.
SteadyState steady_state(const Liouvillian &liouvillian);

} // namespace rddisim

#endif // RDDISIM_SOLVERS_H
