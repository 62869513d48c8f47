#include "rddisim/solvers.h"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rddisim {

namespace {

using Vec = Eigen::VectorXcd;
using Rhs = std::function<void(double, const Vec &, Vec &)>;
using Recorder = std::function<void(double, const Vec &)>;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0/5, c3 = 3.0/10, c4 = 4.0/5, c5 = 8.0/9;
constexpr double a21 = 1.0/5;
constexpr double a31 = 3.0/40, a32 = 9.0/40;
constexpr double a41 = 44.0/45, a42 = -56.0/15, a43 = 32.0/9;
constexpr double a51 = 19372.0/6561, a52 = -25360.0/2187, a53 = 64448.0/6561, a54 = -212.0/729;
constexpr double a61 = 9017.0/3168, a62 = -355.0/33, a63 = 46732.0/5247, a64 = 49.0/176,
                 a65 = -5103.0/18656;
constexpr double b1 = 35.0/384, b3 = 500.0/1113, b4 = 125.0/192, b5 = -2187.0/6784, b6 = 11.0/84;
constexpr double e1 = 71.0/57600, e3 = -71.0/16695, e4 = 71.0/1920, e5 = -17253.0/339200,
                 e6 = 22.0/525, e7 = -1.0/40;

double error_norm(const Vec &err, const Vec &y0, const Vec &y1, const IntegratorConfig &cfg)
{
    double sum = 0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double scale = cfg.abs_tol + cfg.rel_tol*std::max(std::abs(y0(i)), std::abs(y1(i)));
        const double r = std::abs(err(i))/scale;
        sum += r*r;
    }
    return std::sqrt(sum/static_cast<double>(err.size()));
}

// unit_norm: the rhs is linear and norm preserving; each accepted step is
// projected back onto the unit sphere.
void integrate(const Rhs &rhs, Vec y, TimeSpan span, const IntegratorConfig &cfg,
               const Recorder &record, long &accepted, long &rejected, bool unit_norm = false)
{
    std::vector<double> samples = cfg.sample_times;
    if (samples.empty()) {
        samples = {span.start, span.stop};
    }
    for (const double s : samples) {
        if (s < span.start || s > span.stop) {
            throw std::invalid_argument("sample time outside the integration span");
        }
    }

    const double length = span.stop - span.start;
    double t = span.start;
    auto next_sample = samples.begin();
    while (next_sample != samples.end() && *next_sample <= t) {
        record(t, y);
        ++next_sample;
    }
    if (length == 0) {
        return;
    }

    const Eigen::Index n = y.size();
    Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y_new(n), err(n);
    rhs(t, y, k1);

    // Initial step from the scale of y and its derivative.
    double h = 0.01*std::max(y.norm(), 1e-6)/std::max(k1.norm(), 1e-12);
    h = std::min(h, length);
    if (cfg.max_step > 0) {
        h = std::min(h, cfg.max_step);
    }

    long steps = 0;
    while (t < span.stop) {
        if (++steps > cfg.max_steps) {
            std::ostringstream msg;
            msg << "tolerance not met within " << cfg.max_steps << " steps (t = " << t << ")";
            throw SolverError(msg.str(), t);
        }
        const double target = next_sample != samples.end() ? *next_sample : span.stop;
        bool hits_target = false;
        double step = h;
        if (t + step >= target) {
            step = target - t;
            hits_target = true;
        }
        if (step <= 1e-14*std::max(std::abs(t), length)) {
            std::ostringstream msg;
            msg << "step size underflow at t = " << t;
            throw SolverError(msg.str(), t);
        }

        tmp = y + step*a21*k1;
        rhs(t + c2*step, tmp, k2);
        tmp = y + step*(a31*k1 + a32*k2);
        rhs(t + c3*step, tmp, k3);
        tmp = y + step*(a41*k1 + a42*k2 + a43*k3);
        rhs(t + c4*step, tmp, k4);
        tmp = y + step*(a51*k1 + a52*k2 + a53*k3 + a54*k4);
        rhs(t + c5*step, tmp, k5);
        tmp = y + step*(a61*k1 + a62*k2 + a63*k3 + a64*k4 + a65*k5);
        rhs(t + step, tmp, k6);
        y_new = y + step*(b1*k1 + b3*k3 + b4*k4 + b5*k5 + b6*k6);
        rhs(t + step, y_new, k7);
        err = step*(e1*k1 + e3*k3 + e4*k4 + e5*k5 + e6*k6 + e7*k7);

        const double e = error_norm(err, y, y_new, cfg);
        if (!std::isfinite(e)) {
            throw SolverError("non-finite state during integration", t);
        }
        const double factor = e == 0 ? 5.0 : std::clamp(0.9*std::pow(e, -0.2), 0.2, 5.0);
        if (e <= 1.0) {
            t = hits_target ? target : t + step;
            y.swap(y_new);
            k1.swap(k7);
            if (unit_norm) {
                const double scale = 1.0/y.norm();
                y *= scale;
                k1 *= scale;
            }
            ++accepted;
            while (next_sample != samples.end() && *next_sample <= t) {
                record(t, y);
                ++next_sample;
            }
            // A step shortened to land on a sample says nothing about h.
            if (!hits_target || step >= h) {
                h = step*factor;
            }
        } else {
            ++rejected;
            h = step*std::min(factor, 1.0);
        }
        if (cfg.max_step > 0) {
            h = std::min(h, cfg.max_step);
        }
    }
}

std::vector<StateVector> observable_targets()
{
    std::vector<StateVector> targets;
    for (int f = 0; f < dim; ++f) {
        const BasisIndex idx = BasisIndex::from_flat(f);
        targets.push_back(basis_ket(idx.a, idx.b));
    }
    for (const char *label : {"s12", "a12", "s13", "a13"}) {
        targets.push_back(dicke_state_from_label(label).vector());
    }
    return targets;
}

Trajectory empty_trajectory()
{
    Trajectory traj;
    for (const std::string &name : observable_names()) {
        traj.observables.push_back(Observable{name, {}});
    }
    return traj;
}

} // unnamed namespace

void IntegratorConfig::validate() const
{
    if (!(rel_tol > 0) || !(abs_tol > 0)) {
        throw std::invalid_argument("integrator tolerances must be positive");
    }
    if (!(max_step >= 0)) {
        throw std::invalid_argument("max_step must be non-negative");
    }
    for (std::size_t i = 1; i < sample_times.size(); ++i) {
        if (!(sample_times[i] > sample_times[i - 1])) {
            throw std::invalid_argument("sample_times must be strictly increasing");
        }
    }
}

const std::vector<double> &Trajectory::observable(const std::string &name) const
{
    for (const Observable &o : observables) {
        if (o.name == name) {
            return o.values;
        }
    }
    throw std::out_of_range("no observable named '" + name + "'");
}

const std::vector<std::string> &observable_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (int f = 0; f < dim; ++f) {
            v.push_back("p" + BasisIndex::from_flat(f).label());
        }
        for (const char *label : {"s12", "a12", "s13", "a13"}) {
            v.push_back(std::string("F_") + label);
        }
        return v;
    }();
    return names;
}

Trajectory propagate_state(const QuantumState &psi0, const HamiltonianFn &hamiltonian,
                           TimeSpan span, const IntegratorConfig &cfg)
{
    psi0.validate();
    cfg.validate();
    if (!psi0.is_pure()) {
        throw std::invalid_argument("propagate_state needs a pure initial state");
    }
    if (!(span.stop >= span.start)) {
        throw std::invalid_argument("integration span must satisfy start <= stop");
    }

    const std::vector<StateVector> targets = observable_targets();
    Trajectory traj = empty_trajectory();
    traj.checks.min_eigenvalue = 0;

    const Rhs rhs = [&hamiltonian](double t, const Vec &y, Vec &dy) {
        const StateVector psi = y;
        dy = complex(0, -1)*(hamiltonian(t)*psi);
    };
    const Recorder record = [&](double t, const Vec &y) {
        const StateVector psi = y;
        traj.times.push_back(t);
        traj.states.push_back(QuantumState::pure(psi));
        for (std::size_t j = 0; j < targets.size(); ++j) {
            traj.observables[j].values.push_back(population(psi, targets[j]));
        }
        traj.checks.max_trace_error = std::max(traj.checks.max_trace_error,
                                               std::abs(psi.squaredNorm() - 1.0));
    };
    integrate(rhs, psi0.vector(), span, cfg, record, traj.accepted_steps, traj.rejected_steps, true);
    if (traj.checks.max_trace_error > 1e-9) {
        traj.warnings.push_back("norm drift exceeded 1e-9");
    }
    return traj;
}

Trajectory propagate_density(const QuantumState &rho0, const Liouvillian &liouvillian,
                             TimeSpan span, const IntegratorConfig &cfg)
{
    rho0.validate();
    cfg.validate();
    if (!(span.stop >= span.start)) {
        throw std::invalid_argument("integration span must satisfy start <= stop");
    }

    const std::vector<StateVector> targets = observable_targets();
    Trajectory traj = empty_trajectory();

    const Rhs rhs = [&liouvillian](double t, const Vec &y, Vec &dy) {
        liouvillian.apply(t, y, dy);
    };
    const Recorder record = [&](double t, const Vec &y) {
        const Operator9 rho = unvectorize(y);
        traj.times.push_back(t);
        traj.states.push_back(QuantumState::mixed(rho));
        for (std::size_t j = 0; j < targets.size(); ++j) {
            traj.observables[j].values.push_back(population(rho, targets[j]));
        }
        StateChecks &c = traj.checks;
        c.max_trace_error = std::max(c.max_trace_error, std::abs(rho.trace() - 1.0));
        c.max_hermiticity_error = std::max(c.max_hermiticity_error, hermiticity_error(rho));
        c.min_eigenvalue = std::min(c.min_eigenvalue, min_eigenvalue(rho));
    };
    integrate(rhs, vectorize(rho0.density()), span, cfg, record,
              traj.accepted_steps, traj.rejected_steps);
    if (traj.checks.min_eigenvalue < -1e-7) {
        std::ostringstream msg;
        msg << "positivity drift: minimum eigenvalue " << traj.checks.min_eigenvalue;
        traj.warnings.push_back(msg.str());
    }
    if (traj.checks.max_trace_error > 1e-7) {
        traj.warnings.push_back("trace drift exceeded 1e-7");
    }
    return traj;
}

QuantumState expm_propagate(const QuantumState &rho0, const Liouvillian &liouvillian, double t)
{
    rho0.validate();
    const Superoperator &l = liouvillian.matrix();
    if (t == 0) {
        return QuantumState::mixed(rho0.density());
    }
    const double scale = l.cwiseAbs().colwise().sum().maxCoeff()*std::abs(t);
    if (!std::isfinite(scale) || scale > 1e8) {
        std::ostringstream msg;
        msg << "matrix exponential ill-conditioned: ||L t||_1 = " << scale;
        throw SolverError(msg.str(), t);
    }
    const Superoperator propagator = (l*t).exp();
    const Operator9 rho = unvectorize(propagator*vectorize(rho0.density()));
    if (!rho.allFinite() || std::abs(rho.trace() - 1.0) > 1e-6) {
        throw SolverError("matrix exponential lost trace preservation", t);
    }
    return QuantumState::mixed(rho);
}

SteadyState steady_state(const Liouvillian &liouvillian)
{
    const Superoperator &l = liouvillian.matrix();
    Eigen::BDCSVD<Superoperator> svd(l, Eigen::ComputeFullV);
    const Eigen::VectorXd &sv = svd.singularValues();
    const Eigen::Index n = sv.size();

    SteadyState result;
    result.generator_norm = sv(0);
    const double threshold = 1e-10*sv(0);
    Eigen::Index null_dim = 0;
    while (null_dim < n && sv(n - 1 - null_dim) < threshold) {
        ++null_dim;
    }
    result.null_dimension = static_cast<int>(null_dim);
    result.gap_ratio = null_dim < n ? sv(n - 1 - null_dim)/sv(0) : 0.0;
    if (null_dim == 0) {
        std::ostringstream msg;
        msg << "no stationary state: smallest singular value " << sv(n - 1)
            << " exceeds threshold " << threshold;
        throw SolverError(msg.str(), 0.0);
    }
    for (Eigen::Index j = n - null_dim; j < n; ++j) {
        result.null_basis.push_back(unvectorize(svd.matrixV().col(j)));
    }
    if (null_dim > 1) {
        return result;
    }

    Operator9 rho = result.null_basis.front();
    const complex tr = rho.trace();
    if (std::abs(tr) < 1e-12) {
        throw SolverError("stationary null vector has vanishing trace", 0.0);
    }
    rho /= tr;
    rho = (0.5*(rho + rho.adjoint())).eval();
    rho /= rho.trace().real();
    result.residual = (l*vectorize(rho)).norm();
    result.state = QuantumState::mixed(rho);
    return result;
}

} // namespace rddisim
