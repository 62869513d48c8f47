#include "rddisim/schemes.h"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

namespace rddisim {

namespace {

constexpr double pi = std::numbers::pi;

// Raman and pumping need Omega << chi13; beyond this ratio the run is
// flagged.
constexpr double weak_drive_ratio = 0.1;

struct Anchor
{
    const char *from;
    const char *to;
};

// Transitions each laser must drive on resonance: {1-3 laser, 2-3 laser}.
std::array<Anchor, 2> resonance_anchors(PresetName preset)
{
    switch (preset) {
    case PresetName::eq5:
        return {Anchor{"11", "s13"}, Anchor{"s13", "s12"}};
    case PresetName::eq6:
        return {Anchor{"11", "a13"}, Anchor{"a13", "a12"}};
    case PresetName::eq7:
        return {Anchor{"11", "s13"}, Anchor{"s13", "a12"}};
    case PresetName::eq8sym:
        return {Anchor{"11", "s13"}, Anchor{"22", "s23"}};
    case PresetName::eq8asym:
        return {Anchor{"11", "a13"}, Anchor{"22", "a23"}};
    }
    throw std::logic_error("unhandled preset");
}

std::string raman_transit(PresetName preset)
{
    return preset == PresetName::eq6 ? "a13" : "s13";
}

double default_pulse_width(const SystemConfig &system)
{
    return 0.1/(system.gamma13 + system.gamma23);
}

double pulse_width(const SchemePreset &preset)
{
    return preset.pulse_width.value_or(default_pulse_width(preset.system));
}

// Peak Rabi amplitude the preset asks for.
double scheme_amplitude(const SchemePreset &preset, const RDDICouplings &couplings)
{
    if (preset.scheme() == Scheme::stirap) {
        return preset.pulse_area/pulse_width(preset);
    }
    if (preset.omega_over_chi13) {
        return *preset.omega_over_chi13*std::abs(couplings.chi13);
    }
    return preset.omega;
}

DriveSpec constant_drive(double alpha13, double alpha23, double delta13, double delta23,
                         double omega13, double omega23)
{
    DriveSpec d;
    d.t13 = TransitionDrive{ConstantEnvelope{omega13}, alpha13, delta13};
    d.t23 = TransitionDrive{ConstantEnvelope{omega23}, alpha23, delta23};
    return d;
}

// Detunings (delta13, delta23) that zero the frequencies of both anchor
// lines. Level energies are linear in the detunings, so three spectra fix
// the linear map exactly.
std::pair<double, double> resonant_detunings(PresetName preset, const RDDICouplings &couplings,
                                             double alpha13, double alpha23)
{
    const auto anchors = resonance_anchors(preset);
    const double scale = std::max(1.0, std::abs(couplings.chi13));
    const auto frequencies = [&](double d13, double d23) {
        const DriveSpec drive = constant_drive(alpha13, alpha23, d13, d23, 1.0, 1.0);
        const ResonanceTable table = spectrum_table(static_hamiltonian(drive, couplings), drive);
        return Eigen::Vector2d(table.line(anchors[0].from, anchors[0].to, Transition::k13).frequency,
                               table.line(anchors[1].from, anchors[1].to, Transition::k23).frequency);
    };
    const Eigen::Vector2d f0 = frequencies(0, 0);
    Eigen::Matrix2d jac;
    jac.col(0) = (frequencies(scale, 0) - f0)/scale;
    jac.col(1) = (frequencies(0, scale) - f0)/scale;
    if (std::abs(jac.determinant()) < 1e-12) {
        throw std::runtime_error("anchor transitions do not fix both detunings");
    }
    const Eigen::Vector2d delta = jac.partialPivLu().solve(-f0);
    return {delta(0), delta(1)};
}

void merge_checks(StateChecks &into, const StateChecks &from)
{
    into.max_trace_error = std::max(into.max_trace_error, from.max_trace_error);
    into.max_hermiticity_error = std::max(into.max_hermiticity_error, from.max_hermiticity_error);
    into.min_eigenvalue = std::min(into.min_eigenvalue, from.min_eigenvalue);
}

// Appends a trajectory that starts where `into` ends, shifting its times.
void append_segment(Trajectory &into, const Trajectory &segment, double offset)
{
    const std::size_t skip = into.times.empty() ? 0 : 1;
    for (std::size_t i = skip; i < segment.times.size(); ++i) {
        into.times.push_back(segment.times[i] + offset);
        into.states.push_back(segment.states[i]);
        for (std::size_t j = 0; j < segment.observables.size(); ++j) {
            into.observables[j].values.push_back(segment.observables[j].values[i]);
        }
    }
    merge_checks(into.checks, segment.checks);
    into.warnings.insert(into.warnings.end(), segment.warnings.begin(), segment.warnings.end());
    into.accepted_steps += segment.accepted_steps;
    into.rejected_steps += segment.rejected_steps;
}

IntegratorConfig with_samples(IntegratorConfig cfg, TimeSpan span, int samples)
{
    cfg.sample_times.clear();
    if (samples < 2) {
        samples = 2;
    }
    for (int i = 0; i < samples; ++i) {
        const double x = static_cast<double>(i)/(samples - 1);
        cfg.sample_times.push_back(i == samples - 1 ? span.stop : span.start + x*(span.stop - span.start));
    }
    return cfg;
}

double target_population(const QuantumState &state, const std::string &target)
{
    const StateVector t = dicke_state_from_label(target).vector();
    const double p = state.is_pure() ? population(state.vector(), t) : population(state.matrix(), t);
    return std::clamp(p, 0.0, 1.0);
}

RunDiagnostics base_diagnostics(const ResolvedDrive &resolved)
{
    RunDiagnostics d;
    d.couplings = resolved.couplings;
    d.printed = resolved.printed;
    d.alpha13 = resolved.drive.t13.alpha;
    d.alpha23 = resolved.drive.t23.alpha;
    d.delta13 = resolved.drive.t13.delta;
    d.delta23 = resolved.drive.t23.delta;
    d.omega = resolved.drive.t13.omega();
    d.warnings = resolved.warnings;
    return d;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // unnamed namespace

std::string to_string(Scheme scheme)
{
    switch (scheme) {
    case Scheme::raman: return "raman";
    case Scheme::stirap: return "stirap";
    case Scheme::pumping: return "pumping";
    }
    throw std::logic_error("unhandled scheme");
}

std::string to_string(PresetName preset)
{
    switch (preset) {
    case PresetName::eq5: return "eq5";
    case PresetName::eq6: return "eq6";
    case PresetName::eq7: return "eq7";
    case PresetName::eq8sym: return "eq8sym";
    case PresetName::eq8asym: return "eq8asym";
    }
    throw std::logic_error("unhandled preset");
}

Scheme scheme_from_string(const std::string &name)
{
    if (name == "raman") return Scheme::raman;
    if (name == "stirap") return Scheme::stirap;
    if (name == "pumping" || name == "pump") return Scheme::pumping;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

PresetName preset_from_string(const std::string &name)
{
    for (const PresetName p : {PresetName::eq5, PresetName::eq6, PresetName::eq7,
                               PresetName::eq8sym, PresetName::eq8asym}) {
        if (to_string(p) == name) {
            return p;
        }
    }
    throw std::invalid_argument("unknown preset '" + name + "'");
}

Scheme scheme_of(PresetName preset)
{
    switch (preset) {
    case PresetName::eq5:
    case PresetName::eq6:
        return Scheme::raman;
    case PresetName::eq7:
        return Scheme::stirap;
    case PresetName::eq8sym:
    case PresetName::eq8asym:
        return Scheme::pumping;
    }
    throw std::logic_error("unhandled preset");
}

std::string SchemePreset::target() const
{
    return preset == PresetName::eq5 ? "s12" : "a12";
}

void SchemePreset::validate() const
{
    system.validate();
    jitter.validate();
    integrator.validate();
    if (!(omega >= 0) || !std::isfinite(omega)) {
        throw std::invalid_argument("omega must be non-negative");
    }
    if (omega_over_chi13 && !(*omega_over_chi13 >= 0)) {
        throw std::invalid_argument("omega_over_chi13 must be non-negative");
    }
    if (!(pulse_area > 0) || !std::isfinite(pulse_area)) {
        throw std::invalid_argument("pulse_area must be positive");
    }
    if (pulse_width && !(*pulse_width > 0)) {
        throw std::invalid_argument("pulse_width must be positive");
    }
    if (!(truncation > 0)) {
        throw std::invalid_argument("truncation must be positive");
    }
    if (!(relaxation_time >= 0)) {
        throw std::invalid_argument("relaxation_time must be non-negative");
    }
    if (samples < 2) {
        throw std::invalid_argument("samples must be at least 2");
    }
}

SchemePreset make_preset(PresetName preset, const SystemConfig &system)
{
    SchemePreset p;
    p.preset = preset;
    p.system = system;
    switch (scheme_of(preset)) {
    case Scheme::raman:
        p.omega_over_chi13 = 0.05;
        break;
    case Scheme::stirap:
        p.pulse_area = 5;
        break;
    case Scheme::pumping:
        p.omega = 0.001;
        p.jitter.rate = 0.01;
        break;
    }
    return p;
}

PrintedParameters printed_parameters(PresetName preset, const SystemConfig &system,
                                     const RDDICouplings &couplings)
{
    PrintedParameters p;
    switch (preset) {
    case PresetName::eq5:
        p.delta13 = p.delta23 = couplings.chi13/2;
        break;
    case PresetName::eq6:
        p.alpha13 = system.phi13;
        p.delta13 = p.delta23 = -couplings.chi13/2;
        break;
    case PresetName::eq7:
        p.alpha23 = pi;
        p.delta13 = p.delta23 = couplings.chi13/2;
        break;
    case PresetName::eq8sym:
        p.delta13 = couplings.chi13/2;
        p.delta23 = couplings.chi23/2;
        break;
    case PresetName::eq8asym:
        p.alpha13 = p.alpha23 = pi;
        p.delta13 = -couplings.chi13/2;
        p.delta23 = -couplings.chi23/2;
        break;
    }
    return p;
}

const SpectrumLevel &ResonanceTable::level(const std::string &label) const
{
    for (const SpectrumLevel &l : levels) {
        if (l.label == label) {
            return l;
        }
    }
    throw std::out_of_range("no level labeled '" + label + "'");
}

const ResonanceLine &ResonanceTable::line(const std::string &from, const std::string &to,
                                          Transition laser) const
{
    for (const ResonanceLine &l : lines) {
        if (l.from == from && l.to == to && l.laser == laser) {
            return l;
        }
    }
    throw std::out_of_range("no line " + from + " -> " + to);
}

ResonanceTable spectrum_table(const Operator9 &static_h, const DriveSpec &drive)
{
    const Operator9 h_dicke = to_dicke_basis(static_h);
    Eigen::SelfAdjointEigenSolver<Operator9> es(0.5*(h_dicke + h_dicke.adjoint()));
    const Eigen::Matrix<double, dim, 1> energies = es.eigenvalues();
    Operator9 vecs = es.eigenvectors();

    // Degenerate eigenvectors are arbitrary within their subspace; rotate
    // each cluster onto the Dicke-like basis by diagonalizing the Dicke
    // index operator restricted to it.
    const double tol = 1e-9*std::max(1.0, energies.cwiseAbs().maxCoeff());
    Eigen::Matrix<double, dim, 1> index_op;
    for (int j = 0; j < dim; ++j) {
        index_op(j) = j;
    }
    for (int start = 0; start < dim;) {
        int stop = start + 1;
        while (stop < dim && energies(stop) - energies(stop - 1) <= tol) {
            ++stop;
        }
        const int m = stop - start;
        if (m > 1) {
            const Eigen::MatrixXcd block = vecs.middleCols(start, m);
            const Eigen::MatrixXcd proj = block.adjoint()*index_op.asDiagonal()*block;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> sub(0.5*(proj + proj.adjoint()));
            vecs.middleCols(start, m) = block*sub.eigenvectors();
        }
        start = stop;
    }

    ResonanceTable table;
    std::vector<StateVector> states;
    std::vector<bool> used(dim, false);
    for (int i = 0; i < dim; ++i) {
        StateVector v = vecs.col(i);
        int best = 0;
        const double weight = v.cwiseAbs2().maxCoeff(&best);
        if (weight <= 0.5) {
            std::ostringstream msg;
            msg << "eigenstate at energy " << energies(i)
                << " has no dominant Dicke-like component (max weight " << weight << ")";
            throw AmbiguousLabel(msg.str());
        }
        if (used[best]) {
            throw AmbiguousLabel("two eigenstates share the label " + dicke_labels()[best]);
        }
        used[best] = true;
        v *= std::conj(v(best))/std::abs(v(best));
        table.levels.push_back(SpectrumLevel{dicke_labels()[best], energies(i), weight});
        states.push_back(dicke_basis()*v);
    }

    for (const Transition laser : {Transition::k13, Transition::k23}) {
        const Operator9 d = drive[laser].omega()*unit_drive_operator(laser, drive[laser].alpha);
        for (int a = 0; a < dim; ++a) {
            for (int b = 0; b < dim; ++b) {
                if (a == b) {
                    continue;
                }
                ResonanceLine line;
                line.from = table.levels[a].label;
                line.to = table.levels[b].label;
                line.laser = laser;
                line.frequency = table.levels[b].energy - table.levels[a].energy;
                line.matrix_element = states[b].dot(d*states[a]);
                table.lines.push_back(line);
            }
        }
    }
    return table;
}

ResolvedDrive resolve_drive(const SchemePreset &preset)
{
    preset.validate();
    ResolvedDrive r;
    r.couplings = couplings_for_pair(preset.system);
    r.printed = printed_parameters(preset.preset, preset.system, r.couplings);

    const double alpha13 = preset.alpha13.value_or(r.printed.alpha13);
    const double alpha23 = preset.alpha23.value_or(r.printed.alpha23);
    double delta13 = r.printed.delta13;
    double delta23 = r.printed.delta23;
    if (preset.auto_resonance) {
        std::tie(delta13, delta23) = resonant_detunings(preset.preset, r.couplings, alpha13, alpha23);
    }
    delta13 = preset.delta13.value_or(delta13);
    delta23 = preset.delta23.value_or(delta23);

    const double omega = scheme_amplitude(preset, r.couplings);
    r.drive = constant_drive(alpha13, alpha23, delta13, delta23, omega, omega);

    if (preset.scheme() != Scheme::stirap && omega > weak_drive_ratio*std::abs(r.couplings.chi13)) {
        std::ostringstream msg;
        msg << "weak-drive condition violated: Omega = " << omega
            << " is not small against |chi13| = " << std::abs(r.couplings.chi13);
        r.warnings.push_back(msg.str());
    }
    return r;
}

ResonanceTable resonance_table(const SchemePreset &preset)
{
    const ResolvedDrive r = resolve_drive(preset);
    return spectrum_table(static_hamiltonian(r.drive, r.couplings), r.drive);
}

RunResult run_raman(const SchemePreset &preset)
{
    if (preset.scheme() != Scheme::raman) {
        throw std::invalid_argument("run_raman needs preset eq5 or eq6");
    }
    const auto start = std::chrono::steady_clock::now();
    const ResolvedDrive r = resolve_drive(preset);
    const ResonanceTable table = spectrum_table(static_hamiltonian(r.drive, r.couplings), r.drive);

    const std::string transit = raman_transit(preset.preset);
    const std::string target = preset.target();
    const ResonanceLine &first = table.line("11", transit, Transition::k13);
    const ResonanceLine &second = table.line(transit, target, Transition::k23);
    if (std::abs(first.matrix_element) < 1e-14 || std::abs(second.matrix_element) < 1e-14) {
        throw std::runtime_error("Raman pulse has a vanishing transition matrix element");
    }
    const double t1 = pi/(2*std::abs(first.matrix_element));
    const double t2 = pi/(2*std::abs(second.matrix_element));

    const double omega = r.drive.t13.omega();
    DriveSpec pulse1 = r.drive;
    pulse1.t23.envelope = ConstantEnvelope{0.0};
    DriveSpec pulse2 = r.drive;
    pulse2.t13.envelope = ConstantEnvelope{0.0};

    const Liouvillian l1 = assemble_liouvillian(pulse1, r.couplings, preset.system, preset.jitter,
                                                preset.decay);
    const Liouvillian l2 = assemble_liouvillian(pulse2, r.couplings, preset.system, preset.jitter,
                                                preset.decay);

    const QuantumState rho0 = QuantumState::mixed(dicke_state_from_label("11").density());
    const TimeSpan span1{0, t1};
    const TimeSpan span2{0, t2};
    const Trajectory seg1 = propagate_density(rho0, l1, span1,
                                              with_samples(preset.integrator, span1, preset.samples));
    const Trajectory seg2 = propagate_density(seg1.final_state(), l2, span2,
                                              with_samples(preset.integrator, span2, preset.samples));

    RunResult result;
    result.scheme = Scheme::raman;
    result.target = target;
    Trajectory traj = seg1;
    append_segment(traj, seg2, t1);
    result.final_fidelity = target_population(traj.final_state(), target);

    result.diagnostics = base_diagnostics(r);
    result.diagnostics.omega = omega;
    result.diagnostics.values = {
        {"pulse1_duration", t1},
        {"pulse2_duration", t2},
        {"transit_population_after_pulse1", target_population(seg1.final_state(), transit)},
    };
    result.diagnostics.lines = {first, second};
    result.diagnostics.warnings.insert(result.diagnostics.warnings.end(), traj.warnings.begin(),
                                       traj.warnings.end());
    result.trajectory = std::move(traj);
    result.diagnostics.wall_time = seconds_since(start);
    return result;
}

RunResult run_stirap(const SchemePreset &preset)
{
    if (preset.scheme() != Scheme::stirap) {
        throw std::invalid_argument("run_stirap needs preset eq7");
    }
    const auto start = std::chrono::steady_clock::now();
    const ResolvedDrive r = resolve_drive(preset);
    const ResonanceTable table = spectrum_table(static_hamiltonian(r.drive, r.couplings), r.drive);

    const double width = pulse_width(preset);
    const double omega0 = r.drive.t13.omega();
    // Counterintuitive order: the 2-3 (Stokes) pulse precedes the 1-3
    // (pump) pulse by one pulse length.
    const double stokes_center = 0;
    const double pump_center = width;
    DriveSpec drive = r.drive;
    drive.t13.envelope = GaussianEnvelope{omega0, width, pump_center};
    drive.t23.envelope = GaussianEnvelope{omega0, width, stokes_center};
    const TimeSpan span{stokes_center - preset.truncation*width, pump_center + preset.truncation*width};
    const IntegratorConfig cfg = with_samples(preset.integrator, span, preset.samples);

    RunResult result;
    result.scheme = Scheme::stirap;
    result.target = preset.target();
    if (preset.master_equation) {
        const Liouvillian l = assemble_liouvillian(drive, r.couplings, preset.system, preset.jitter);
        const QuantumState rho0 = QuantumState::mixed(dicke_state_from_label("11").density());
        result.trajectory = propagate_density(rho0, l, span, cfg);
    } else {
        // Energy origin on |11>: the resonant manifold then carries no fast
        // global phase, which would otherwise cost norm accuracy.
        const Operator9 h0 = static_hamiltonian(drive, r.couplings)
            - table.level("11").energy*Operator9::Identity();
        const Operator9 d13 = unit_drive_operator(Transition::k13, drive.t13.alpha);
        const Operator9 d23 = unit_drive_operator(Transition::k23, drive.t23.alpha);
        const HamiltonianFn h = [&](double t) -> Operator9 {
            return h0 + pulse_envelope(drive.t13.envelope, t)*d13
                + pulse_envelope(drive.t23.envelope, t)*d23;
        };
        result.trajectory = propagate_state(dicke_state_from_label("11"), h, span, cfg);
    }
    result.final_fidelity = target_population(result.trajectory->final_state(), result.target);

    result.diagnostics = base_diagnostics(r);
    result.diagnostics.values = {
        {"pulse_width", width},
        {"pulse_area", preset.pulse_area},
        {"omega0", omega0},
        {"stokes_center", stokes_center},
        {"pump_center", pump_center},
        {"t_start", span.start},
        {"t_stop", span.stop},
    };
    result.diagnostics.lines = {table.line("11", "s13", Transition::k13),
                                table.line("s13", "a12", Transition::k23)};
    result.diagnostics.warnings.insert(result.diagnostics.warnings.end(),
                                       result.trajectory->warnings.begin(),
                                       result.trajectory->warnings.end());
    result.diagnostics.wall_time = seconds_since(start);
    return result;
}

RunResult run_pumping(const SchemePreset &preset)
{
    if (preset.scheme() != Scheme::pumping) {
        throw std::invalid_argument("run_pumping needs preset eq8sym or eq8asym");
    }
    const auto start = std::chrono::steady_clock::now();
    const ResolvedDrive r = resolve_drive(preset);
    const ResonanceTable table = spectrum_table(static_hamiltonian(r.drive, r.couplings), r.drive);
    const Liouvillian l = assemble_liouvillian(r.drive, r.couplings, preset.system, preset.jitter);

    SteadyState ss = steady_state(l);
    if (!ss.unique()) {
        std::ostringstream msg;
        msg << "steady state is not unique: null space has dimension " << ss.null_dimension;
        throw DegenerateSteadyState(msg.str(), ss.null_dimension);
    }

    RunResult result;
    result.scheme = Scheme::pumping;
    result.target = preset.target();
    result.final_fidelity = target_population(*ss.state, result.target);
    if (preset.relaxation_time > 0) {
        const TimeSpan span{0, preset.relaxation_time};
        const QuantumState rho0 = QuantumState::mixed(dicke_state_from_label("11").density());
        result.trajectory = propagate_density(rho0, l, span,
                                              with_samples(preset.integrator, span, preset.samples));
        result.diagnostics.warnings = result.trajectory->warnings;
    }

    RunDiagnostics diag = base_diagnostics(r);
    diag.values = {
        {"null_dimension", static_cast<double>(ss.null_dimension)},
        {"residual", ss.residual},
        {"generator_norm", ss.generator_norm},
        {"gap_ratio", ss.gap_ratio},
    };
    const auto anchors = resonance_anchors(preset.preset);
    diag.lines = {table.line(anchors[0].from, anchors[0].to, Transition::k13),
                  table.line(anchors[1].from, anchors[1].to, Transition::k23)};
    diag.warnings.insert(diag.warnings.end(), result.diagnostics.warnings.begin(),
                         result.diagnostics.warnings.end());
    result.diagnostics = std::move(diag);
    result.steady = std::move(ss);
    result.diagnostics.wall_time = seconds_since(start);
    return result;
}

RunResult run_scheme(const SchemePreset &preset)
{
    switch (preset.scheme()) {
    case Scheme::raman: return run_raman(preset);
    case Scheme::stirap: return run_stirap(preset);
    case Scheme::pumping: return run_pumping(preset);
    }
    throw std::logic_error("unhandled scheme");
}

StirapOptimum optimize_stirap_area(const SchemePreset &preset, const std::vector<double> &areas)
{
    StirapOptimum best;
    best.fidelity = -1;
    for (const double area : areas) {
        SchemePreset p = preset;
        p.pulse_area = area;
        p.samples = 2;
        const double f = run_stirap(p).final_fidelity;
        if (f > best.fidelity) {
            best = StirapOptimum{area, f};
        }
    }
    return best;
}

const std::vector<std::string> &sweep_axis_names()
{
    static const std::vector<std::string> names = {
        "phi13", "f13", "omega", "omega_over_chi13", "area", "width",
        "gamma12", "gamma23", "freq_ratio", "alpha13", "alpha23"};
    return names;
}

void apply_axis(SchemePreset &preset, const std::string &name, double value)
{
    if (name == "phi13") {
        preset.system.phi13 = value;
    } else if (name == "f13") {
        preset.system.phi13 = phi_for_coupling_f(value, preset.system.geometry);
    } else if (name == "omega") {
        preset.omega = value;
        preset.omega_over_chi13.reset();
    } else if (name == "omega_over_chi13") {
        preset.omega_over_chi13 = value;
    } else if (name == "area") {
        preset.pulse_area = value;
    } else if (name == "width") {
        preset.pulse_width = value;
    } else if (name == "gamma12") {
        preset.jitter.rate = value;
    } else if (name == "gamma23") {
        preset.system.gamma23 = value;
    } else if (name == "freq_ratio") {
        preset.system.freq_ratio = value;
    } else if (name == "alpha13") {
        preset.alpha13 = value;
    } else if (name == "alpha23") {
        preset.alpha23 = value;
    } else {
        throw std::invalid_argument("unknown sweep axis '" + name + "'");
    }
}

SweepTable sweep(const SchemePreset &base, const std::vector<GridAxis> &grid, int jobs)
{
    SweepTable table;
    std::size_t count = grid.empty() ? 0 : 1;
    for (const GridAxis &axis : grid) {
        SchemePreset probe = base;
        apply_axis(probe, axis.name, 1.0); // rejects unknown names up front
        table.axes.push_back(axis.name);
        count *= axis.values.size();
    }
    table.rows.resize(count);

    const auto evaluate = [&](std::size_t index) {
        SweepRow &row = table.rows[index];
        row.parameters.resize(grid.size());
        std::size_t rest = index;
        for (std::size_t a = grid.size(); a-- > 0;) {
            const std::size_t n = grid[a].values.size();
            row.parameters[a] = grid[a].values[rest%n];
            rest /= n;
        }
        try {
            SchemePreset p = base;
            for (std::size_t a = 0; a < grid.size(); ++a) {
                apply_axis(p, grid[a].name, row.parameters[a]);
            }
            row.fidelity = run_scheme(p).final_fidelity;
        } catch (const std::exception &e) {
            row.error = e.what();
        }
    };

    const std::size_t workers = std::min<std::size_t>(std::max(jobs, 1), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            evaluate(i);
        }
        return table;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                evaluate(i);
            }
        });
    }
    for (std::thread &t : pool) {
        t.join();
    }
    return table;
}

} // namespace rddisim
