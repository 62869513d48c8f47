#ifndef RDDISIM_SCHEMES_H
#define RDDISIM_SCHEMES_H

#include "rddisim/dynamics.h"
#include "rddisim/rddi.h"
#include "rddisim/solvers.h"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rddisim {

enum class Scheme { raman, stirap, pumping };

// Laser configurations of the three entangling protocols:
//   eq5     Raman pulses through s13 into s12, both beams symmetric
//   eq6     Raman pulses through a13 into a12, 1-3 beam running-wave antisymmetric
//   eq7     STIRAP 11 -> s13 -> a12 with a standing-wave 2-3 beam
//   eq8sym  optical pumping into a12, symmetric beams
//   eq8asym optical pumping into a12, standing-wave antisymmetric beams
enum class PresetName { eq5, eq6, eq7, eq8sym, eq8asym };

std::string to_string(Scheme scheme);
std::string to_string(PresetName preset);
Scheme scheme_from_string(const std::string &name);
PresetName preset_from_string(const std::string &name);
Scheme scheme_of(PresetName preset);

class DegenerateSteadyState : public std::runtime_error
{
public:
    DegenerateSteadyState(const std::string &what, int null_dimension) :
        std::runtime_error(what), m_null_dimension(null_dimension)
    {}
    int null_dimension() const { return m_null_dimension; }

private:
    int m_null_dimension;
};

class AmbiguousLabel : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct SchemePreset
{
    PresetName preset = PresetName::eq5;
    SystemConfig system;
    JitterSpec jitter;
    IntegratorConfig integrator;

    // Phase differences; unset means the value printed for the preset.
    std::optional<double> alpha13;
    std::optional<double> alpha23;
    // true: detunings that make the preset's transitions exactly resonant
    // in the two-atom spectrum; false: the printed +-chi/2 values.
    bool auto_resonance = true;
    // Explicit detunings override both of the above.
    std::optional<double> delta13;
    std::optional<double> delta23;

    // Constant Rabi amplitude (Raman pulses, pumping). When omega_over_chi13
    // is set it takes precedence: Omega = omega_over_chi13 * |chi13|.
    double omega = 0.001;
    std::optional<double> omega_over_chi13;

    // STIRAP: pulse area Omega_0 tau_p, width tau_p (default
    // 0.1/(gamma13 + gamma23)) and truncation at t_0 +- truncation*tau_p.
    double pulse_area = 5;
    std::optional<double> pulse_width;
    double truncation = 5;
    bool master_equation = false;

    // Raman: false switches off radiative decay (coherent comparison run).
    bool decay = true;

    // Pumping: length of the optional relaxation trajectory from |11>.
    double relaxation_time = 0;

    // Number of trajectory samples per propagation segment.
    int samples = 201;

    Scheme scheme() const { return scheme_of(preset); }
    std::string target() const;
    void validate() const;
};

SchemePreset make_preset(PresetName preset, const SystemConfig &system = {});

// Laser parameters exactly as printed for the preset.
struct PrintedParameters
{
    double alpha13 = 0;
    double alpha23 = 0;
    double delta13 = 0;
    double delta23 = 0;
};
PrintedParameters printed_parameters(PresetName preset, const SystemConfig &system,
                                     const RDDICouplings &couplings);

struct SpectrumLevel
{
    std::string label;  // dominant Dicke-like component
    double energy = 0;
    double weight = 0;  // population of the dominant component
};

struct ResonanceLine
{
    std::string from;
    std::string to;
    Transition laser = Transition::k13;
    double frequency = 0;       // E_to - E_from; zero on resonance
    complex matrix_element = 0; // <to| Omega D_laser |from>
};

struct ResonanceTable
{
    std::vector<SpectrumLevel> levels;
    std::vector<ResonanceLine> lines;

    const SpectrumLevel &level(const std::string &label) const;
    const ResonanceLine &line(const std::string &from, const std::string &to, Transition laser) const;
};

// Eigenstates of a drive-free Hamiltonian labeled by their dominant
// Dicke-like component; throws AmbiguousLabel when no component exceeds 1/2.
ResonanceTable spectrum_table(const Operator9 &static_h, const DriveSpec &drive);

// Fully resolved laser parameters of a preset.
struct ResolvedDrive
{
    RDDICouplings couplings;
    DriveSpec drive; // constant envelopes with the scheme's peak amplitudes
    PrintedParameters printed;
    std::vector<std::string> warnings;
};
ResolvedDrive resolve_drive(const SchemePreset &preset);

ResonanceTable resonance_table(const SchemePreset &preset);

struct RunDiagnostics
{
    RDDICouplings couplings;
    PrintedParameters printed;
    double alpha13 = 0, alpha23 = 0;
    double delta13 = 0, delta23 = 0;
    double omega = 0;
    std::vector<std::pair<std::string, double>> values; // scheme-specific numbers
    std::vector<ResonanceLine> lines;                   // lines the scheme relies on
    std::vector<std::string> warnings;
    double wall_time = 0; // seconds
};

struct RunResult
{
    Scheme scheme = Scheme::raman;
    std::string target;
    double final_fidelity = 0;
    std::optional<Trajectory> trajectory;
    std::optional<SteadyState> steady;
    RunDiagnostics diagnostics;
};

RunResult run_raman(const SchemePreset &preset);
RunResult run_stirap(const SchemePreset &preset);
RunResult run_pumping(const SchemePreset &preset);
RunResult run_scheme(const SchemePreset &preset);

struct StirapOptimum
{
    double area = 0;
    double fidelity = 0;
};
// Best STIRAP fidelity over the given pulse areas.
StirapOptimum optimize_stirap_area(const SchemePreset &preset, const std::vector<double> &areas);

struct GridAxis
{
    std::string name;
    std::vector<double> values;
};

// Names accepted as grid axes.
const std::vector<std::string> &sweep_axis_names();
void apply_axis(SchemePreset &preset, const std::string &name, double value);

struct SweepRow
{
    std::vector<double> parameters; // one per axis
    std::optional<double> fidelity;
    std::string error;
};

struct SweepTable
{
    std::vector<std::string> axes;
    std::vector<SweepRow> rows; // cartesian product, first axis slowest
};

// Evaluates the preset on every grid point; jobs <= 1 runs sequentially.
SweepTable sweep(const SchemePreset &base, const std::vector<GridAxis> &grid, int jobs = 1);

} // namespace rddisim

#endif // RDDISIM_SCHEMES_H
