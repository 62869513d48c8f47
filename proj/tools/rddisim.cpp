// rddisim: command-line front end for the two-atom simulator.

#include "rddisim/config.h"
#include "rddisim/schemes.h"
#include "rddisim/table_io.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

using namespace rddisim;
using nlohmann::json;

namespace {

enum ExitCode { ok = 0, config_error = 2, solver_error = 3, degenerate = 4 };

struct Globals
{
    std::string config_path;
    std::string out_dir;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::string preset;
    std::string auto_resonance;
};

// Command-line overrides of config fields.
struct Overrides
{
    std::optional<double> phi;
    std::optional<double> f13;
    std::optional<double> omega;
    std::optional<double> area;
    std::optional<double> gamma12;
};

void add_overrides(CLI::App *cmd, Overrides &o)
{
    cmd->add_option("--phi", o.phi, "interatomic distance phi13 = k13 R");
    cmd->add_option("--f13", o.f13, "set phi13 from the coupling f13 (near-field branch)");
    cmd->add_option("--omega", o.omega, "constant Rabi amplitude (gamma13)");
    cmd->add_option("--area", o.area, "STIRAP pulse area Omega0 tau_p");
    cmd->add_option("--gamma12", o.gamma12, "lower-level jitter rate (gamma13)");
}

json read_json_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError({path + ": cannot open"});
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw ConfigError({path + ": " + e.what()});
    }
}

RunConfig build_config(const Globals &g, const Overrides &o, std::optional<Scheme> scheme)
{
    json doc = g.config_path.empty() ? json::object() : read_json_file(g.config_path);
    if (!doc.is_object()) {
        throw ConfigError({g.config_path + ": expected a JSON object"});
    }
    if (!g.preset.empty()) {
        doc["preset"] = g.preset;
    }
    if (scheme && !doc.contains("preset") && !doc.contains("scheme")) {
        doc["scheme"] = to_string(*scheme);
    }
    if (!g.auto_resonance.empty()) {
        doc["auto_resonance"] = g.auto_resonance == "on";
    }
    if (!g.out_dir.empty()) {
        doc["output"] = g.out_dir;
    }
    const auto patch = [&](const char *section, const char *key, const std::optional<double> &v) {
        if (v) {
            if (!doc.contains(section) || !doc[section].is_object()) {
                doc[section] = json::object();
            }
            doc[section][key] = *v;
        }
    };
    if (o.phi || o.f13) {
        if (doc.contains("system") && doc["system"].is_object()) {
            doc["system"].erase("phi13");
            doc["system"].erase("f13");
        }
    }
    patch("system", "phi13", o.phi);
    patch("system", "f13", o.f13);
    if (o.omega && doc.contains("drive") && doc["drive"].is_object()) {
        doc["drive"].erase("omega_over_chi13");
    }
    patch("drive", "omega", o.omega);
    patch("drive", "area", o.area);
    patch("jitter", "gamma12", o.gamma12);

    RunConfig config = parse_run_config(doc);
    if (scheme && config.preset.scheme() != *scheme) {
        throw ConfigError({"preset: " + to_string(config.preset.preset) + " is not a "
                           + to_string(*scheme) + " preset"});
    }
    return config;
}

void print_warnings(const std::vector<std::string> &warnings)
{
    for (const std::string &w : warnings) {
        std::cerr << "warning: " << w << '\n';
    }
}

std::filesystem::path prepare_out(const RunConfig &config)
{
    const std::filesystem::path dir(config.output_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

int cmd_run(const Globals &g, const Overrides &o, Scheme scheme)
{
    const RunConfig config = build_config(g, o, scheme);
    const RunResult result = run_scheme(config.preset);
    print_warnings(result.diagnostics.warnings);

    const std::filesystem::path dir = prepare_out(config);
    {
        std::ofstream csv(dir/"trajectory.csv", std::ios::binary);
        write_trajectory_csv(csv, result.trajectory ? &*result.trajectory : nullptr);
    }
    {
        std::ofstream js(dir/"summary.json", std::ios::binary);
        js << summary_json(result, config).dump(2) << '\n';
    }
    std::cout << "target " << result.target << " final_fidelity "
              << format_double(result.final_fidelity) << '\n';
    return ok;
}

int cmd_sweep(const Globals &g, const Overrides &o)
{
    const RunConfig config = build_config(g, o, std::nullopt);
    const SweepTable table = sweep(config.preset, config.grid, g.jobs);

    const std::filesystem::path dir = prepare_out(config);
    {
        std::ofstream csv(dir/"sweep.csv", std::ios::binary);
        write_sweep_csv(csv, table);
    }
    std::size_t failed = 0;
    for (const SweepRow &row : table.rows) {
        if (!row.fidelity) {
            ++failed;
            std::cerr << "error: " << row.error << '\n';
        }
    }
    std::cout << table.rows.size() << " points, " << failed << " failed\n";
    return !table.rows.empty() && failed == table.rows.size() ? solver_error : ok;
}

int cmd_spectrum(const Globals &g, const Overrides &o, bool all_lines)
{
    const RunConfig config = build_config(g, o, std::nullopt);
    const ResolvedDrive r = resolve_drive(config.preset);
    print_warnings(r.warnings);
    const ResonanceTable table = spectrum_table(static_hamiltonian(r.drive, r.couplings), r.drive);
    nlohmann::ordered_json doc;
    doc["preset"] = to_string(config.preset.preset);
    doc["drive"] = {
        {"omega", r.drive.t13.omega()},
        {"alpha13", r.drive.t13.alpha},
        {"alpha23", r.drive.t23.alpha},
        {"delta13", r.drive.t13.delta},
        {"delta23", r.drive.t23.delta},
    };
    const nlohmann::ordered_json t = resonance_table_to_json(table, !all_lines);
    doc["levels"] = t["levels"];
    doc["lines"] = t["lines"];
    std::cout << doc.dump(2) << '\n';
    return ok;
}

struct CouplingFlags
{
    std::optional<double> phi;
    std::optional<double> f13;
    bool perp = false;
    bool parallel = false;
    std::vector<double> e1, e2, er;
    std::optional<double> gamma13, gamma23, freq_ratio;
};

int cmd_couplings(const Globals &g, const CouplingFlags &c)
{
    SystemConfig system;
    if (!g.config_path.empty()) {
        system = load_run_config(g.config_path).preset.system;
    }
    if (c.parallel) {
        system.geometry.e1 = system.geometry.e2 = system.geometry.eR;
    }
    if (c.perp) {
        system.geometry = GeometryConfig{};
    }
    const auto vec = [](const std::vector<double> &v) { return Eigen::Vector3d(v[0], v[1], v[2]); };
    if (!c.e1.empty()) system.geometry.e1 = vec(c.e1);
    if (!c.e2.empty()) system.geometry.e2 = vec(c.e2);
    if (!c.er.empty()) system.geometry.eR = vec(c.er);
    if (c.gamma13) system.gamma13 = *c.gamma13;
    if (c.gamma23) system.gamma23 = *c.gamma23;
    if (c.freq_ratio) system.freq_ratio = *c.freq_ratio;
    system.geometry.validate();
    if (c.phi) {
        system.phi13 = *c.phi;
    } else if (c.f13) {
        system.phi13 = phi_for_coupling_f(*c.f13, system.geometry);
    }
    system.validate();
    const RDDICouplings couplings = couplings_for_pair(system);
    nlohmann::ordered_json doc = couplings_to_json(couplings, system);
    doc["geometry"] = geometry_to_json(system.geometry);
    std::cout << doc.dump(2) << '\n';
    return ok;
}

} // unnamed namespace

int main(int argc, char **argv)
{
    CLI::App app{"Two dipole-dipole coupled three-level atoms: entanglement schemes"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", g.out_dir, "output directory (overrides the config)");
    app.add_option("--jobs", g.jobs, "parallel sweep workers")->check(CLI::PositiveNumber);
    app.add_option("--preset", g.preset, "laser preset")
        ->check(CLI::IsMember({"eq5", "eq6", "eq7", "eq8sym", "eq8asym"}));
    app.add_option("--auto-resonance", g.auto_resonance,
                   "on: detunings from the exact spectrum; off: printed values")
        ->check(CLI::IsMember({"on", "off"}));

    CouplingFlags cf;
    CLI::App *couplings = app.add_subcommand("couplings", "print f, g, chi and gamma12 as JSON");
    couplings->add_option("--phi", cf.phi, "interatomic distance phi13 = k13 R");
    couplings->add_option("--f13", cf.f13, "find phi13 for this f13 (near-field branch)");
    couplings->add_flag("--perp", cf.perp, "dipoles parallel to each other, perpendicular to R (default)");
    couplings->add_flag("--parallel", cf.parallel, "dipoles along R");
    couplings->add_option("--e1", cf.e1, "dipole direction of atom 1")->expected(3);
    couplings->add_option("--e2", cf.e2, "dipole direction of atom 2")->expected(3);
    couplings->add_option("--eR", cf.er, "direction of the interatomic axis")->expected(3);
    couplings->add_option("--gamma13", cf.gamma13, "decay rate 3 -> 1");
    couplings->add_option("--gamma23", cf.gamma23, "decay rate 3 -> 2");
    couplings->add_option("--freq-ratio", cf.freq_ratio, "omega23 / omega13");

    Overrides o;
    bool all_lines = false;
    CLI::App *spectrum = app.add_subcommand("spectrum", "dump the two-atom resonance table as JSON");
    add_overrides(spectrum, o);
    spectrum->add_flag("--all", all_lines, "include lines with vanishing matrix elements");
    CLI::App *raman = app.add_subcommand("raman", "Raman pi-pulse scheme (eq5, eq6)");
    add_overrides(raman, o);
    CLI::App *stirap = app.add_subcommand("stirap", "STIRAP scheme (eq7)");
    add_overrides(stirap, o);
    CLI::App *pump = app.add_subcommand("pump", "optical pumping steady state (eq8sym, eq8asym)");
    add_overrides(pump, o);
    CLI::App *sweep_cmd = app.add_subcommand("sweep", "evaluate the config's grid block");
    add_overrides(sweep_cmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        if (*couplings) return cmd_couplings(g, cf);
        if (*spectrum) return cmd_spectrum(g, o, all_lines);
        if (*raman) return cmd_run(g, o, Scheme::raman);
        if (*stirap) return cmd_run(g, o, Scheme::stirap);
        if (*pump) return cmd_run(g, o, Scheme::pumping);
        if (*sweep_cmd) return cmd_sweep(g, o);
    } catch (const ConfigError &e) {
        std::cerr << e.what() << '\n';
        return config_error;
    } catch (const DegenerateSteadyState &e) {
        std::cerr << "degenerate steady state: " << e.what() << '\n';
        return degenerate;
    } catch (const SolverError &e) {
        std::cerr << "solver error at t = " << e.time() << ": " << e.what() << '\n';
        return solver_error;
    } catch (const std::invalid_argument &e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return config_error;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return solver_error;
    }
    return config_error;
}
