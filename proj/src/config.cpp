#include "rddisim/config.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace rddisim {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string join_problems(const std::vector<std::string> &problems)
{
    std::ostringstream out;
    out << "invalid config:";
    for (const std::string &p : problems) {
        out << "\n  " << p;
    }
    return out.str();
}

std::string child(const std::string &path, const std::string &key)
{
    return path.empty() ? key : path + "." + key;
}

class Reader
{
public:
    std::vector<std::string> problems;

    void fail(const std::string &path, const std::string &msg)
    {
        problems.push_back(path + ": " + msg);
    }

    // Returns the object at doc[key] after rejecting keys outside `allowed`;
    // nullptr when absent or not an object.
    const json *section(const json &doc, const std::string &path, const std::string &key,
                        const std::set<std::string> &allowed)
    {
        if (!doc.contains(key)) {
            return nullptr;
        }
        const json &s = doc.at(key);
        const std::string p = child(path, key);
        if (!s.is_object()) {
            fail(p, "expected an object");
            return nullptr;
        }
        check_keys(s, p, allowed);
        return &s;
    }

    void check_keys(const json &obj, const std::string &path, const std::set<std::string> &allowed)
    {
        for (const auto &item : obj.items()) {
            if (!allowed.count(item.key())) {
                fail(child(path, item.key()), "unknown field");
            }
        }
    }

    std::optional<double> number(const json *obj, const std::string &path, const std::string &key)
    {
        if (!obj || !obj->contains(key)) {
            return std::nullopt;
        }
        const json &v = obj->at(key);
        if (!v.is_number()) {
            fail(child(path, key), "expected a number");
            return std::nullopt;
        }
        return v.get<double>();
    }

    std::optional<long> integer(const json *obj, const std::string &path, const std::string &key)
    {
        if (!obj || !obj->contains(key)) {
            return std::nullopt;
        }
        const json &v = obj->at(key);
        if (!v.is_number_integer()) {
            fail(child(path, key), "expected an integer");
            return std::nullopt;
        }
        return v.get<long>();
    }

    std::optional<bool> boolean(const json *obj, const std::string &path, const std::string &key)
    {
        if (!obj || !obj->contains(key)) {
            return std::nullopt;
        }
        const json &v = obj->at(key);
        if (!v.is_boolean()) {
            fail(child(path, key), "expected true or false");
            return std::nullopt;
        }
        return v.get<bool>();
    }

    std::optional<std::string> string(const json *obj, const std::string &path, const std::string &key)
    {
        if (!obj || !obj->contains(key)) {
            return std::nullopt;
        }
        const json &v = obj->at(key);
        if (!v.is_string()) {
            fail(child(path, key), "expected a string");
            return std::nullopt;
        }
        return v.get<std::string>();
    }

    std::optional<Eigen::Vector3d> vector3(const json *obj, const std::string &path, const std::string &key)
    {
        if (!obj || !obj->contains(key)) {
            return std::nullopt;
        }
        const json &v = obj->at(key);
        if (!v.is_array() || v.size() != 3
            || !std::all_of(v.begin(), v.end(), [](const json &x) { return x.is_number(); })) {
            fail(child(path, key), "expected an array of three numbers");
            return std::nullopt;
        }
        return Eigen::Vector3d(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
    }
};

template <class T>
void assign(T &dst, const std::optional<T> &src)
{
    if (src) {
        dst = *src;
    }
}

// Runs a validation callback and records its message under `path`.
template <class F>
void check(Reader &r, const std::string &path, F &&fn)
{
    try {
        fn();
    } catch (const std::exception &e) {
        r.fail(path, e.what());
    }
}

std::vector<GridAxis> parse_grid(Reader &r, const json &doc)
{
    std::vector<GridAxis> grid;
    if (!doc.contains("grid")) {
        return grid;
    }
    const json &g = doc.at("grid");
    if (!g.is_array()) {
        r.fail("grid", "expected an array of axes");
        return grid;
    }
    const auto &names = sweep_axis_names();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::string path = "grid[" + std::to_string(i) + "]";
        if (!g[i].is_object()) {
            r.fail(path, "expected an object");
            continue;
        }
        r.check_keys(g[i], path, {"axis", "values", "start", "stop", "count"});
        GridAxis axis;
        const auto name = r.string(&g[i], path, "axis");
        if (!name) {
            r.fail(child(path, "axis"), "required");
        } else if (std::find(names.begin(), names.end(), *name) == names.end()) {
            r.fail(child(path, "axis"), "unknown axis '" + *name + "'");
        } else {
            axis.name = *name;
        }
        if (g[i].contains("values")) {
            if (g[i].contains("start") || g[i].contains("stop") || g[i].contains("count")) {
                r.fail(path, "give either values or start/stop/count");
            }
            const json &v = g[i].at("values");
            if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](const json &x) { return x.is_number(); })) {
                r.fail(child(path, "values"), "expected an array of numbers");
            } else {
                for (const json &x : v) {
                    axis.values.push_back(x.get<double>());
                }
            }
        } else {
            const auto start = r.number(&g[i], path, "start");
            const auto stop = r.number(&g[i], path, "stop");
            const auto count = r.integer(&g[i], path, "count");
            if (!start || !stop || !count) {
                r.fail(path, "needs values or all of start, stop, count");
            } else if (*count < 0) {
                r.fail(child(path, "count"), "must be non-negative");
            } else {
                for (long k = 0; k < *count; ++k) {
                    const double x = *count == 1 ? 0.0 : static_cast<double>(k)/(*count - 1);
                    axis.values.push_back(k == *count - 1 && *count > 1 ? *stop : *start + x*(*stop - *start));
                }
            }
        }
        grid.push_back(std::move(axis));
    }
    return grid;
}

} // unnamed namespace

ConfigError::ConfigError(std::vector<std::string> problems) :
    std::runtime_error(join_problems(problems)), m_problems(std::move(problems))
{}

RunConfig parse_run_config(const json &doc)
{
    Reader r;
    if (!doc.is_object()) {
        throw ConfigError({"config: expected a JSON object"});
    }
    r.check_keys(doc, "", {"scheme", "preset", "auto_resonance", "system", "drive", "jitter",
                           "integrator", "options", "grid", "output"});

    // Scheme and preset
    std::optional<Scheme> scheme;
    if (const auto s = r.string(&doc, "", "scheme")) {
        check(r, "scheme", [&] { scheme = scheme_from_string(*s); });
    }
    std::optional<PresetName> preset_name;
    if (const auto p = r.string(&doc, "", "preset")) {
        check(r, "preset", [&] { preset_name = preset_from_string(*p); });
    }
    if (scheme && preset_name && scheme_of(*preset_name) != *scheme) {
        r.fail("preset", "preset " + to_string(*preset_name) + " does not belong to scheme "
               + to_string(*scheme));
    }
    if (!preset_name) {
        switch (scheme.value_or(Scheme::pumping)) {
        case Scheme::raman: preset_name = PresetName::eq5; break;
        case Scheme::stirap: preset_name = PresetName::eq7; break;
        case Scheme::pumping: preset_name = PresetName::eq8asym; break;
        }
        if (!scheme && !doc.contains("preset")) {
            r.fail("preset", "required (or give scheme)");
        }
    }

    // System
    SystemConfig system;
    const json *sys = r.section(doc, "", "system",
                                {"gamma13", "gamma23", "phi13", "f13", "freq_ratio", "geometry"});
    assign(system.gamma13, r.number(sys, "system", "gamma13"));
    assign(system.gamma23, r.number(sys, "system", "gamma23"));
    assign(system.freq_ratio, r.number(sys, "system", "freq_ratio"));
    if (sys) {
        const json *geo = r.section(*sys, "system", "geometry", {"e1", "e2", "eR"});
        assign(system.geometry.e1, r.vector3(geo, "system.geometry", "e1"));
        assign(system.geometry.e2, r.vector3(geo, "system.geometry", "e2"));
        assign(system.geometry.eR, r.vector3(geo, "system.geometry", "eR"));
    }
    const auto phi13 = r.number(sys, "system", "phi13");
    const auto f13 = r.number(sys, "system", "f13");
    if (phi13 && f13) {
        r.fail("system", "give phi13 or f13, not both");
    } else if (phi13) {
        system.phi13 = *phi13;
    } else if (f13) {
        check(r, "system.f13", [&] { system.phi13 = phi_for_coupling_f(*f13, system.geometry); });
    }

    RunConfig config;
    SchemePreset &p = config.preset;
    p = make_preset(*preset_name, system);
    assign(p.auto_resonance, r.boolean(&doc, "", "auto_resonance"));

    // Drive
    const json *drive = r.section(doc, "", "drive",
                                  {"omega", "omega_over_chi13", "area", "width", "alpha13", "alpha23",
                                   "delta13", "delta23"});
    const auto omega = r.number(drive, "drive", "omega");
    const auto omega_ratio = r.number(drive, "drive", "omega_over_chi13");
    if (omega && omega_ratio) {
        r.fail("drive", "give omega or omega_over_chi13, not both");
    } else if (omega) {
        p.omega = *omega;
        p.omega_over_chi13.reset();
    } else if (omega_ratio) {
        p.omega_over_chi13 = *omega_ratio;
    }
    assign(p.pulse_area, r.number(drive, "drive", "area"));
    if (const auto w = r.number(drive, "drive", "width")) p.pulse_width = w;
    if (const auto a = r.number(drive, "drive", "alpha13")) p.alpha13 = a;
    if (const auto a = r.number(drive, "drive", "alpha23")) p.alpha23 = a;
    if (const auto d = r.number(drive, "drive", "delta13")) p.delta13 = d;
    if (const auto d = r.number(drive, "drive", "delta23")) p.delta23 = d;

    // Jitter
    const json *jit = r.section(doc, "", "jitter", {"gamma12", "mode"});
    assign(p.jitter.rate, r.number(jit, "jitter", "gamma12"));
    if (const auto mode = r.string(jit, "jitter", "mode")) {
        if (*mode == "collective") {
            p.jitter.mode = JitterMode::collective;
        } else if (*mode == "independent") {
            p.jitter.mode = JitterMode::independent;
        } else {
            r.fail("jitter.mode", "expected collective or independent");
        }
    }

    // Integrator
    const json *integ = r.section(doc, "", "integrator", {"rel_tol", "abs_tol", "max_step", "max_steps"});
    assign(p.integrator.rel_tol, r.number(integ, "integrator", "rel_tol"));
    assign(p.integrator.abs_tol, r.number(integ, "integrator", "abs_tol"));
    assign(p.integrator.max_step, r.number(integ, "integrator", "max_step"));
    assign(p.integrator.max_steps, r.integer(integ, "integrator", "max_steps"));

    // Options
    const json *opts = r.section(doc, "", "options",
                                 {"master_equation", "relaxation_time", "truncation", "samples", "decay"});
    assign(p.master_equation, r.boolean(opts, "options", "master_equation"));
    assign(p.relaxation_time, r.number(opts, "options", "relaxation_time"));
    assign(p.truncation, r.number(opts, "options", "truncation"));
    assign(p.decay, r.boolean(opts, "options", "decay"));
    if (const auto n = r.integer(opts, "options", "samples")) {
        if (*n < 2 || *n > 10'000'000) {
            r.fail("options.samples", "must be between 2 and 10000000");
        } else {
            p.samples = static_cast<int>(*n);
        }
    }

    config.grid = parse_grid(r, doc);
    assign(config.output_dir, r.string(&doc, "", "output"));

    // Physical validation by the owning modules, one field group at a time.
    check(r, "system", [&] { p.system.validate(); });
    check(r, "jitter", [&] { p.jitter.validate(); });
    check(r, "integrator", [&] { p.integrator.validate(); });
    if (r.problems.empty()) {
        check(r, "drive/options", [&] { p.validate(); });
    }
    if (!r.problems.empty()) {
        throw ConfigError(r.problems);
    }
    return config;
}

RunConfig load_run_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError({path + ": cannot open"});
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ConfigError({path + ": " + e.what()});
    }
    return parse_run_config(doc);
}

ordered_json geometry_to_json(const GeometryConfig &geometry)
{
    const auto vec = [](const Eigen::Vector3d &v) { return ordered_json::array({v.x(), v.y(), v.z()}); };
    return ordered_json{{"e1", vec(geometry.e1)}, {"e2", vec(geometry.e2)}, {"eR", vec(geometry.eR)}};
}

ordered_json config_to_json(const RunConfig &config)
{
    const SchemePreset &p = config.preset;
    ordered_json doc;
    doc["scheme"] = to_string(p.scheme());
    doc["preset"] = to_string(p.preset);
    doc["auto_resonance"] = p.auto_resonance;
    doc["system"] = {
        {"gamma13", p.system.gamma13},
        {"gamma23", p.system.gamma23},
        {"phi13", p.system.phi13},
        {"freq_ratio", p.system.freq_ratio},
        {"geometry", geometry_to_json(p.system.geometry)},
    };
    ordered_json drive;
    if (p.omega_over_chi13) {
        drive["omega_over_chi13"] = *p.omega_over_chi13;
    } else {
        drive["omega"] = p.omega;
    }
    drive["area"] = p.pulse_area;
    if (p.pulse_width) drive["width"] = *p.pulse_width;
    if (p.alpha13) drive["alpha13"] = *p.alpha13;
    if (p.alpha23) drive["alpha23"] = *p.alpha23;
    if (p.delta13) drive["delta13"] = *p.delta13;
    if (p.delta23) drive["delta23"] = *p.delta23;
    doc["drive"] = drive;
    doc["jitter"] = {
        {"gamma12", p.jitter.rate},
        {"mode", p.jitter.mode == JitterMode::collective ? "collective" : "independent"},
    };
    doc["integrator"] = {
        {"rel_tol", p.integrator.rel_tol},
        {"abs_tol", p.integrator.abs_tol},
        {"max_step", p.integrator.max_step},
        {"max_steps", p.integrator.max_steps},
    };
    doc["options"] = {
        {"master_equation", p.master_equation},
        {"relaxation_time", p.relaxation_time},
        {"truncation", p.truncation},
        {"samples", p.samples},
        {"decay", p.decay},
    };
    ordered_json grid = ordered_json::array();
    for (const GridAxis &axis : config.grid) {
        grid.push_back({{"axis", axis.name}, {"values", axis.values}});
    }
    doc["grid"] = grid;
    doc["output"] = config.output_dir;
    return doc;
}

} // namespace rddisim
