#include "rddisim/table_io.h"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace rddisim {

using nlohmann::ordered_json;

const char *const units_comment =
    "# units: hbar = 1, gamma13 = 1; rates in gamma13, times in 1/gamma13";

namespace {

std::string quote(const std::string &field)
{
    if (field.find_first_of(",\"\n\r") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

void write_row(std::ostream &out, const std::vector<std::string> &fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) {
            out << ',';
        }
        out << quote(fields[i]);
    }
    out << '\n';
}

// Splits one record; quoted fields may span lines.
bool read_record(std::istream &in, std::vector<std::string> &fields)
{
    fields.clear();
    std::string field;
    bool quoted = false;
    bool any = false;
    char c;
    while (in.get(c)) {
        any = true;
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c == '\n') {
            break;
        } else if (c != '\r') {
            field += c;
        }
    }
    if (quoted) {
        throw std::runtime_error("unterminated quoted CSV field");
    }
    if (any) {
        fields.push_back(field);
    }
    return any;
}

ordered_json complex_json(complex z)
{
    return ordered_json{{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}};
}

ordered_json line_json(const ResonanceLine &line)
{
    return ordered_json{
        {"from", line.from},
        {"to", line.to},
        {"laser", line.laser == Transition::k13 ? "13" : "23"},
        {"frequency", line.frequency},
        {"matrix_element", complex_json(line.matrix_element)},
    };
}

} // unnamed namespace

std::string format_double(double x)
{
    if (!std::isfinite(x)) {
        throw std::domain_error("non-finite value in table output");
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<std::string> trajectory_columns()
{
    std::vector<std::string> cols = {"time"};
    cols.insert(cols.end(), observable_names().begin(), observable_names().end());
    return cols;
}

void write_trajectory_csv(std::ostream &out, const Trajectory *trajectory)
{
    out << units_comment << '\n';
    write_row(out, trajectory_columns());
    if (!trajectory) {
        return;
    }
    const auto &names = observable_names();
    std::vector<const std::vector<double> *> columns;
    for (const std::string &name : names) {
        columns.push_back(&trajectory->observable(name));
    }
    std::vector<std::string> fields(names.size() + 1);
    for (std::size_t i = 0; i < trajectory->times.size(); ++i) {
        fields[0] = format_double(trajectory->times[i]);
        for (std::size_t j = 0; j < columns.size(); ++j) {
            fields[j + 1] = format_double((*columns[j])[i]);
        }
        write_row(out, fields);
    }
}

void write_sweep_csv(std::ostream &out, const SweepTable &table)
{
    out << units_comment << '\n';
    std::vector<std::string> header = table.axes;
    header.push_back("final_fidelity");
    header.push_back("error");
    write_row(out, header);
    for (const SweepRow &row : table.rows) {
        std::vector<std::string> fields;
        for (const double v : row.parameters) {
            fields.push_back(format_double(v));
        }
        fields.push_back(row.fidelity ? format_double(*row.fidelity) : "");
        fields.push_back(row.error);
        write_row(out, fields);
    }
}

std::size_t CsvTable::column(const std::string &name) const
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw std::out_of_range("no CSV column named '" + name + "'");
}

CsvTable read_csv(std::istream &in)
{
    CsvTable table;
    std::vector<std::string> fields;
    bool have_header = false;
    while (true) {
        if (in.peek() == '#') {
            std::string comment;
            std::getline(in, comment);
            continue;
        }
        if (!read_record(in, fields)) {
            break;
        }
        if (!have_header) {
            table.header = fields;
            have_header = true;
        } else {
            if (fields.size() != table.header.size()) {
                throw std::runtime_error("CSV row has " + std::to_string(fields.size())
                                         + " fields, header has " + std::to_string(table.header.size()));
            }
            table.rows.push_back(fields);
        }
    }
    return table;
}

ordered_json couplings_to_json(const RDDICouplings &c, const SystemConfig &system)
{
    return ordered_json{
        {"phi13", system.phi13},
        {"phi23", system.phi23()},
        {"f13", c.f13},
        {"f23", c.f23},
        {"g13", c.g13},
        {"g23", c.g23},
        {"chi13", c.chi13},
        {"chi23", c.chi23},
        {"gamma12_13", c.gamma12_13},
        {"gamma12_23", c.gamma12_23},
    };
}

ordered_json resonance_table_to_json(const ResonanceTable &table, bool nonzero_only)
{
    ordered_json levels = ordered_json::array();
    for (const SpectrumLevel &l : table.levels) {
        levels.push_back({{"label", l.label}, {"energy", l.energy}, {"weight", l.weight}});
    }
    ordered_json lines = ordered_json::array();
    for (const ResonanceLine &l : table.lines) {
        if (nonzero_only && std::abs(l.matrix_element) < 1e-12) {
            continue;
        }
        lines.push_back(line_json(l));
    }
    return ordered_json{{"levels", levels}, {"lines", lines}};
}

ordered_json summary_json(const RunResult &result, const RunConfig &config)
{
    const RunDiagnostics &d = result.diagnostics;
    ordered_json doc;
    doc["scheme"] = to_string(result.scheme);
    doc["preset"] = to_string(config.preset.preset);
    doc["target"] = result.target;
    doc["final_fidelity"] = result.final_fidelity;

    ordered_json diag;
    diag["couplings"] = couplings_to_json(d.couplings, config.preset.system);
    diag["drive"] = {
        {"omega", d.omega},
        {"alpha13", d.alpha13},
        {"alpha23", d.alpha23},
        {"delta13", d.delta13},
        {"delta23", d.delta23},
    };
    diag["printed"] = {
        {"alpha13", d.printed.alpha13},
        {"alpha23", d.printed.alpha23},
        {"delta13", d.printed.delta13},
        {"delta23", d.printed.delta23},
    };
    ordered_json values = ordered_json::object();
    for (const auto &[name, value] : d.values) {
        values[name] = value;
    }
    diag["values"] = values;
    ordered_json lines = ordered_json::array();
    for (const ResonanceLine &l : d.lines) {
        lines.push_back(line_json(l));
    }
    diag["lines"] = lines;
    if (result.trajectory) {
        const Trajectory &t = *result.trajectory;
        diag["trajectory"] = {
            {"samples", t.times.size()},
            {"accepted_steps", t.accepted_steps},
            {"rejected_steps", t.rejected_steps},
            {"max_trace_error", t.checks.max_trace_error},
            {"max_hermiticity_error", t.checks.max_hermiticity_error},
            {"min_eigenvalue", t.checks.min_eigenvalue},
        };
    }
    if (result.steady && result.steady->state) {
        const Operator9 rho = result.steady->state->matrix();
        ordered_json pops;
        for (int i = 0; i < dim; ++i) {
            pops["p" + BasisIndex::from_flat(i).label()] = rho(i, i).real();
        }
        diag["steady_state_populations"] = pops;
    }
    diag["warnings"] = d.warnings;
    diag["wall_time_seconds"] = d.wall_time;
    doc["diagnostics"] = diag;
    doc["config"] = config_to_json(config);
    return doc;
}

} // namespace rddisim
