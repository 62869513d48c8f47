#ifndef RDDISIM_TABLE_IO_H
#define RDDISIM_TABLE_IO_H

#include "rddisim/config.h"
#include "rddisim/schemes.h"
#include "rddisim/solvers.h"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace rddisim {

// First line of every CSV file.
extern const char *const units_comment;

// Printed with 17 significant digits so that values round-trip exactly.
std::string format_double(double x);

// time, p11 ... p33 (flat basis order), F_s12, F_a12, F_s13, F_a13
std::vector<std::string> trajectory_columns();
void write_trajectory_csv(std::ostream &out, const Trajectory *trajectory);

// varied axes in grid order, final_fidelity, error
void write_sweep_csv(std::ostream &out, const SweepTable &table);

struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string &name) const;
};
// Reads a CSV written by the functions above; '#' lines are skipped.
CsvTable read_csv(std::istream &in);

nlohmann::ordered_json couplings_to_json(const RDDICouplings &couplings, const SystemConfig &system);
nlohmann::ordered_json resonance_table_to_json(const ResonanceTable &table, bool nonzero_only);
// Final fidelity, diagnostics and the config echo.
nlohmann::ordered_json summary_json(const RunResult &result, const RunConfig &config);

} // namespace rddisim

#endif // RDDISIM_TABLE_IO_H
