#ifndef RDDISIM_CONFIG_H
#define RDDISIM_CONFIG_H

#include "rddisim/schemes.h"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace rddisim {

// Schema violation; problems() lists every offending field.
class ConfigError : public std::runtime_error
{
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string> &problems() const { return m_problems; }

private:
    std::vector<std::string> m_problems;
};

struct RunConfig
{
    SchemePreset preset;
    std::vector<GridAxis> grid;
    std::string output_dir = ".";
};

// Strict parse: unknown keys, wrong types and physically invalid values are
// all reported together.
RunConfig parse_run_config(const nlohmann::json &doc);
RunConfig load_run_config(const std::string &path);

// Fully explicit form of a config; parsing it gives back the same run.
nlohmann::ordered_json config_to_json(const RunConfig &config);

nlohmann::ordered_json geometry_to_json(const GeometryConfig &geometry);

} // namespace rddisim

#endif // RDDISIM_CONFIG_H
