#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <variant>
#include <vector>

#include "dephasing/control.hpp"
#include "dephasing/noise_models.hpp"

namespace dephasing::io {

// {"kind": "OrnsteinUhlenbeck", "params": {...}, "stationarity": "...",
//  "table": "file.csv"}; a relative table path resolves against base_dir.
NoiseModel noise_from_json(const nlohmann::json& j, const std::string& base_dir = ".");
nlohmann::json noise_to_json(const NoiseModel& m);
NoiseModel load_noise(const std::string& path);

// Two columns (lag, value) give a lag table; otherwise the first row holds the
// nodes and the remaining rows the square grid.
CorrelationTable load_table_csv(const std::string& path);

// {"t": 1.0, "fractions": [...], "pulses": [{"axis": "x" | [x, y, z], "angle": a}
//  | {"opaque": true, "tag": "..."}]}
PulseSequence pulses_from_json(const nlohmann::json& j);
nlohmann::json pulses_to_json(const PulseSequence& s);
PulseSequence load_pulses(const std::string& path);

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_number(double v);

// Comment header carrying the config, then the body.
void write_csv(std::ostream& os, const nlohmann::json& config, const Table& t);
nlohmann::json table_to_json(const nlohmann::json& config, const Table& t);

}  // namespace dephasing::io
