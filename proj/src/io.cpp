#include "dephasing/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dephasing/errors.hpp"

namespace dephasing::io {

using nlohmann::json;

namespace {

std::vector<std::vector<double>> read_numeric_rows(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (rows.empty()) continue;  // header line
      throw Error(ErrorKind::InvalidInput, path + ":" + std::to_string(lineno) + ": bad number");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::Vector3d parse_axis(const json& a) {
  if (a.is_string()) {
    const auto s = a.get<std::string>();
    if (s == "x") return Eigen::Vector3d::UnitX();
    if (s == "y") return Eigen::Vector3d::UnitY();
    if (s == "z") return Eigen::Vector3d::UnitZ();
    throw Error(ErrorKind::InvalidInput, "unknown axis '" + s + "'");
  }
  if (a.is_array() && a.size() == 3) return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
  throw Error(ErrorKind::InvalidInput, "axis must be x, y, z or a 3-vector");
}

}  // namespace

CorrelationTable load_table_csv(const std::string& path) {
  const auto rows = read_numeric_rows(path);
  if (rows.size() < 2) throw Error(ErrorKind::InvalidInput, path + ": too few rows");
  CorrelationTable t;
  if (rows[0].size() == 2) {
    t.values.resize(Eigen::Index(rows.size()), 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != 2) throw Error(ErrorKind::InvalidInput, path + ": ragged lag table");
      t.nodes.push_back(rows[i][0]);
      t.values(Eigen::Index(i), 0) = rows[i][1];
    }
    return t;
  }
  t.nodes = rows[0];
  const auto n = Eigen::Index(t.nodes.size());
  if (Eigen::Index(rows.size()) != n + 1) {
    throw Error(ErrorKind::InvalidInput, path + ": grid must be square");
  }
  t.values.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (Eigen::Index(rows[i + 1].size()) != n) {
      throw Error(ErrorKind::InvalidInput, path + ": ragged grid");
    }
    for (Eigen::Index j = 0; j < n; ++j) t.values(i, j) = rows[i + 1][j];
  }
  return t;
}

NoiseModel noise_from_json(const json& j, const std::string& base_dir) {
  try {
    NoiseModel m;
    m.kind = noise_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("params")) {
      for (const auto& [k, v] : j.at("params").items()) m.params[k] = v.get<double>();
    }
    if (m.kind == NoiseKind::TabulatedCorrelation) {
      std::filesystem::path p = j.at("table").get<std::string>();
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      auto tab = std::make_shared<CorrelationTable>(load_table_csv(p.string()));
      m.stationarity = tab->is_lag_table() ? Stationarity::Stationary : Stationarity::NonStationary;
      m.table = tab;
    } else {
      m.stationarity = (m.kind == NoiseKind::Brownian || m.kind == NoiseKind::IntegratedStationary)
                           ? Stationarity::NonStationary
                       : m.kind == NoiseKind::White ? Stationarity::WideSenseGeneralized
                                                    : Stationarity::Stationary;
    }
    if (j.contains("stationarity")) {
      m.stationarity = stationarity_from_string(j.at("stationarity").get<std::string>());
    }
    m.validate();
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("noise JSON: ") + e.what());
  }
}

json noise_to_json(const NoiseModel& m) {
  json j;
  j["kind"] = to_string(m.kind);
  j["params"] = json::object();
  for (const auto& [k, v] : m.params) j["params"][k] = v;
  j["stationarity"] = to_string(m.stationarity);
  if (m.table) j["table_nodes"] = m.table->nodes.size();
  return j;
}

NoiseModel load_noise(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, path + ": " + e.what());
  }
  return noise_from_json(j, std::filesystem::path(path).parent_path().string());
}

PulseSequence pulses_from_json(const json& j) {
  try {
    PulseSequence s;
    s.t = j.value("t", 1.0);
    s.fractions = j.at("fractions").get<std::vector<double>>();
    for (const auto& p : j.at("pulses")) {
      Pulse q;
      if (p.value("opaque", false)) {
        q.opaque = true;
        q.tag = p.value("tag", std::string("opaque"));
      } else {
        q.axis = parse_axis(p.at("axis"));
        q.angle = p.at("angle").get<double>();
      }
      s.pulses.push_back(q);
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("pulse JSON: ") + e.what());
  }
}

json pulses_to_json(const PulseSequence& s) {
  json j;
  j["t"] = s.t;
  j["fractions"] = s.fractions;
  j["pulses"] = json::array();
  for (const auto& p : s.pulses) {
    if (p.opaque) {
      j["pulses"].push_back({{"opaque", true}, {"tag", p.tag}});
    } else {
      j["pulses"].push_back({{"axis", {p.axis(0), p.axis(1), p.axis(2)}}, {"angle", p.angle}});
    }
  }
  return j;
}

PulseSequence load_pulses(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, path + ": " + e.what());
  }
  return pulses_from_json(j);
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

void write_csv(std::ostream& os, const json& config, const Table& t) {
  os << "# config: " << config.dump() << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      os << (i ? "," : "");
      if (const auto* d = std::get_if<double>(&r[i])) {
        os << format_number(*d);
      } else {
        os << std::get<std::string>(r[i]);
      }
    }
    os << "\n";
  }
}

json table_to_json(const json& config, const Table& t) {
  json j;
  j["config"] = config;
  j["columns"] = t.columns;
  j["rows"] = json::array();
  for (const auto& r : t.rows) {
    json row = json::array();
    for (const auto& c : r) {
      if (const auto* d = std::get_if<double>(&c)) {
        // JSON has no NaN; emit null.
        row.push_back(std::isfinite(*d) ? json(*d) : json(nullptr));
      } else {
        row.push_back(std::get<std::string>(c));
      }
    }
    j["rows"].push_back(row);
  }
  return j;
}

}  // namespace dephasing::io
