#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "dephasing/io.hpp"

namespace dephase {

enum class Exit { Ok = 0, ValidationFailure = 1, InputError = 2 };

struct RunConfig {
  std::string command;
  std::string noise_path;
  std::string pulses_path;
  std::vector<int> N;
  double T = 1.0;
  int n = 2;
  double chi0 = 1.0;
  double omega_c = 1.0;
  std::uint64_t seed = 12345;
  std::string out;
  std::string format = "csv";
  bool quick = false;

  // Command specific.
  std::string which;
  std::string state;
  std::optional<double> mu, beta;
  double s = 1.0;
  double alpha = 1.0;
  int q_max = 8;
  double t_min = 1e-3, t_max = 1.0;
  int points = 13;
  double t = 1.0;
  int count = 100000;
  std::string inject_fault;

  nlohmann::json to_json() const;
};

struct Result {
  dephasing::io::Table table;
  Exit status = Exit::Ok;
  std::vector<std::string> failures;  // named failing checks
};

Result cmd_chi(const RunConfig& c);
Result cmd_bound(const RunConfig& c);
Result cmd_ghz(const RunConfig& c);
Result cmd_oats(const RunConfig& c);
Result cmd_table1(const RunConfig& c);
Result cmd_control(const RunConfig& c);
Result cmd_kq(const RunConfig& c);
Result cmd_mc_validate(const RunConfig& c);
Result cmd_figures(const RunConfig& c);
Result cmd_validate(const RunConfig& c);

int run(int argc, char** argv);

}  // namespace dephase
