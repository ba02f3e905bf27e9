#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

const std::string kBin = DEPHASE_BIN;
const std::string kData = DEPHASE_DATA;

int run(const std::string& args, const std::string& out = "/dev/null",
        const std::string& err = "/dev/null") {
  const std::string cmd = kBin + " " + args + " >" + out + " 2>" + err;
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "dephase_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("bound --N 10 100") == 0);
  CHECK(run("ghz --N 10") == 0);
  CHECK(run("oats --state pe --N 1000") == 0);
  CHECK(run("kq --q-max 4 --quick") == 0);
  CHECK(run("figures --which fig2 --q-max 8") == 0);
  CHECK(run("chi --noise " + kData + "/ou.json") == 0);
  CHECK(run("control --noise " + kData + "/gaussian.json --pulses " + kData + "/echo.json") == 0);

  CHECK(run("") == 2);
  CHECK(run("bogus") == 2);
  CHECK(run("bound --N 0") == 2);
  CHECK(run("bound --T -1") == 2);
  CHECK(run("bound --format xml") == 2);
  CHECK(run("chi") == 2);
  CHECK(run("chi --noise /nonexistent.json") == 2);
  CHECK(run("oats --state foo") == 2);
  CHECK(run("mc-validate --noise " + kData + "/ou.json --N 9 --quick") == 2);
}

TEST_CASE("csv output carries the config header and reruns are byte-identical") {
  const auto a = scratch("a.csv"), b = scratch("b.csv");
  REQUIRE(run("mc-validate --quick --seed 5 --noise " + kData + "/ou.json --pulses " + kData +
              "/echo.json --out " + a.string()) == 0);
  REQUIRE(run("mc-validate --quick --seed 5 --noise " + kData + "/ou.json --pulses " + kData +
              "/echo.json --out " + b.string()) == 0);
  const auto text = slurp(a);
  CHECK(text.rfind("# config: {", 0) == 0);
  CHECK(text.find("\"seed\":5") != std::string::npos);
  CHECK(text == slurp(b));
}

TEST_CASE("json output") {
  const auto p = scratch("bound.json");
  REQUIRE(run("bound --N 10 --format json --out " + p.string()) == 0);
  const auto j = nlohmann::json::parse(slurp(p));
  CHECK(j["columns"][0] == "N");
  CHECK(j["rows"].size() == 1);
  CHECK(j["config"]["N"][0] == 10);
}

TEST_CASE("validate passes, and an injected fault is reported by name") {
  const auto ok = scratch("ok.json");
  CHECK(run("validate --quick --out " + ok.string()) == 0);
  const auto j = nlohmann::json::parse(slurp(ok));
  CHECK(j["pass"] == true);
  for (const auto& row : j["rows"]) CHECK(row[3] == "true");

  const auto err = scratch("fault.err");
  CHECK(run("validate --quick --inject-fault chi_routes", "/dev/null", err.string()) == 1);
  CHECK(slurp(err).find("chi_routes") != std::string::npos);
}
