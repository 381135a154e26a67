// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>
#include <sstream>

#include "../tools/commands.hpp"
#include "../tools/config.hpp"
#include "doctest.h"
#include "nhssh/errors.hpp"
#include "nhssh/serialize.hpp"

using namespace nhssh;
using namespace nhssh::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nhssh_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

nlohmann::json manifest(const fs::path& dir, const std::string& command) {
  return nlohmann::json::parse(slurp(dir / ("manifest_" + command + ".json")));
}

RunConfig small_critical() {
  RunConfig c = RunConfig::defaults();
  for (const char* s : {"digits=60", "L=200", "ell=10", "ells=10,12", "delta=1e-3", "entropy_ells=6,8,10,12",
                        "ed_L=6", "ed_ell=2", "ed_digits=40"})
    c.set(s);
  c.validate();
  return c;
}

int run(const std::string& command, const RunConfig& cfg, const fs::path& out) {
  Options o;
  o.out = out;
  std::ostringstream log;
  return run_command(command, cfg, o, log);
}

}  // namespace

TEST_CASE("config file errors name the file, line and field") {
  const fs::path dir = scratch("config");
  const fs::path file = dir / "run.conf";
  std::ofstream(file) << "# comment\nu = 0.5\n\nL = twenty\n";
  RunConfig c = RunConfig::defaults();
  try {
    c.load_file(file.string());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find(":4:") != std::string::npos);
    CHECK(msg.find("'L'") != std::string::npos);
  }
  std::ofstream(file) << "nonsense line\n";
  CHECK_THROWS_AS(c.load_file(file.string()), ConfigError);
  std::ofstream(file) << "colour = blue\n";
  CHECK_THROWS_AS(c.load_file(file.string()), ConfigError);
  CHECK_THROWS_AS(c.load_file((dir / "missing.conf").string()), ConfigError);
}

TEST_CASE("file values are overridden by --set") {
  const fs::path dir = scratch("override");
  const fs::path file = dir / "run.conf";
  std::ofstream(file) << "w = 2.5\ndigits = 80\n";
  RunConfig c = RunConfig::defaults();
  c.load_file(file.string());
  CHECK(c.get("w") == "2.5");
  c.set("w=3");
  CHECK(c.get("w") == "3");
  CHECK(c.get_int("digits") == 80);
  CHECK(c.get_int_list("ells") == std::vector<int>{60, 100, 120});
  CHECK_THROWS_AS(c.set("digits=many"), ConfigError);
  CHECK_THROWS_AS(c.set("nope=1"), ConfigError);
  CHECK_THROWS_AS(c.set("branch=sideways"), ConfigError);
  c.set("digits=10");
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("phase command writes a report and a manifest") {
  const fs::path out = scratch("phase");
  CHECK(run("phase", small_critical(), out) == kExitOk);
  const auto m = manifest(out, "phase");
  CHECK(m["status"] == "ok");
  CHECK(m["exit_code"] == 0);
  REQUIRE(m["outputs"].size() == 1);
  const std::string file = m["outputs"][0]["file"];
  CHECK(sha256_hex(slurp(out / file)) == m["outputs"][0]["sha256"]);
  CHECK(nlohmann::json::parse(slurp(out / file))["phase"] == "CriticalPlus");
}

TEST_CASE("eh outputs are byte-identical across runs and the cache is reused") {
  const fs::path a = scratch("eh_a");
  const fs::path b = scratch("eh_b");
  const RunConfig cfg = small_critical();
  REQUIRE(run("eh", cfg, a) == kExitOk);
  REQUIRE(run("eh", cfg, b) == kExitOk);
  const auto ma = manifest(a, "eh");
  const auto mb = manifest(b, "eh");
  CHECK(ma["outputs"] == mb["outputs"]);
  for (const auto& o : ma["outputs"]) CHECK(slurp(a / o["file"].get<std::string>()) == slurp(b / o["file"].get<std::string>()));
  for (const auto& c : ma["cache"]) CHECK(c["status"] == "written");

  REQUIRE(run("eh", cfg, a) == kExitOk);
  const auto again = manifest(a, "eh");
  CHECK(again["outputs"] == ma["outputs"]);
  REQUIRE(again["cache"].size() == 2);
  for (const auto& c : again["cache"]) CHECK(c["status"] == "hit");
}

TEST_CASE("CSV columns follow csv_digits") {
  const fs::path out = scratch("csv");
  RunConfig cfg = small_critical();
  cfg.set("csv_digits=12");
  cfg.set("ells=10");
  REQUIRE(run("eh", cfg, out) == kExitOk);
  for (const auto& o : manifest(out, "eh")["outputs"]) {
    const std::string f = o["file"];
    if (f.rfind("nn_temperature_", 0) != 0) continue;
    std::istringstream in(slurp(out / f));
    std::string line;
    std::getline(in, line);
    CHECK(line == "j,x_over_ell,re,im,pred_re,pred_im");
    std::getline(in, line);
    const std::string re = line.substr(line.find(',', line.find(',') + 1) + 1);
    const std::string mantissa = re.substr(0, re.find('e'));
    int digits = 0;
    for (char ch : mantissa) digits += std::isdigit(static_cast<unsigned char>(ch)) ? 1 : 0;
    CHECK(digits == 12);
  }
}

TEST_CASE("verify-ed passes on the default parameter sets") {
  const fs::path out = scratch("ed");
  CHECK(run("verify-ed", small_critical(), out) == kExitOk);
  CHECK(manifest(out, "verify-ed")["status"] == "ok");
}

TEST_CASE("failures still leave a manifest and map to exit codes") {
  SUBCASE("PT-broken parameters have no ground state") {
    const fs::path out = scratch("broken");
    RunConfig cfg = small_critical();
    cfg.set("u=1");
    CHECK(run("eh", cfg, out) == kExitConfig);
    const auto m = manifest(out, "eh");
    CHECK(m["status"] == "failed");
    CHECK(m["error_class"] == "PhaseError");
  }
  SUBCASE("oversized exact diagonalization") {
    const fs::path out = scratch("big_ed");
    RunConfig cfg = small_critical();
    cfg.set("ed_L=14");
    CHECK(run("verify-ed", cfg, out) == kExitConfig);
    CHECK(manifest(out, "verify-ed")["error_class"] == "SizeError");
  }
  SUBCASE("critical point without a twist is rejected") {
    const fs::path out = scratch("no_twist");
    RunConfig cfg = small_critical();
    cfg.set("delta=0");
    CHECK(run("spectrum", cfg, out) == kExitConfig);
    CHECK(manifest(out, "spectrum")["error_class"] == "PhaseError");
  }
  SUBCASE("unknown command") {
    const fs::path out = scratch("unknown");
    CHECK(run("dance", small_critical(), out) == kExitConfig);
    CHECK(fs::exists(out / "manifest_dance.json"));
  }
}

TEST_CASE("main_entry rejects a bad config with exit code 2") {
  const fs::path out = scratch("main_bad");
  const fs::path file = out / "bad.conf";
  std::ofstream(file) << "L = twenty\n";
  std::string f = file.string(), o = out.string();
  std::vector<std::string> args{"nhssh", "phase", "--config", f, "--out", o};
  std::vector<char*> argv;
  for (auto& s : args) argv.push_back(s.data());
  CHECK(main_entry(static_cast<int>(argv.size()), argv.data()) == kExitConfig);
  CHECK(manifest(out, "phase")["error_class"] == "ConfigError");
}
