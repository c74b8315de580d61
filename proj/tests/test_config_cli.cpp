#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "vortexsim/config.hpp"
#include "vortexsim/errors.hpp"
#include "vortexsim/runner.hpp"

using namespace vortexsim;
using namespace vortexsim::config;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* kStirapConfig = R"({
  "experiment": "stirap",
  "trap": {"mass": "86.909180527 u", "omega_perp": "132 Hz", "omega_z": "372.888 Hz"},
  "condensate": {"scattering_length": "5 nm", "kappa": "1.7 kHz"},
  "drive": {"omega0": "200 kHz", "delta_over_omega0": 10.0,
            "a_plus_sq": 0.6, "a_minus_sq": 0.4, "ell": 2},
  "pulses": {"f0": 150.0, "g0": 300.0, "t1": 1.0, "t2": 0.5, "sigma1": 0.25, "sigma2": 0.25},
  "output": {"basename": "stirap_test", "samples": 51}
})";

}  // namespace

TEST_CASE("unit parsing") {
  CHECK(parse_quantity("132 Hz", "x") == 132.0);
  CHECK(parse_quantity("1.7 kHz", "x") == doctest::Approx(1700.0));
  CHECK(parse_quantity("5 nm", "x") == doctest::Approx(5e-9));
  CHECK(parse_quantity("2.35 um", "x") == doctest::Approx(2.35e-6));
  CHECK(parse_quantity("86.909180527 u", "x") ==
        doctest::Approx(86.909180527 * 1.66053906660e-27));
  CHECK(parse_quantity("3", "x") == 3.0);
  CHECK_THROWS_AS(parse_quantity("5 parsec", "x"), ConfigError);
  CHECK_THROWS_AS(parse_quantity("abc", "x"), ConfigError);
}

TEST_CASE("valid stirap config validates cleanly") {
  const ParsedConfig cfg = parse_config(kStirapConfig);
  const ValidationReport rep = validate(cfg);
  CHECK(rep.errors.empty());
  CHECK(rep.warnings.empty());
}

TEST_CASE("missing delta is reported with its field path") {
  nlohmann::json j = nlohmann::json::parse(kStirapConfig);
  j["drive"].erase("delta_over_omega0");
  const ParsedConfig cfg = parse_config(j.dump());
  const ValidationReport rep = validate(cfg);
  REQUIRE(!rep.errors.empty());
  CHECK(rep.errors.front().find("drive.delta_big") != std::string::npos);
}

TEST_CASE("low detuning warns about adiabatic elimination") {
  nlohmann::json j = nlohmann::json::parse(kStirapConfig);
  j["drive"]["delta_over_omega0"] = 1.0;
  const ValidationReport rep = validate(parse_config(j.dump()));
  CHECK(rep.errors.empty());
  REQUIRE(!rep.warnings.empty());
  CHECK(rep.warnings.front().find("adiabatic elimination questionable") != std::string::npos);
}

TEST_CASE("negative sigma is a schema error") {
  nlohmann::json j = nlohmann::json::parse(kStirapConfig);
  j["experiment"] = "mexican-hat";
  j["trap"]["sigma"] = -2.0;
  j["trap"]["lambda"] = 0.005;
  j["condensate"] = {{"scattering_length", "5 nm"}, {"atoms", 1e5}};
  const ValidationReport rep = validate(parse_config(j.dump()));
  bool found = false;
  for (const auto& e : rep.errors) found = found || e.find("trap.sigma") != std::string::npos;
  CHECK(found);
}

TEST_CASE("config hash moves with any parameter change") {
  const ParsedConfig a = parse_config(kStirapConfig);
  nlohmann::json j = nlohmann::json::parse(kStirapConfig);
  j["pulses"]["t2"] = 0.51;
  const ParsedConfig b = parse_config(j.dump());
  CHECK(a.hash != b.hash);
  const ParsedConfig c = parse_config(kStirapConfig);
  CHECK(a.hash == c.hash);
}

TEST_CASE("unknown experiment kind is rejected") {
  nlohmann::json j = nlohmann::json::parse(kStirapConfig);
  j["experiment"] = "warp-drive";
  CHECK_THROWS_AS(parse_config(j.dump()), ConfigError);
}

TEST_CASE("runner emits byte-identical artifacts on repeated runs") {
  namespace fs = std::filesystem;
  const fs::path dir_a = fs::temp_directory_path() / "vortexsim_test_run_a";
  const fs::path dir_b = fs::temp_directory_path() / "vortexsim_test_run_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);

  const ParsedConfig cfg = parse_config(kStirapConfig);
  runner::RunOptions opts_a;
  opts_a.output_dir = dir_a;
  runner::RunOptions opts_b;
  opts_b.output_dir = dir_b;
  runner::run(cfg, opts_a);
  runner::run(cfg, opts_b);

  for (const char* name : {"stirap_test.csv", "stirap_test.json"}) {
    const std::string a = read_file(dir_a / name);
    const std::string b = read_file(dir_b / name);
    CHECK(!a.empty());
    CHECK(a == b);
    CHECK(a.find(cfg.hash) != std::string::npos);  // hash is stamped into outputs
  }
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("runner rejects invalid configs with ConfigError") {
  nlohmann::json j = nlohmann::json::parse(kStirapConfig);
  j["drive"].erase("delta_over_omega0");
  const ParsedConfig cfg = parse_config(j.dump());
  runner::RunOptions opts;
  opts.output_dir = std::filesystem::temp_directory_path() / "vortexsim_test_invalid";
  CHECK_THROWS_AS(runner::run(cfg, opts), ConfigError);
}
