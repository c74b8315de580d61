#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "vortexsim/config.hpp"
#include "vortexsim/constants.hpp"
#include "vortexsim/errors.hpp"
#include "vortexsim/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitAccuracy = 3;

int do_run(const std::string& config_path, const vortexsim::runner::RunOptions& opts) {
  const auto cfg = vortexsim::config::load_config(config_path);
  vortexsim::runner::run(cfg, opts);
  return kExitOk;
}

int do_validate(const std::string& config_path) {
  const auto cfg = vortexsim::config::load_config(config_path);
  const auto report = vortexsim::config::validate(cfg);
  std::printf("config: %s (hash %s)\n", config_path.c_str(), cfg.hash.c_str());
  if (report.clean()) {
    std::printf("clean: no schema or physics problems found\n");
    return kExitOk;
  }
  for (const auto& e : report.errors) std::printf("error: %s\n", e.c_str());
  for (const auto& w : report.warnings) std::printf("warning: %s\n", w.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BEC vortex-superposition transfer simulator"};
  app.set_version_flag("--version", vortexsim::version_string());
  app.require_subcommand(1);

  std::string config_path;
  vortexsim::runner::RunOptions opts;
  double tolerance = 0.0;
  int samples = 0;
  std::string format;

  CLI::App* run_cmd = app.add_subcommand("run", "run an experiment from a config file");
  run_cmd->add_option("config", config_path, "config file (JSON)")->required();
  run_cmd->add_option("--output-dir", opts.output_dir, "directory for artifacts");
  run_cmd->add_option("--tolerance", tolerance, "relative integration tolerance override");
  run_cmd->add_option("--samples", samples, "trajectory sample count override");
  run_cmd->add_option("--format", format, "artifact format: csv or json (default both)")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "check a config without running it");
  validate_cmd->add_option("config", config_path, "config file (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      if (tolerance > 0.0) opts.tolerance = tolerance;
      if (samples > 0) opts.samples = samples;
      if (!format.empty()) opts.format = format;
      return do_run(config_path, opts);
    }
    return do_validate(config_path);
  } catch (const vortexsim::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const vortexsim::AccuracyError& e) {
    std::fprintf(stderr, "accuracy error: %s (best estimate %g, bound %g)\n", e.what(),
                 e.best_estimate, e.err_bound);
    return kExitAccuracy;
  } catch (const vortexsim::StiffnessError& e) {
    std::fprintf(stderr, "integration error: %s\n", e.what());
    return kExitAccuracy;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
