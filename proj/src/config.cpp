#include "vortexsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "vortexsim/constants.hpp"
#include "vortexsim/errors.hpp"
#include "vortexsim/util.hpp"

namespace vortexsim::config {

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::mz_prepare: return "mz-prepare";
    case ExperimentKind::chirp: return "chirp";
    case ExperimentKind::stirap: return "stirap";
    case ExperimentKind::overlap_sweep: return "overlap-sweep";
    case ExperimentKind::mexican_hat: return "mexican-hat";
    case ExperimentKind::detect: return "detect";
    case ExperimentKind::validate_integrals: return "validate-integrals";
    case ExperimentKind::five_level_check: return "five-level-check";
  }
  return "?";
}

ExperimentKind experiment_from_string(const std::string& name) {
  if (name == "mz-prepare") return ExperimentKind::mz_prepare;
  if (name == "chirp") return ExperimentKind::chirp;
  if (name == "stirap") return ExperimentKind::stirap;
  if (name == "overlap-sweep") return ExperimentKind::overlap_sweep;
  if (name == "mexican-hat") return ExperimentKind::mexican_hat;
  if (name == "detect") return ExperimentKind::detect;
  if (name == "validate-integrals") return ExperimentKind::validate_integrals;
  if (name == "five-level-check") return ExperimentKind::five_level_check;
  throw ConfigError("experiment: unknown kind \"" + name + "\"");
}

double parse_quantity(const std::string& text, const std::string& field_path) {
  std::istringstream is(text);
  double value = 0.0;
  std::string unit;
  if (!(is >> value)) {
    throw ConfigError(field_path + ": cannot parse quantity \"" + text + "\"");
  }
  is >> unit;
  // Angular frequencies: the Hz family maps 1:1 onto rad/s, matching the
  // parameter conventions of the bundled runs (see README).
  static const std::vector<std::pair<std::string, double>> kUnits = {
      {"Hz", 1.0},      {"kHz", 1e3},      {"MHz", 1e6},    {"GHz", 1e9},
      {"rad/s", 1.0},   {"krad/s", 1e3},   {"Mrad/s", 1e6},
      {"s", 1.0},       {"ms", 1e-3},      {"us", 1e-6},    {"ns", 1e-9},
      {"m", 1.0},       {"mm", 1e-3},      {"um", 1e-6},    {"nm", 1e-9},
      {"kg", 1.0},      {"u", constants::atomic_mass_unit},
      {"J", 1.0},       {"", 1.0},
  };
  for (const auto& [name, factor] : kUnits) {
    if (unit == name) return value * factor;
  }
  throw ConfigError(field_path + ": unknown unit \"" + unit + "\"");
}

ParsedConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

ParsedConfig parse_config(const std::string& text) {
  nlohmann::json raw;
  try {
    raw = nlohmann::json::parse(text, /*cb=*/nullptr, /*allow_exceptions=*/true,
                                /*ignore_comments=*/true);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!raw.is_object()) throw ConfigError("config root must be an object");
  if (!raw.contains("experiment") || !raw["experiment"].is_string()) {
    throw ConfigError("experiment: missing or not a string");
  }
  ParsedConfig cfg;
  cfg.kind = experiment_from_string(raw["experiment"].get<std::string>());
  cfg.raw = raw;
  cfg.hash = util::hex64(util::fnv1a64(raw.dump()));  // keys are sorted by dump()
  return cfg;
}

const nlohmann::json* Fields::find(const std::string& path) const {
  const nlohmann::json* node = root_;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (!node->is_object() || !node->contains(key)) return nullptr;
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return node;
}

const nlohmann::json& Fields::require(const std::string& path) const {
  const nlohmann::json* node = find(path);
  if (!node) throw ConfigError(path + ": required field is missing");
  return *node;
}

bool Fields::has(const std::string& path) const { return find(path) != nullptr; }

double Fields::number(const std::string& path) const {
  const nlohmann::json& n = require(path);
  if (!n.is_number()) throw ConfigError(path + ": expected a number");
  return n.get<double>();
}

double Fields::number_or(const std::string& path, double fallback) const {
  return has(path) ? number(path) : fallback;
}

int Fields::integer(const std::string& path) const {
  const nlohmann::json& n = require(path);
  if (!n.is_number_integer()) throw ConfigError(path + ": expected an integer");
  return n.get<int>();
}

int Fields::integer_or(const std::string& path, int fallback) const {
  return has(path) ? integer(path) : fallback;
}

bool Fields::boolean_or(const std::string& path, bool fallback) const {
  if (!has(path)) return fallback;
  const nlohmann::json& n = require(path);
  if (!n.is_boolean()) throw ConfigError(path + ": expected a boolean");
  return n.get<bool>();
}

std::string Fields::str(const std::string& path) const {
  const nlohmann::json& n = require(path);
  if (!n.is_string()) throw ConfigError(path + ": expected a string");
  return n.get<std::string>();
}

std::string Fields::str_or(const std::string& path, const std::string& fallback) const {
  return has(path) ? str(path) : fallback;
}

double Fields::quantity(const std::string& path) const {
  const nlohmann::json& n = require(path);
  if (n.is_number()) return n.get<double>();  // already SI
  if (!n.is_string()) throw ConfigError(path + ": expected a unit-suffixed string");
  return parse_quantity(n.get<std::string>(), path);
}

double Fields::quantity_or(const std::string& path, double fallback) const {
  return has(path) ? quantity(path) : fallback;
}

std::vector<double> Fields::number_list(const std::string& path) const {
  const nlohmann::json& n = require(path);
  if (!n.is_array()) throw ConfigError(path + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& item : n) {
    if (!item.is_number()) throw ConfigError(path + ": expected an array of numbers");
    out.push_back(item.get<double>());
  }
  return out;
}

namespace {

void check_amplitudes(const Fields& f, ValidationReport& rep) {
  if (!f.has("drive.a_plus_sq") || !f.has("drive.a_minus_sq")) {
    rep.errors.push_back("drive.a_plus_sq / drive.a_minus_sq: required");
    return;
  }
  const double ap = f.number("drive.a_plus_sq");
  const double am = f.number("drive.a_minus_sq");
  if (ap < 0.0 || am < 0.0) rep.errors.push_back("drive.a_plus_sq: amplitudes must be >= 0");
  if (std::abs(ap + am - 1.0) > 1e-12) {
    rep.errors.push_back("drive.a_plus_sq + drive.a_minus_sq must equal 1");
  }
}

void check_delta(const Fields& f, ValidationReport& rep) {
  if (!f.has("drive.delta_big") && !f.has("drive.delta_over_omega0")) {
    rep.errors.push_back("drive.delta_big: required (or drive.delta_over_omega0)");
    return;
  }
  const double omega0 = f.has("drive.omega0") ? f.quantity("drive.omega0") : 0.0;
  double delta = 0.0;
  if (f.has("drive.delta_big")) {
    delta = f.quantity("drive.delta_big");
  } else {
    delta = f.number("drive.delta_over_omega0") * omega0;
  }
  if (delta == 0.0) {
    rep.errors.push_back("drive.delta_big: must be nonzero");
  } else if (omega0 > 0.0 && std::abs(delta) < 5.0 * omega0) {
    rep.warnings.push_back(
        "drive.delta_big < 5 omega0: adiabatic elimination questionable at this detuning");
  }
}

void check_harmonic_trap(const Fields& f, ValidationReport& rep) {
  for (const char* key : {"trap.mass", "trap.omega_perp", "trap.omega_z"}) {
    if (!f.has(key)) rep.errors.push_back(std::string(key) + ": required");
  }
  if (rep.errors.empty()) {
    if (f.quantity("trap.omega_perp") >= f.quantity("trap.omega_z")) {
      rep.warnings.push_back("trap: omega_perp >= omega_z, cloud is not pancake shaped");
    }
  }
}

void check_mexican_trap(const Fields& f, ValidationReport& rep) {
  for (const char* key : {"trap.mass", "trap.omega_perp", "trap.omega_z"}) {
    if (!f.has(key)) rep.errors.push_back(std::string(key) + ": required");
  }
  if (!f.has("trap.sigma") || !f.has("trap.lambda")) {
    rep.errors.push_back("trap.sigma / trap.lambda: required");
    return;
  }
  if (f.number("trap.sigma") <= 0.0) rep.errors.push_back("trap.sigma: must be positive");
  if (f.number("trap.lambda") <= 0.0) rep.errors.push_back("trap.lambda: must be positive");
}

void check_pulses(const Fields& f, ValidationReport& rep) {
  if (!f.has("pulses")) {
    rep.errors.push_back("pulses: required");
    return;
  }
  if (f.number_or("pulses.sigma1", 0.25) <= 0.0 || f.number_or("pulses.sigma2", 0.25) <= 0.0) {
    rep.errors.push_back("pulses.sigma1 / pulses.sigma2: widths must be positive");
  }
}

}  // namespace

ValidationReport validate(const ParsedConfig& cfg) {
  ValidationReport rep;
  const Fields f(cfg.raw);
  switch (cfg.kind) {
    case ExperimentKind::mz_prepare: {
      if (!f.has("interferometer.t_tilde_sq") || !f.has("interferometer.r_tilde_sq")) {
        rep.errors.push_back("interferometer.t_tilde_sq / r_tilde_sq: required");
      } else {
        const double sum =
            f.number("interferometer.t_tilde_sq") + f.number("interferometer.r_tilde_sq");
        if (std::abs(sum - 1.0) > 1e-12) {
          rep.errors.push_back("interferometer: t_tilde_sq + r_tilde_sq must equal 1");
        }
      }
      break;
    }
    case ExperimentKind::chirp: {
      check_amplitudes(f, rep);
      for (const char* key : {"drive.omega0", "condensate.kappa"}) {
        if (!f.has(key)) rep.errors.push_back(std::string(key) + ": required");
      }
      break;
    }
    case ExperimentKind::stirap:
    case ExperimentKind::overlap_sweep:
    case ExperimentKind::five_level_check: {
      check_amplitudes(f, rep);
      check_delta(f, rep);
      check_pulses(f, rep);
      if (!f.has("drive.omega0")) rep.errors.push_back("drive.omega0: required");
      if (cfg.kind == ExperimentKind::overlap_sweep && !f.has("sweep.separations")) {
        rep.errors.push_back("sweep.separations: required");
      }
      if (cfg.kind == ExperimentKind::five_level_check) check_harmonic_trap(f, rep);
      break;
    }
    case ExperimentKind::mexican_hat: {
      check_amplitudes(f, rep);
      check_delta(f, rep);
      check_pulses(f, rep);
      check_mexican_trap(f, rep);
      for (const char* key : {"drive.omega0", "condensate.atoms", "condensate.scattering_length"}) {
        if (!f.has(key)) rep.errors.push_back(std::string(key) + ": required");
      }
      break;
    }
    case ExperimentKind::detect: {
      if (!f.has("state.ell")) rep.errors.push_back("state.ell: required");
      if (!f.has("state.alpha_sq") || !f.has("state.beta_sq")) {
        rep.errors.push_back("state.alpha_sq / state.beta_sq: required");
      } else if (std::abs(f.number("state.alpha_sq") + f.number("state.beta_sq") - 1.0) > 1e-12) {
        rep.errors.push_back("state: alpha_sq + beta_sq must equal 1");
      }
      check_harmonic_trap(f, rep);
      break;
    }
    case ExperimentKind::validate_integrals: {
      check_harmonic_trap(f, rep);
      if (!f.has("condensate.kappa") && !f.has("condensate.atoms")) {
        rep.errors.push_back("condensate.kappa: required (or condensate.atoms)");
      }
      break;
    }
  }
  return rep;
}

}  // namespace vortexsim::config
