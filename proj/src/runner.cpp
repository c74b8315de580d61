#include "vortexsim/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "vortexsim/constants.hpp"
#include "vortexsim/detection.hpp"
#include "vortexsim/dynamics.hpp"
#include "vortexsim/errors.hpp"
#include "vortexsim/integrals.hpp"
#include "vortexsim/oam.hpp"
#include "vortexsim/output.hpp"
#include "vortexsim/traps.hpp"
#include "vortexsim/util.hpp"

namespace vortexsim::runner {

namespace {

using config::ExperimentKind;
using config::Fields;

struct Context {
  const config::ParsedConfig& cfg;
  Fields fields;
  RunOptions opts;
  output::RunMeta meta;

  bool wants(const std::string& fmt) const {
    if (opts.format) return *opts.format == fmt;
    return true;  // both by default
  }
  std::filesystem::path artifact(const std::string& suffix) const {
    const Fields f(cfg.raw);
    const std::string base = f.str_or("output.basename", config::to_string(cfg.kind));
    return opts.output_dir / (base + suffix);
  }
  int samples(int fallback) const {
    if (opts.samples) return *opts.samples;
    const Fields f(cfg.raw);
    return f.integer_or("output.samples", fallback);
  }
  double rel_tol(double fallback) const {
    if (opts.tolerance) return *opts.tolerance;
    const Fields f(cfg.raw);
    return f.number_or("output.rel_tol", fallback);
  }
};

traps::HarmonicTrap harmonic_trap_from(const Fields& f) {
  return {f.quantity("trap.mass"), f.quantity("trap.omega_perp"), f.quantity("trap.omega_z")};
}

traps::MexicanHatTrap mexican_trap_from(const Fields& f) {
  return {f.number("trap.sigma"), f.number("trap.lambda"), f.quantity("trap.mass"),
          f.quantity("trap.omega_perp"), f.quantity("trap.omega_z")};
}

traps::CondensateParams harmonic_condensate_from(const Fields& f,
                                                 const traps::HarmonicTrap& trap) {
  const double a_sc = f.quantity_or("condensate.scattering_length", 5e-9);
  if (f.has("condensate.kappa")) {
    return traps::condensate_from_kappa(trap, f.quantity("condensate.kappa"), a_sc);
  }
  return traps::condensate_from_atoms(trap, f.number("condensate.atoms"), a_sc);
}

cplx amplitude_from(const Fields& f, const std::string& sq_path,
                    const std::string& phase_path) {
  const double mag = std::sqrt(f.number(sq_path));
  const double phase = f.number_or(phase_path, 0.0) * M_PI;
  return mag * std::exp(imag_unit * phase);
}

dyn::PulseProfile pulses_from(const Fields& f) {
  dyn::PulseProfile p;
  p.f0 = f.number_or("pulses.f0", 150.0);
  p.g0 = f.number_or("pulses.g0", 300.0);
  p.t1 = f.number_or("pulses.t1", 1.0);
  p.t2 = f.number_or("pulses.t2", 0.5);
  p.sigma1 = f.number_or("pulses.sigma1", 0.25);
  p.sigma2 = f.number_or("pulses.sigma2", 0.25);
  return p;
}

double delta_over_omega0_from(const Fields& f, double omega0, double fallback) {
  if (f.has("drive.delta_over_omega0")) return f.number("drive.delta_over_omega0");
  if (f.has("drive.delta_big")) return f.quantity("drive.delta_big") / omega0;
  return fallback;
}

dyn::StirapExperiment stirap_from(const Context& ctx) {
  const Fields& f = ctx.fields;
  dyn::StirapExperiment p;
  p.omega0 = f.quantity("drive.omega0");
  if (f.has("trap.omega_perp")) p.omega_perp = f.quantity("trap.omega_perp");
  if (f.has("condensate.kappa")) {
    p.kappa = f.quantity("condensate.kappa");
  } else if (f.has("trap.mass")) {
    const traps::HarmonicTrap trap = harmonic_trap_from(f);
    p.kappa = harmonic_condensate_from(f, trap).kappa;
  }
  p.delta_over_omega0 = delta_over_omega0_from(f, p.omega0, 10.0);
  p.pulses = pulses_from(f);
  p.a_plus = amplitude_from(f, "drive.a_plus_sq", "drive.a_plus_phase_over_pi");
  p.a_minus = amplitude_from(f, "drive.a_minus_sq", "drive.a_minus_phase_over_pi");
  p.tau_start = f.number_or("window.tau_start", -0.5);
  p.tau_end = f.number_or("window.tau_end", 2.5);
  p.samples = ctx.samples(601);
  p.rel_tol = ctx.rel_tol(1e-11);
  return p;
}

void print_final(const dyn::Trajectory& traj) {
  const dyn::SpinorAmplitudes& s = traj.final_state();
  std::printf("final F = %+.4f  populations = (%.4f, %.4f, %.4f)  norm_drift = %.2e\n",
              traj.final_f(), std::norm(s.alpha), std::norm(s.beta), std::norm(s.gamma),
              traj.norm_drift);
}

void write_trajectory(const Context& ctx, const dyn::Trajectory& traj) {
  if (ctx.wants("csv")) {
    output::write_text(ctx.artifact(".csv"), output::trajectory_csv(traj, ctx.meta));
  }
  if (ctx.wants("json")) {
    output::write_json(ctx.artifact(".json"), output::trajectory_json(traj, ctx.meta));
  }
}

void check_norm_drift(const dyn::Trajectory& traj) {
  if (traj.norm_drift > 1e-8) {
    throw AccuracyError("norm drift exceeded the 1e-8 budget; tighten the tolerance",
                        traj.final_f(), traj.norm_drift);
  }
}

void run_mz_prepare(const Context& ctx) {
  const Fields& f = ctx.fields;
  const double t_sq = f.number("interferometer.t_tilde_sq");
  const double r_sq = f.number("interferometer.r_tilde_sq");
  const double phase = f.number_or("interferometer.phase_over_pi", 1.0) * M_PI;
  const int ell = f.integer_or("interferometer.input_ell", 2);
  const auto bs1 = oam::BeamSplitter::symmetric(std::sqrt(r_sq), std::sqrt(t_sq));
  const oam::TwoPortState out = oam::mach_zehnder(bs1, phase, ell, cplx{1.0, 0.0});
  const oam::OamSuperposition prepared = out.port1.normalized();

  nlohmann::json body;
  auto dump_port = [](const oam::OamSuperposition& port) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [l, c] : port.terms()) {
      terms.push_back({{"ell", l}, {"re", c.real()}, {"im", c.imag()}});
    }
    return terms;
  };
  body["port1"] = dump_port(out.port1);
  body["port2"] = dump_port(out.port2);
  body["port1_normalized"] = dump_port(prepared);
  body["port1_norm_sq"] = out.port1.norm_sq();
  body["port2_norm_sq"] = out.port2.norm_sq();
  output::write_json(ctx.artifact(".json"), output::with_meta(body, ctx.meta));
  std::printf("prepared |%+d> amplitude %.6f, |%+d> amplitude %.6f (port1)\n", ell,
              std::abs(prepared.amplitude(ell)), -ell, std::abs(prepared.amplitude(-ell)));
}

void run_chirp(const Context& ctx) {
  const Fields& f = ctx.fields;
  dyn::ChirpExperiment p;
  p.omega0 = f.quantity("drive.omega0");
  p.kappa = f.quantity("condensate.kappa");
  p.omega_perp = f.quantity_or("trap.omega_perp", 0.0);
  p.c_over_omega0 = f.number_or("chirp.c_over_omega0", 2.0);
  if (f.has("chirp.coupling") && f.str("chirp.coupling") != "auto") {
    p.coupling = f.quantity("chirp.coupling");
  }
  p.a_plus = amplitude_from(f, "drive.a_plus_sq", "drive.a_plus_phase_over_pi");
  p.a_minus = amplitude_from(f, "drive.a_minus_sq", "drive.a_minus_phase_over_pi");
  p.tau_start = f.number_or("window.tau_start", -10.0);
  p.tau_end = f.number_or("window.tau_end", 20.0);
  p.samples = ctx.samples(601);
  p.rel_tol = ctx.rel_tol(1e-11);
  const dyn::Trajectory traj = dyn::run_chirp_experiment(p);
  check_norm_drift(traj);
  write_trajectory(ctx, traj);
  print_final(traj);
}

void run_stirap(const Context& ctx) {
  const dyn::Trajectory traj = dyn::run_stirap_experiment(stirap_from(ctx));
  check_norm_drift(traj);
  write_trajectory(ctx, traj);
  print_final(traj);
}

void run_overlap_sweep(const Context& ctx) {
  const dyn::StirapExperiment base = stirap_from(ctx);
  const std::vector<double> seps = ctx.fields.number_list("sweep.separations");
  const std::vector<dyn::SweepPoint> points = dyn::overlap_sweep(base, seps);
  if (ctx.wants("csv")) {
    output::write_text(ctx.artifact(".csv"), output::sweep_csv(points, ctx.meta));
  }
  if (ctx.wants("json")) {
    output::write_json(ctx.artifact(".json"), output::sweep_json(points, ctx.meta));
  }
  double best = 1.0;
  for (const auto& p : points) best = std::min(best, p.final_f);
  std::printf("swept %zu separations; best final F = %+.4f\n", points.size(), best);
}

void run_mexican_hat(const Context& ctx) {
  const Fields& f = ctx.fields;
  dyn::MexicanHatExperiment p;
  p.trap = mexican_trap_from(f);
  p.condensate = traps::condensate_for_mexican_hat(
      p.trap, f.number("condensate.atoms"), f.quantity("condensate.scattering_length"));
  p.omega0 = f.quantity("drive.omega0");
  p.delta_over_omega0 = delta_over_omega0_from(f, p.omega0, 100.0);
  p.pulses = pulses_from(f);
  p.a_plus = amplitude_from(f, "drive.a_plus_sq", "drive.a_plus_phase_over_pi");
  p.a_minus = amplitude_from(f, "drive.a_minus_sq", "drive.a_minus_phase_over_pi");
  p.ell = f.integer_or("drive.ell", 2);
  p.qspec.rel_tol = f.number_or("quadrature.rel_tol", 1e-9);
  p.tau_start = f.number_or("window.tau_start", -0.5);
  p.tau_end = f.number_or("window.tau_end", 2.5);
  p.samples = ctx.samples(601);
  p.rel_tol = ctx.rel_tol(1e-11);

  // Integral cache keyed by trap, condensate and quadrature parameters.
  std::optional<integrals::IntegralSet> cached;
  std::filesystem::path cache_path;
  if (f.boolean_or("quadrature.cache", true)) {
    std::ostringstream trap_desc;
    trap_desc << util::format_double(p.trap.sigma) << ',' << util::format_double(p.trap.lambda)
              << ',' << util::format_double(p.trap.mass) << ','
              << util::format_double(p.trap.omega_perp) << ','
              << util::format_double(p.trap.omega_z) << ','
              << util::format_double(p.condensate.n_atoms);
    const std::uint64_t key = integrals::cache_key(trap_desc.str(), p.condensate.eta, p.ell,
                                                   p.beam_waist, p.qspec, false);
    cache_path = ctx.opts.output_dir / ("integrals_" + util::hex64(key) + ".json");
    if (std::filesystem::exists(cache_path)) {
      std::ifstream in(cache_path);
      std::ostringstream buf;
      buf << in.rdbuf();
      cached = integrals::IntegralSet::from_json(buf.str());
    }
  }

  const dyn::MexicanHatResult result =
      dyn::run_mexican_hat_experiment(p, cached ? &*cached : nullptr);
  check_norm_drift(result.trajectory);
  if (!cache_path.empty() && !cached) {
    output::write_text(cache_path, result.integrals.to_json());
  }
  write_trajectory(ctx, result.trajectory);
  output::write_json(ctx.artifact("_integrals.json"),
                     output::with_meta(nlohmann::json::parse(result.integrals.to_json()),
                                       ctx.meta));
  print_final(result.trajectory);
}

void run_five_level_check(const Context& ctx) {
  const Fields& f = ctx.fields;
  dyn::FiveLevelCheck p;
  p.trap = harmonic_trap_from(f);
  p.base = stirap_from(ctx);
  p.delta_over_omega0 = f.number_or("five_level.delta_over_omega0", p.base.delta_over_omega0);
  p.fix_two_photon_rabi = f.boolean_or("five_level.fix_two_photon_rabi", true);
  const dyn::FiveLevelCheckResult result = dyn::run_five_level_check(p);

  write_trajectory(ctx, result.five);
  nlohmann::json body;
  body["max_pop_deviation"] = result.max_pop_deviation;
  body["max_excited_population"] = result.max_excited;
  body["delta_over_omega0"] = p.delta_over_omega0;
  body["pulse_scale_applied"] =
      p.fix_two_photon_rabi ? std::sqrt(p.delta_over_omega0 / p.base.delta_over_omega0) : 1.0;
  body["final_f_three_level"] = result.three.final_f();
  body["final_f_five_level"] = result.five.final_f();
  output::write_json(ctx.artifact("_report.json"), output::with_meta(body, ctx.meta));
  std::printf("five-level check: max |pop5 - pop3| = %.3e, max excited population = %.3e\n",
              result.max_pop_deviation, result.max_excited);
}

void run_validate_integrals(const Context& ctx) {
  const Fields& f = ctx.fields;
  const traps::HarmonicTrap trap = harmonic_trap_from(f);
  const traps::CondensateParams condensate = harmonic_condensate_from(f, trap);
  const int ell = f.integer_or("ell", 2);
  quad::QuadratureSpec spec;
  spec.rel_tol = f.number_or("quadrature.rel_tol", 1e-9);

  const double w = integrals::default_beam_waist(trap, ell);
  const auto psi_g = traps::harmonic_wavefunction_ansatz(trap, 0);
  const auto psi_vp = traps::harmonic_wavefunction_ansatz(trap, ell);
  const auto psi_vm = traps::harmonic_wavefunction_ansatz(trap, -ell);
  const integrals::IntegralSet numeric =
      integrals::numeric_integrals(psi_g, psi_vp, psi_vm, condensate.eta, w, ell, spec);

  nlohmann::json body;
  body["numeric"] = nlohmann::json::parse(numeric.to_json());
  double max_rel = 0.0;
  if (ell == 2) {
    const integrals::IntegralSet analytic =
        integrals::harmonic_analytic_integrals(trap, condensate.kappa, w);
    body["analytic"] = nlohmann::json::parse(analytic.to_json());
    nlohmann::json rel;
    auto cmp = [&](const char* name, double a, double b) {
      const double r = std::abs(a - b) / std::max(std::abs(b), 1e-300);
      rel[name] = r;
      max_rel = std::max(max_rel, r);
    };
    cmp("t_g", numeric.t_g, analytic.t_g);
    cmp("v_g", numeric.v_g, analytic.v_g);
    cmp("t_pm", numeric.t_pm, analytic.t_pm);
    cmp("v_pm", numeric.v_pm, analytic.v_pm);
    cmp("i_gg", numeric.i_gg, analytic.i_gg);
    cmp("i_gp", numeric.i_gp, analytic.i_gp);
    cmp("i_gm", numeric.i_gm, analytic.i_gm);
    cmp("i_pp", numeric.i_pp, analytic.i_pp);
    cmp("i_mm", numeric.i_mm, analytic.i_mm);
    cmp("i_pm", numeric.i_pm, analytic.i_pm);
    cmp("i2l_gg", numeric.i2l_gg, analytic.i2l_gg);
    cmp("il_gp", numeric.il_gp, analytic.il_gp);
    body["relative_error"] = rel;
    body["max_relative_error"] = max_rel;
  }
  output::write_json(ctx.artifact(".json"), output::with_meta(body, ctx.meta));
  std::printf("integral validation (ell = %d): max relative error = %.3e\n", ell, max_rel);
}

void run_detect(const Context& ctx) {
  const Fields& f = ctx.fields;
  const int ell = f.integer("state.ell");
  const double alpha = std::sqrt(f.number("state.alpha_sq"));
  const double beta = std::sqrt(f.number("state.beta_sq"));
  const double theta = f.number_or("state.theta_over_pi", 0.0) * M_PI;

  std::function<detect::RadialProfile(int)> maker;
  double scale = 0.0;
  double default_extent_factor = 6.0;  // in units of Lperp
  if (f.str_or("state.profile", "harmonic") == "tf") {
    const traps::MexicanHatTrap trap = mexican_trap_from(f);
    const traps::CondensateParams condensate = traps::condensate_for_mexican_hat(
        trap, f.number("condensate.atoms"), f.quantity("condensate.scattering_length"));
    maker = detect::tf_profile_maker(trap, condensate);
    scale = traps::tf_radii(trap, condensate.mu).second;
    default_extent_factor = 3.0;  // scale is the outer ring radius here
  } else {
    const traps::HarmonicTrap trap = harmonic_trap_from(f);
    maker = detect::harmonic_profile_maker(trap);
    scale = trap.l_perp();
  }
  const double extent =
      f.has("grid.extent")
          ? f.quantity("grid.extent")
          : f.number_or("grid.extent_over_scale", default_extent_factor) * scale;
  const int nx = f.integer_or("grid.nx", 512);
  const int ny = f.integer_or("grid.ny", 512);

  const auto state = detect::VortexSuperposition::counter_rotating(alpha, beta, theta, ell, maker);
  const detect::DensityGrid grid = detect::render_grid(state, nx, ny, extent);
  if (ctx.wants("csv")) {
    output::write_text(ctx.artifact("_grid.csv"), output::grid_csv(grid, ctx.meta));
  }
  if (ctx.wants("json")) {
    output::write_json(ctx.artifact("_grid.json"), output::grid_json(grid, ctx.meta));
  }

  nlohmann::json body;
  const double v_closed = detect::visibility(state);
  body["visibility_closed_form"] = v_closed;
  body["visibility_grid"] = detect::visibility(grid);
  body["lobe_count"] = detect::count_lobes(grid);
  body["grid_integral"] = grid.integral();
  if (theta != 0.0) {
    auto ref_state = state;
    ref_state.theta = 0.0;
    const detect::DensityGrid ref = detect::render_grid(ref_state, nx, ny, extent);
    body["rotation_recovered"] = detect::pattern_rotation(grid, ref);
    body["rotation_expected"] = theta / (2.0 * ell);
  }
  if (f.boolean_or("state.probe_shift", false)) {
    const auto shifted = detect::probe_shift(state);
    const detect::DensityGrid after = detect::render_grid(shifted, nx, ny, extent);
    if (ctx.wants("csv")) {
      output::write_text(ctx.artifact("_grid_shifted.csv"), output::grid_csv(after, ctx.meta));
    }
    const auto assignment = detect::disambiguate_amplitudes(v_closed, after, shifted);
    body["probe_shift"] = {{"ell1", shifted.ell1},
                           {"ell2", shifted.ell2},
                           {"amp_large", assignment.amp_large},
                           {"amp_small", assignment.amp_small},
                           {"large_on_ell1", assignment.large_on_ell1},
                           {"symmetric", assignment.symmetric},
                           {"residual_ratio", assignment.residual_ratio}};
  }
  output::write_json(ctx.artifact("_analysis.json"), output::with_meta(body, ctx.meta));
  std::printf("visibility: closed form %.4f, grid %.4f; lobes = %d\n", v_closed,
              body["visibility_grid"].get<double>(), body["lobe_count"].get<int>());
}

}  // namespace

void run(const config::ParsedConfig& cfg, const RunOptions& opts) {
  const config::ValidationReport report = config::validate(cfg);
  if (!report.errors.empty()) {
    std::string all = "config errors:";
    for (const std::string& e : report.errors) all += "\n  " + e;
    throw ConfigError(all);
  }
  for (const std::string& w : report.warnings) {
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  }
  std::filesystem::create_directories(opts.output_dir);

  Context ctx{cfg, Fields(cfg.raw), opts,
              output::RunMeta{config::to_string(cfg.kind), cfg.hash, version_string()}};
  switch (cfg.kind) {
    case ExperimentKind::mz_prepare: run_mz_prepare(ctx); break;
    case ExperimentKind::chirp: run_chirp(ctx); break;
    case ExperimentKind::stirap: run_stirap(ctx); break;
    case ExperimentKind::overlap_sweep: run_overlap_sweep(ctx); break;
    case ExperimentKind::mexican_hat: run_mexican_hat(ctx); break;
    case ExperimentKind::detect: run_detect(ctx); break;
    case ExperimentKind::validate_integrals: run_validate_integrals(ctx); break;
    case ExperimentKind::five_level_check: run_five_level_check(ctx); break;
  }
}

}  // namespace vortexsim::runner
