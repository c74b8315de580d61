#include "vortexsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "vortexsim/errors.hpp"

namespace vortexsim::dyn {

double transfer_function(const SpinorAmplitudes& s) {
  return std::norm(s.alpha) - std::norm(s.beta) - std::norm(s.gamma);
}

double PulseProfile::f_at_tau(double tau) const {
  const double x = (tau - t1) / sigma1;
  return f0 * std::exp(-x * x);
}

double PulseProfile::g_at_tau(double tau) const {
  const double x = (tau - t2) / sigma2;
  return g0 * std::exp(-x * x);
}

SpinorAmplitudes rhs_chirp(const SpinorAmplitudes& s, double kappa, double omega_coupling,
                           double delta_t, cplx a_plus, cplx a_minus) {
  const double pv = std::norm(s.beta) + std::norm(s.gamma);
  const double diag_v = delta_t + 2.0 * omega_coupling + 0.5 * kappa * pv;
  SpinorAmplitudes d;
  d.alpha = -imag_unit * (3.0 * kappa * std::norm(s.alpha) * s.alpha +
                          omega_coupling * (std::conj(a_plus) * s.beta +
                                            std::conj(a_minus) * s.gamma));
  d.beta = -imag_unit * (diag_v * s.beta + omega_coupling * a_plus * s.alpha);
  d.gamma = -imag_unit * (diag_v * s.gamma + omega_coupling * a_minus * s.alpha);
  return d;
}

SpinorAmplitudes rhs_stirap(const SpinorAmplitudes& s, double kappa, double omega_perp,
                            const DriveConfig& drive, const PulseProfile& pulses, double t) {
  const double tau = drive.omega0 * t;
  const double f = pulses.f_at_tau(tau);
  const double g = pulses.g_at_tau(tau);
  const double q = drive.omega0 * drive.omega0 / drive.delta_big;
  const double pv = std::norm(s.beta) + std::norm(s.gamma);
  const double diag_v = 2.0 * omega_perp + 0.5 * kappa * pv + q * g * g;
  SpinorAmplitudes d;
  d.alpha = -imag_unit *
            (q * f * f * s.alpha + 3.0 * kappa * std::norm(s.alpha) * s.alpha +
             q * f * g * (std::conj(drive.a_plus) * s.beta + std::conj(drive.a_minus) * s.gamma));
  d.beta = -imag_unit * (diag_v * s.beta + q * f * g * drive.a_plus * s.alpha);
  d.gamma = -imag_unit * (diag_v * s.gamma + q * f * g * drive.a_minus * s.alpha);
  return d;
}

SpinorAmplitudes rhs_general(const SpinorAmplitudes& s, const integrals::IntegralSet& set,
                             const DriveConfig& drive, const PulseProfile* pulses, double delta,
                             double t, double gauge_shift) {
  const double tau = drive.omega0 * t;
  const double f = pulses ? pulses->f_at_tau(tau) : 1.0;
  const double g = pulses ? pulses->g_at_tau(tau) : 1.0;
  const double omega_p = drive.omega0 * f;                        // |Omega_0(t)|
  const double omega_c = drive.omega0 * drive.omega_c_ratio * g;  // |Omega_c(t)|
  const double stark_g = omega_p * omega_p / drive.delta_big * set.stark_factor();
  const double stark_v = omega_c * omega_c / drive.delta_big;
  const double couple = omega_p * omega_c / drive.delta_big * set.coupling_factor();

  const double na = std::norm(s.alpha), nb = std::norm(s.beta), ng = std::norm(s.gamma);
  const double diag_a =
      set.t_g + set.v_g - gauge_shift + set.i_gg * na + set.i_gp * nb + set.i_gm * ng + stark_g;
  const double diag_b = set.t_pm + set.v_pm + delta - gauge_shift + set.i_gp * na +
                        set.i_pp * nb + set.i_pm * ng + stark_v;
  const double diag_g = set.t_pm + set.v_pm + delta - gauge_shift + set.i_gm * na +
                        set.i_pm * nb + set.i_mm * ng + stark_v;

  SpinorAmplitudes d;
  d.alpha = -imag_unit *
            (diag_a * s.alpha +
             couple * (std::conj(drive.a_plus) * s.beta + std::conj(drive.a_minus) * s.gamma));
  d.beta = -imag_unit * (diag_b * s.beta + couple * drive.a_plus * s.alpha);
  d.gamma = -imag_unit * (diag_g * s.gamma + couple * drive.a_minus * s.alpha);
  return d;
}

FiveLevelAmplitudes rhs_five_level(const FiveLevelAmplitudes& s,
                                   const integrals::IntegralSet& set, const DriveConfig& drive,
                                   const PulseProfile* pulses, double delta, double t,
                                   double gauge_shift) {
  const double tau = drive.omega0 * t;
  const double f = pulses ? pulses->f_at_tau(tau) : 1.0;
  const double g = pulses ? pulses->g_at_tau(tau) : 1.0;
  const double omega_p = drive.omega0 * f * set.coupling_factor();
  const double omega_c = drive.omega0 * drive.omega_c_ratio * g;

  // Profile-resolved populations: the excited pair shares the vortex modes.
  const double n_g = std::norm(s.alpha);
  const double n_p = std::norm(s.beta) + std::norm(s.exc_i);
  const double n_m = std::norm(s.gamma) + std::norm(s.exc_ip);

  const double diag_a =
      set.t_g + set.v_g - gauge_shift + set.i_gg * n_g + set.i_gp * n_p + set.i_gm * n_m;
  const double diag_vp = set.t_pm + set.v_pm - gauge_shift + set.i_gp * n_g + set.i_pp * n_p +
                         set.i_pm * n_m;
  const double diag_vm = set.t_pm + set.v_pm - gauge_shift + set.i_gm * n_g + set.i_pm * n_p +
                         set.i_mm * n_m;

  FiveLevelAmplitudes d;
  d.alpha = -imag_unit * (diag_a * s.alpha +
                          omega_p * (std::conj(drive.a_plus) * s.exc_i +
                                     std::conj(drive.a_minus) * s.exc_ip));
  d.beta = -imag_unit * ((diag_vp + delta) * s.beta + omega_c * s.exc_i);
  d.gamma = -imag_unit * ((diag_vm + delta) * s.gamma + omega_c * s.exc_ip);
  d.exc_i = -imag_unit * ((diag_vp - drive.delta_big) * s.exc_i + omega_c * s.beta +
                          omega_p * drive.a_plus * s.alpha);
  d.exc_ip = -imag_unit * ((diag_vm - drive.delta_big) * s.exc_ip + omega_c * s.gamma +
                           omega_p * drive.a_minus * s.alpha);
  return d;
}

// ---- Dormand-Prince 5(4) ----

namespace {

constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
constexpr double kB5[7] = {35.0 / 384,      0.0,        500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr double kB4[7] = {5179.0 / 57600,    0.0,         7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

// Max norm: invariant under component permutations, so state relabelings
// (e.g. swapping the two vortex amplitudes) reproduce bit-identical steps.
template <std::size_t N>
double error_norm(const StateVec<N>& y, const StateVec<N>& y_new, const StateVec<N>& err,
                  double atol, double rtol) {
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
    acc = std::max(acc, std::abs(err[i]) / sc);
  }
  return acc;
}

}  // namespace

template <std::size_t N>
OdeResult<N> integrate_rk45(
    const std::function<StateVec<N>(double, const StateVec<N>&)>& rhs, const StateVec<N>& y0,
    std::span<const double> sample_times, const IntegratorOptions& opts,
    const std::function<void(double, const StateVec<N>&)>& observer) {
  if (sample_times.size() < 2) {
    throw std::invalid_argument("integrate_rk45: need at least two sample times");
  }
  for (std::size_t i = 1; i < sample_times.size(); ++i) {
    if (!(sample_times[i] > sample_times[i - 1])) {
      throw std::invalid_argument("integrate_rk45: sample times must be strictly increasing");
    }
  }

  OdeResult<N> out;
  out.states.reserve(sample_times.size());
  out.states.push_back(y0);

  const double t_end = sample_times.back();
  const double span = t_end - sample_times.front();
  double t = sample_times.front();
  StateVec<N> y = y0;
  const double norm0 = [&] {
    double n = 0.0;
    for (const cplx& c : y) n += std::norm(c);
    return n;
  }();

  // First-step heuristic from the initial derivative scale.
  double h;
  {
    StateVec<N> f0 = rhs(t, y);
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = opts.abs_tol + opts.rel_tol * std::abs(y[i]);
      d0 = std::max(d0, std::abs(y[i]) / sc);
      d1 = std::max(d1, std::abs(f0[i]) / sc);
    }
    h = (d1 > 0.0 && d0 > 0.0) ? 0.01 * d0 / d1 : 1e-6 * span;
    h = std::min(h, span / 10.0);
  }
  if (opts.max_step > 0.0) h = std::min(h, opts.max_step);

  std::size_t next_sample = 1;
  if (observer) observer(t, y);

  StateVec<N> k[7];
  while (next_sample < sample_times.size()) {
    const double target = sample_times[next_sample];
    bool clipped = false;
    const double h_planned = h;
    if (t + h >= target) {
      h = target - t;
      clipped = true;
    }
    if (clipped && t + h <= t) {
      // the remaining gap is below floating-point resolution
      t = target;
      out.states.push_back(y);
      ++next_sample;
      continue;
    }
    const double h_min = 1e4 * std::numeric_limits<double>::epsilon() *
                         std::max({std::abs(t), std::abs(t_end), 1e-300});
    if (!clipped && h < h_min) {
      std::ostringstream os;
      os << "integrate_rk45: step size underflow at t = " << t << " (h = " << h
         << "); the system is too stiff for this explicit scheme";
      throw StiffnessError(os.str());
    }

    k[0] = rhs(t, y);
    StateVec<N> y_stage;
    for (int s = 1; s < 7; ++s) {
      for (std::size_t i = 0; i < N; ++i) {
        cplx acc = y[i];
        for (int j = 0; j < s; ++j) acc += h * kA[s][j] * k[j][i];
        y_stage[i] = acc;
      }
      k[s] = rhs(t + kC[s] * h, y_stage);
    }
    StateVec<N> y5, err;
    for (std::size_t i = 0; i < N; ++i) {
      cplx acc5{0.0, 0.0}, acc4{0.0, 0.0};
      for (int s = 0; s < 7; ++s) {
        acc5 += kB5[s] * k[s][i];
        acc4 += kB4[s] * k[s][i];
      }
      y5[i] = y[i] + h * acc5;
      err[i] = h * (acc5 - acc4);
    }

    const double err_norm = error_norm<N>(y, y5, err, opts.abs_tol, opts.rel_tol);
    if (err_norm <= 1.0) {
      t += h;
      y = y5;
      ++out.steps;
      if (observer) observer(t, y);
      double n = 0.0;
      for (const cplx& c : y) n += std::norm(c);
      out.norm_drift = std::max(out.norm_drift, std::abs(n - norm0));
      if (t >= target) {
        out.states.push_back(y);
        ++next_sample;
      }
    } else {
      ++out.rejected;
    }
    const double factor =
        std::clamp(0.9 * std::pow(std::max(err_norm, 1e-10), -0.2), 0.2, 5.0);
    if (clipped && err_norm <= 1.0) {
      h = h_planned;  // the clip only hit a sample boundary
    } else {
      h = std::abs(h) * factor;
    }
    if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
  }
  return out;
}

template OdeResult<3> integrate_rk45<3>(
    const std::function<StateVec<3>(double, const StateVec<3>&)>&, const StateVec<3>&,
    std::span<const double>, const IntegratorOptions&,
    const std::function<void(double, const StateVec<3>&)>&);
template OdeResult<5> integrate_rk45<5>(
    const std::function<StateVec<5>(double, const StateVec<5>&)>&, const StateVec<5>&,
    std::span<const double>, const IntegratorOptions&,
    const std::function<void(double, const StateVec<5>&)>&);

namespace {

StateVec<3> pack(const SpinorAmplitudes& s) { return {s.alpha, s.beta, s.gamma}; }
SpinorAmplitudes unpack3(const StateVec<3>& v) { return {v[0], v[1], v[2]}; }
std::vector<double> linspace(double a, double b, int n) {
  n = std::max(n, 2);
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  v.back() = b;
  return v;
}

Trajectory make_trajectory(const std::vector<double>& tau_samples,
                           const OdeResult<3>& ode, double omega0) {
  Trajectory tr;
  tr.tau = tau_samples;
  tr.omega0 = omega0;
  tr.t_seconds.reserve(tau_samples.size());
  tr.states.reserve(tau_samples.size());
  tr.f_values.reserve(tau_samples.size());
  for (std::size_t i = 0; i < tau_samples.size(); ++i) {
    tr.t_seconds.push_back(tau_samples[i] / omega0);
    const SpinorAmplitudes s = unpack3(ode.states[i]);
    tr.states.push_back(s);
    tr.f_values.push_back(transfer_function(s));
  }
  tr.norm_drift = ode.norm_drift;
  tr.steps = ode.steps;
  return tr;
}

}  // namespace

Trajectory integrate(const std::function<SpinorAmplitudes(double, const SpinorAmplitudes&)>& rhs,
                     const SpinorAmplitudes& initial, double omega0,
                     std::span<const double> tau_samples, const IntegratorOptions& opts) {
  if (omega0 <= 0.0) throw std::invalid_argument("integrate: omega0 must be positive");
  // Integrate in tau; derivatives scale by 1/omega0.
  std::function<StateVec<3>(double, const StateVec<3>&)> scaled =
      [&rhs, omega0](double tau, const StateVec<3>& v) {
        const SpinorAmplitudes d = rhs(tau / omega0, unpack3(v));
        return StateVec<3>{d.alpha / omega0, d.beta / omega0, d.gamma / omega0};
      };
  const std::vector<double> samples(tau_samples.begin(), tau_samples.end());
  const OdeResult<3> ode = integrate_rk45<3>(scaled, pack(initial), samples, opts);
  return make_trajectory(samples, ode, omega0);
}

Trajectory run_chirp_experiment(const ChirpExperiment& p) {
  const double coupling = p.coupling > 0.0 ? p.coupling : p.omega0;
  const ChirpSchedule schedule{p.c_over_omega0 * p.omega0, p.omega0};
  IntegratorOptions opts;
  opts.rel_tol = p.rel_tol;
  opts.abs_tol = 1e-14;
  const auto rhs = [&](double t, const SpinorAmplitudes& s) {
    return rhs_chirp(s, p.kappa, coupling, schedule.delta_at(t), p.a_plus, p.a_minus);
  };
  return integrate(rhs, SpinorAmplitudes{cplx{1.0, 0.0}, {}, {}}, p.omega0,
                   linspace(p.tau_start, p.tau_end, p.samples), opts);
}

Trajectory run_stirap_experiment(const StirapExperiment& p) {
  if (p.delta_over_omega0 == 0.0) {
    throw std::invalid_argument("run_stirap_experiment: the detuning must be nonzero");
  }
  DriveConfig drive;
  drive.omega0 = p.omega0;
  drive.delta_big = p.delta_over_omega0 * p.omega0;
  drive.a_plus = p.a_plus;
  drive.a_minus = p.a_minus;
  IntegratorOptions opts;
  opts.rel_tol = p.rel_tol;
  opts.abs_tol = 1e-14;
  const auto rhs = [&](double t, const SpinorAmplitudes& s) {
    return rhs_stirap(s, p.kappa, p.omega_perp, drive, p.pulses, t);
  };
  return integrate(rhs, SpinorAmplitudes{cplx{1.0, 0.0}, {}, {}}, p.omega0,
                   linspace(p.tau_start, p.tau_end, p.samples), opts);
}

std::vector<SweepPoint> overlap_sweep(const StirapExperiment& base,
                                      std::span<const double> separations, bool parallel) {
  auto run_one = [&base](double sep) {
    StirapExperiment p = base;
    p.pulses.t2 = p.pulses.t1 - sep;
    const double smax = std::max(p.pulses.sigma1, p.pulses.sigma2);
    p.tau_start = std::min(p.pulses.t1, p.pulses.t2) - 6.0 * smax;
    p.tau_end = std::max(p.pulses.t1, p.pulses.t2) + 6.0 * smax;
    const Trajectory tr = run_stirap_experiment(p);
    const SpinorAmplitudes& fs = tr.final_state();
    return SweepPoint{sep, tr.final_f(), std::norm(fs.beta), std::norm(fs.gamma)};
  };

  std::vector<SweepPoint> out(separations.size());
  if (parallel) {
    std::vector<std::future<SweepPoint>> futures;
    futures.reserve(separations.size());
    for (double sep : separations) {
      futures.push_back(std::async(std::launch::async, run_one, sep));
    }
    for (std::size_t i = 0; i < futures.size(); ++i) out[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < separations.size(); ++i) out[i] = run_one(separations[i]);
  }
  return out;
}

MexicanHatResult run_mexican_hat_experiment(const MexicanHatExperiment& p,
                                            const integrals::IntegralSet* precomputed) {
  if (p.delta_over_omega0 == 0.0) {
    throw std::invalid_argument("run_mexican_hat_experiment: the detuning must be nonzero");
  }
  MexicanHatResult result;
  if (precomputed) {
    result.integrals = *precomputed;
  } else {
    const auto psi_g = traps::tf_wavefunction_ansatz(p.trap, p.condensate, 0);
    const auto psi_vp = traps::tf_wavefunction_ansatz(p.trap, p.condensate, p.ell);
    const auto psi_vm = traps::tf_wavefunction_ansatz(p.trap, p.condensate, -p.ell);
    const double w = p.beam_waist > 0.0
                         ? p.beam_waist
                         : integrals::default_beam_waist(psi_g, psi_vp, p.ell, p.qspec);
    result.integrals =
        integrals::numeric_integrals(psi_g, psi_vp, psi_vm, p.condensate.eta, w, p.ell, p.qspec);
  }

  DriveConfig drive;
  drive.omega0 = p.omega0;
  drive.delta_big = p.delta_over_omega0 * p.omega0;
  drive.a_plus = p.a_plus;
  drive.a_minus = p.a_minus;
  drive.ell = p.ell;
  // Constant offset common to all diagonals; populations are unaffected and
  // the integrator avoids the fast common phase.
  const double gauge =
      result.integrals.t_g + result.integrals.v_g + result.integrals.i_gp;
  IntegratorOptions opts;
  opts.rel_tol = p.rel_tol;
  opts.abs_tol = 1e-14;
  const auto rhs = [&](double t, const SpinorAmplitudes& s) {
    return rhs_general(s, result.integrals, drive, &p.pulses, 0.0, t, gauge);
  };
  result.trajectory = integrate(rhs, SpinorAmplitudes{cplx{1.0, 0.0}, {}, {}}, p.omega0,
                                linspace(p.tau_start, p.tau_end, p.samples), opts);
  return result;
}

FiveLevelCheckResult run_five_level_check(const FiveLevelCheck& p) {
  StirapExperiment three = p.base;
  three.delta_over_omega0 = p.delta_over_omega0;
  if (p.fix_two_photon_rabi) {
    const double scale = std::sqrt(p.delta_over_omega0 / p.base.delta_over_omega0);
    three.pulses.f0 *= scale;
    three.pulses.g0 *= scale;
  }

  FiveLevelCheckResult result;
  result.three = run_stirap_experiment(three);

  const double w = integrals::default_beam_waist(p.trap, 2);
  const integrals::IntegralSet set =
      integrals::harmonic_analytic_integrals(p.trap, three.kappa, w);
  DriveConfig drive;
  drive.omega0 = three.omega0;
  drive.delta_big = three.delta_over_omega0 * three.omega0;
  drive.a_plus = three.a_plus;
  drive.a_minus = three.a_minus;
  const double gauge = set.t_g + set.v_g + set.i_gp;

  IntegratorOptions opts;
  opts.rel_tol = three.rel_tol;
  opts.abs_tol = 1e-14;
  const std::vector<double> samples = linspace(three.tau_start, three.tau_end, three.samples);

  const double omega0 = three.omega0;
  std::function<StateVec<5>(double, const StateVec<5>&)> scaled =
      [&](double tau, const StateVec<5>& v) {
        const FiveLevelAmplitudes d = rhs_five_level(
            FiveLevelAmplitudes{v[0], v[1], v[2], v[3], v[4]}, set, drive, &three.pulses, 0.0,
            tau / omega0, gauge);
        return StateVec<5>{d.alpha / omega0, d.beta / omega0, d.gamma / omega0,
                           d.exc_i / omega0, d.exc_ip / omega0};
      };
  double max_exc = 0.0;
  const std::function<void(double, const StateVec<5>&)> observer =
      [&max_exc](double, const StateVec<5>& v) {
        max_exc = std::max(max_exc, std::norm(v[3]) + std::norm(v[4]));
      };
  const StateVec<5> y0{cplx{1.0, 0.0}, {}, {}, {}, {}};
  const OdeResult<5> ode = integrate_rk45<5>(scaled, y0, samples, opts, observer);

  Trajectory& five = result.five;
  five.tau = samples;
  five.omega0 = omega0;
  five.norm_drift = ode.norm_drift;
  five.steps = ode.steps;
  five.max_excited = max_exc;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    five.t_seconds.push_back(samples[i] / omega0);
    const StateVec<5>& v = ode.states[i];
    const SpinorAmplitudes s{v[0], v[1], v[2]};
    five.states.push_back(s);
    five.f_values.push_back(transfer_function(s));
    five.excited_pop.push_back(std::norm(v[3]) + std::norm(v[4]));
  }

  double dev = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const SpinorAmplitudes& a = result.three.states[i];
    const SpinorAmplitudes& b = five.states[i];
    dev = std::max(dev, std::abs(std::norm(a.alpha) - std::norm(b.alpha)));
    dev = std::max(dev, std::abs(std::norm(a.beta) - std::norm(b.beta)));
    dev = std::max(dev, std::abs(std::norm(a.gamma) - std::norm(b.gamma)));
  }
  result.max_pop_deviation = dev;
  result.max_excited = max_exc;
  return result;
}

TransferTiming transfer_timing(const Trajectory& traj, double level) {
  TransferTiming t;
  bool down = false;
  for (std::size_t i = 1; i < traj.f_values.size(); ++i) {
    if (!down && traj.f_values[i] < level) {
      // linear interpolation of the crossing
      const double f0 = traj.f_values[i - 1], f1 = traj.f_values[i];
      const double w = (level - f0) / (f1 - f0);
      t.tau_cross_down = traj.tau[i - 1] + w * (traj.tau[i] - traj.tau[i - 1]);
      down = true;
    }
    if (down && traj.f_values[i] < -level) {
      const double f0 = traj.f_values[i - 1], f1 = traj.f_values[i];
      const double w = (-level - f0) / (f1 - f0);
      t.tau_cross_low = traj.tau[i - 1] + w * (traj.tau[i] - traj.tau[i - 1]);
      t.width = t.tau_cross_low - t.tau_cross_down;
      t.complete = true;
      return t;
    }
  }
  return t;
}

}  // namespace vortexsim::dyn
