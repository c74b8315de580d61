#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "vortexsim/constants.hpp"
#include "vortexsim/integrals.hpp"
#include "vortexsim/traps.hpp"

namespace vortexsim::dyn {

struct SpinorAmplitudes {
  cplx alpha{0.0, 0.0};
  cplx beta{0.0, 0.0};
  cplx gamma{0.0, 0.0};

  double norm_sq() const {
    return std::norm(alpha) + std::norm(beta) + std::norm(gamma);
  }
};

struct FiveLevelAmplitudes {
  cplx alpha{0.0, 0.0};
  cplx beta{0.0, 0.0};
  cplx gamma{0.0, 0.0};
  cplx exc_i{0.0, 0.0};
  cplx exc_ip{0.0, 0.0};

  double norm_sq() const {
    return std::norm(alpha) + std::norm(beta) + std::norm(gamma) + std::norm(exc_i) +
           std::norm(exc_ip);
  }
  double excited_population() const { return std::norm(exc_i) + std::norm(exc_ip); }
};

// F = |alpha|^2 - |beta|^2 - |gamma|^2: +1 non-rotating, -1 fully transferred.
double transfer_function(const SpinorAmplitudes& s);

struct DriveConfig {
  double omega0 = 0.0;         // |Omega_0| [rad/s]
  double omega_c_ratio = 1.0;  // Omega_c / Omega_0
  double delta_big = 0.0;      // single-photon detuning Delta [rad/s], != 0
  cplx a_plus{1.0, 0.0};
  cplx a_minus{0.0, 0.0};
  int ell = 2;
};

// Two-photon detuning sweep delta(t) = C (1 - Omega_0 t).
struct ChirpSchedule {
  double c_const = 0.0;  // C [rad/s]
  double omega0 = 0.0;   // [rad/s]
  double delta_at(double t) const { return c_const * (1.0 - omega0 * t); }
};

// Gaussian drive envelopes; centers and widths in units of 1/Omega_0.
struct PulseProfile {
  double f0 = 1.0, g0 = 1.0;
  double t1 = 1.0, t2 = 0.5;
  double sigma1 = 0.25, sigma2 = 0.25;

  double f_at_tau(double tau) const;
  double g_at_tau(double tau) const;
};

struct Trajectory {
  std::vector<double> tau;        // Omega_0 t, strictly increasing
  std::vector<double> t_seconds;  // tau / Omega_0
  std::vector<SpinorAmplitudes> states;
  std::vector<double> f_values;
  std::vector<double> excited_pop;  // five-level runs only
  double norm_drift = 0.0;
  double max_excited = 0.0;  // five-level runs only
  std::size_t steps = 0;
  double omega0 = 0.0;
  double final_f() const { return f_values.back(); }
  const SpinorAmplitudes& final_state() const { return states.back(); }
};

// ---- right-hand sides (time derivatives, SI rad/s) ----

// Chirp-protocol equations with the effective coupling omega_coupling:
// i a' = 3 k |a|^2 a + w (ap* b + am* g), i b' = (d + 2w) b + k/2 Pv b + w ap a.
SpinorAmplitudes rhs_chirp(const SpinorAmplitudes& s, double kappa, double omega_coupling,
                           double delta_t, cplx a_plus, cplx a_minus);

// STIRAP equations with pulsed drive; the two-photon detuning is zero here
// (the dark state needs it).
SpinorAmplitudes rhs_stirap(const SpinorAmplitudes& s, double kappa, double omega_perp,
                            const DriveConfig& drive, const PulseProfile& pulses, double t);

// General rate equations driven by an IntegralSet. `pulses` may be null for a
// cw drive. `gauge_shift` subtracts a constant from all three diagonals; it
// changes a global phase only, never a population.
SpinorAmplitudes rhs_general(const SpinorAmplitudes& s, const integrals::IntegralSet& set,
                             const DriveConfig& drive, const PulseProfile* pulses, double delta,
                             double t, double gauge_shift = 0.0);

// Five-level equations with the excited pair kept (-Delta detuned), projected
// through the same coupling geometry as rhs_general.
FiveLevelAmplitudes rhs_five_level(const FiveLevelAmplitudes& s,
                                   const integrals::IntegralSet& set, const DriveConfig& drive,
                                   const PulseProfile* pulses, double delta, double t,
                                   double gauge_shift = 0.0);

// ---- adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) ----

struct IntegratorOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double max_step = 0.0;  // 0 = unlimited
};

template <std::size_t N>
using StateVec = std::array<cplx, N>;

template <std::size_t N>
struct OdeResult {
  std::vector<StateVec<N>> states;  // one per sample time
  double norm_drift = 0.0;
  std::size_t steps = 0;
  std::size_t rejected = 0;
};

// Integrates dy/dt = rhs(t, y) and records the state at each sample time
// (sample_times must be strictly increasing; integration runs over the full
// span). Throws StiffnessError on step-size underflow. The observer, when
// set, sees every accepted step.
template <std::size_t N>
OdeResult<N> integrate_rk45(
    const std::function<StateVec<N>(double, const StateVec<N>&)>& rhs, const StateVec<N>& y0,
    std::span<const double> sample_times, const IntegratorOptions& opts = {},
    const std::function<void(double, const StateVec<N>&)>& observer = {});

// Spec-level convenience: three-level integrate with trajectory output in
// scaled time tau = omega0 * t.
Trajectory integrate(const std::function<SpinorAmplitudes(double, const SpinorAmplitudes&)>& rhs,
                     const SpinorAmplitudes& initial, double omega0,
                     std::span<const double> tau_samples, const IntegratorOptions& opts = {});

// ---- shipped experiments ----

struct ChirpExperiment {
  double kappa = 0.0;       // [rad/s]
  double omega_perp = 0.0;  // trap value [rad/s]; recorded, see `coupling`
  double omega0 = 0.0;      // [rad/s], schedule scale
  // Effective two-photon coupling in the simplified equations. 0 selects
  // omega0, the only value that actually sweeps the population (see README).
  double coupling = 0.0;
  double c_over_omega0 = 2.0;
  cplx a_plus{0.0, 0.0}, a_minus{0.0, 0.0};
  double tau_start = -10.0, tau_end = 20.0;
  int samples = 601;
  double rel_tol = 1e-11;
};

Trajectory run_chirp_experiment(const ChirpExperiment& p);

struct StirapExperiment {
  double kappa = 0.0;
  double omega_perp = 0.0;
  double omega0 = 0.0;
  double delta_over_omega0 = 10.0;
  PulseProfile pulses{150.0, 300.0, 1.0, 0.5, 0.25, 0.25};
  cplx a_plus{0.0, 0.0}, a_minus{0.0, 0.0};
  double tau_start = -0.5, tau_end = 2.5;
  int samples = 601;
  double rel_tol = 1e-11;
};

Trajectory run_stirap_experiment(const StirapExperiment& p);

struct SweepPoint {
  double separation;  // t1 - t2 in 1/Omega_0
  double final_f;
  double pop_beta;
  double pop_gamma;
};

// One STIRAP integration per separation, t1 held at the base value and t2
// moved. Runs in parallel; results are gathered in input order.
std::vector<SweepPoint> overlap_sweep(const StirapExperiment& base,
                                      std::span<const double> separations, bool parallel = true);

struct MexicanHatExperiment {
  traps::MexicanHatTrap trap{};
  traps::CondensateParams condensate{};
  double omega0 = 0.0;
  double delta_over_omega0 = 100.0;
  PulseProfile pulses{150.0, 300.0, 1.0, 0.5, 0.25, 0.25};
  cplx a_plus{0.0, 0.0}, a_minus{0.0, 0.0};
  int ell = 2;
  double beam_waist = 0.0;  // 0 = choose w so the coupling geometry factor is 1
  quad::QuadratureSpec qspec{};
  double tau_start = -0.5, tau_end = 2.5;
  int samples = 601;
  double rel_tol = 1e-11;
};

struct MexicanHatResult {
  Trajectory trajectory;
  integrals::IntegralSet integrals;
};

MexicanHatResult run_mexican_hat_experiment(const MexicanHatExperiment& p,
                                            const integrals::IntegralSet* precomputed = nullptr);

struct FiveLevelCheck {
  traps::HarmonicTrap trap{};
  StirapExperiment base{};       // reference STIRAP point (defines pulses, kappa)
  double delta_over_omega0 = 10.0;  // detuning for this check
  // Hold |Omega_0|^2 f g / Delta fixed while changing Delta (amplitudes scale
  // with sqrt(Delta / Delta_base)); this is the Delta -> infinity limit that
  // keeps the transfer itself unchanged.
  bool fix_two_photon_rabi = true;
};

struct FiveLevelCheckResult {
  Trajectory five;
  Trajectory three;
  double max_pop_deviation = 0.0;
  double max_excited = 0.0;
};

FiveLevelCheckResult run_five_level_check(const FiveLevelCheck& p);

// tau width of the F(t) swing between +level and -level (NaN if either
// crossing is absent) plus the crossing time; used to compare transfer
// timescales across traps.
struct TransferTiming {
  double tau_cross_down = 0.0;  // first crossing below +level
  double tau_cross_low = 0.0;   // first crossing below -level
  double width = 0.0;
  bool complete = false;
};
TransferTiming transfer_timing(const Trajectory& traj, double level = 0.5);

}  // namespace vortexsim::dyn
