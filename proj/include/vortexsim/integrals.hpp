#pragma once

#include <cstdint>
#include <string>

#include "vortexsim/quadrature.hpp"
#include "vortexsim/traps.hpp"

namespace vortexsim::integrals {

// Spatial overlap integrals feeding the population rate equations.
//
// Kinetic/potential and self-interaction entries are rates (rad/s). The
// light-coupling geometry entries are stored as plain radial moments with the
// beam-waist powers stripped: i2l_gg = <g| r^{2l} |g> in m^{2l} and
// il_* = <g| e^{∓il phi} r^l |v±> in m^l. The rate equations consume the
// dimensionless combinations stark_factor() and coupling_factor(), which put
// the (sqrt(2)/w)^l powers from the drive profile back in.
struct IntegralSet {
  double t_g = 0, v_g = 0;      // ground kinetic / potential [rad/s]
  double t_pm = 0, v_pm = 0;    // vortex kinetic / potential [rad/s]
  double i_gg = 0, i_gp = 0, i_gm = 0;  // self-interaction [rad/s]
  double i_pp = 0, i_mm = 0, i_pm = 0;
  double i2l_gg = 0;                          // [m^{2l}]
  double il_gp = 0, il_pg = 0, il_gm = 0, il_mg = 0;  // [m^l]
  double beam_waist = 0;  // w [m]
  int ell = 2;

  double stark_factor() const;     // (sqrt(2)/w)^{2l} * i2l_gg
  double coupling_factor() const;  // (sqrt(2)/w)^l * il_gp

  std::string to_json() const;
  static IntegralSet from_json(const std::string& text);
};

// Closed forms for the harmonic trap at l = 2.
IntegralSet harmonic_analytic_integrals(const traps::HarmonicTrap& trap, double kappa, double w);

// Quadrature evaluation for any trap/l. Thomas-Fermi kinds carry no kinetic
// energy, so t_g and t_pm are zero for them. With include_beam_envelope the
// light-coupling moments keep the e^{-r^2/w^2} Gaussian factor instead of
// dropping it.
IntegralSet numeric_integrals(const traps::WavefunctionAnsatz& psi_g,
                              const traps::WavefunctionAnsatz& psi_vp,
                              const traps::WavefunctionAnsatz& psi_vm, double eta, double w,
                              int ell, const quad::QuadratureSpec& spec,
                              bool include_beam_envelope = false);

// Beam waist for which coupling_factor() == 1, so the drive coupling in the
// rate equations is |Omega_0|^2 f g / Delta with unit geometry. Closed form
// for the harmonic trap: w = sqrt(2) (l!)^{1/(2l)} Lperp.
double default_beam_waist(const traps::HarmonicTrap& trap, int ell);
double default_beam_waist(const traps::WavefunctionAnsatz& psi_g,
                          const traps::WavefunctionAnsatz& psi_vp, int ell,
                          const quad::QuadratureSpec& spec);

// Cache key over every input that changes the result.
std::uint64_t cache_key(const std::string& trap_descriptor, double eta, int ell, double w,
                        const quad::QuadratureSpec& spec, bool include_beam_envelope);

}  // namespace vortexsim::integrals
