#pragma once

#include <map>

#include "vortexsim/constants.hpp"

namespace vortexsim::oam {

// Associated Laguerre polynomial L_p^l(x) as the explicit finite sum,
// factorials through lgamma so large l stays finite.
double assoc_laguerre(int p, int l, double x);

// Laguerre-Gaussian mode LG_p^ell at the beam waist (z = 0).
struct LgModeParams {
  int ell = 0;    // winding number
  int p = 0;      // radial index, >= 0
  double w0 = 1;  // beam waist, > 0
};

cplx lg_mode_amplitude(const LgModeParams& params, double rho, double phi);

// Finite superposition of p = 0 LG modes, keyed by winding number.
class OamSuperposition {
 public:
  explicit OamSuperposition(std::map<int, cplx> terms);
  static OamSuperposition single(int ell, cplx amplitude = cplx{1.0, 0.0});

  const std::map<int, cplx>& terms() const { return terms_; }
  cplx amplitude(int ell) const;

  double norm_sq() const;
  double norm() const;
  OamSuperposition normalized() const;  // throws on zero state
  OamSuperposition scaled(cplx s) const;

 private:
  std::map<int, cplx> terms_;
};

// Handedness reversal: every term ell -> -ell. Involution, norm preserving.
OamSuperposition dove_prism(const OamSuperposition& state);

// Lossless two-port splitter, R = [[r, t'], [t, r']] with r' = r*, t' = -t*.
class BeamSplitter {
 public:
  // From the port-1 amplitudes; the conjugate relations fix the rest.
  static BeamSplitter general(cplx r, cplx t);
  // Symmetric splitter: r real >= 0, t purely imaginary (t = i t_mag).
  static BeamSplitter symmetric(double r_mag, double t_mag);
  static BeamSplitter fifty_fifty();

  cplx r() const { return r_; }
  cplx t() const { return t_; }
  cplx r_prime() const { return rp_; }
  cplx t_prime() const { return tp_; }

 private:
  BeamSplitter(cplx r, cplx t, cplx rp, cplx tp);
  cplx r_, t_, rp_, tp_;
};

struct TwoPortState {
  OamSuperposition port1;
  OamSuperposition port2;
  double total_norm_sq() const { return port1.norm_sq() + port2.norm_sq(); }
};

TwoPortState beam_splitter_apply(const BeamSplitter& bs, const TwoPortState& input);

// Mach-Zehnder with a Dove prism in the arm fed by port 1 of the first
// splitter and a phase shifter in the other arm; the second splitter is a
// fixed symmetric 50/50. Input is u0 |input_ell> on port 1.
// With bs1 = symmetric(a_minus, a_plus) and phase = pi, port 1 normalizes to
// a_plus |ell> + a_minus |-ell>.
TwoPortState mach_zehnder(const BeamSplitter& bs1, double phase, int input_ell, cplx u0);

}  // namespace vortexsim::oam
