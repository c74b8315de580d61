#pragma once

#include <utility>
#include <vector>

#include "vortexsim/constants.hpp"
#include "vortexsim/quadrature.hpp"

namespace vortexsim::traps {

// Pancake harmonic trap; lengths derive from L = sqrt(hbar / (m omega)).
struct HarmonicTrap {
  double mass;        // kg
  double omega_perp;  // rad/s
  double omega_z;     // rad/s

  double l_perp() const;
  double l_z() const;
  bool pancake() const { return omega_perp < omega_z; }
};

// Quartic-minus-quadratic radial potential, harmonic along z.
// V(rho, z) = -sigma M rho^2 / 2 + lambda g rho^4 / 4 + m omega_z^2 z^2 / 2
// with M = m omega_perp^2 and g = m^2 omega_perp^3 / hbar (one power of
// hbar keeps the quartic term an energy; tf_radii inverts this V).
struct MexicanHatTrap {
  double sigma;       // dimensionless, > 0
  double lambda;      // dimensionless, > 0
  double mass;        // kg
  double omega_perp;  // rad/s
  double omega_z;     // rad/s

  double m_coeff() const;   // M = m omega_perp^2        [J/m^2]
  double g_coeff() const;   // g = m^2 omega_perp^3/hbar [J/m^4]
  double l_perp() const;
  double l_z() const;
  double hat_minimum() const;  // -sigma^2 M^2 / (4 lambda g)  [J]
};

double potential_value(const HarmonicTrap& trap, double rho, double z);
double potential_value(const MexicanHatTrap& trap, double rho, double z);

struct CondensateParams {
  double n_atoms = 0.0;
  double a_sc = 0.0;   // s-wave scattering length [m]
  double eta = 0.0;    // 4 pi hbar^2 a N / m      [J m^3]
  double kappa = 0.0;  // [rad/s]
  double mu = 0.0;     // chemical potential [J]; meaningful once solved
  bool mu_solved = false;
};

CondensateParams condensate_from_atoms(const HarmonicTrap& trap, double n_atoms, double a_sc);
// Chooses N so the interaction rate comes out at the requested kappa.
CondensateParams condensate_from_kappa(const HarmonicTrap& trap, double kappa, double a_sc);
// Mexican-hat condensate: solves the chemical potential on construction.
CondensateParams condensate_for_mexican_hat(const MexicanHatTrap& trap, double n_atoms,
                                            double a_sc);

// kappa = eta / (4 (2 pi)^{3/2} hbar Lperp^2 Lz), cross-checked against the
// scattering-length form; the two must agree to 1e-12 relative.
double kappa_from(const CondensateParams& params, const HarmonicTrap& trap);

// Thomas-Fermi inner/outer radii where the density reaches zero. For mu >= 0
// the density extends to the axis and the inner radius is reported as 0.
std::pair<double, double> tf_radii(const MexicanHatTrap& trap, double mu);

// mu such that the ell = 0 Thomas-Fermi profile is unit-normalized, found by
// bracketed bisection on (hat minimum, hat minimum + 1e4 hbar omega_perp).
double solve_chemical_potential(const MexicanHatTrap& trap, double eta);

enum class AnsatzKind { harmonic_ground, harmonic_vortex, tf_ground, tf_vortex };

// Unit-normalized spatial mode psi(rho, phi, z) = radial(rho, z) e^{i ell phi}.
// Immutable after construction; evaluation is pure and reentrant.
class WavefunctionAnsatz {
 public:
  AnsatzKind kind() const { return kind_; }
  int ell() const { return ell_; }

  double radial(double rho, double z) const;
  cplx value(double rho, double phi, double z) const;
  // |grad psi|^2 at (rho, z); only available when has_kinetic().
  double grad_sq(double rho, double z) const;
  bool has_kinetic() const;

  double potential(double rho, double z) const;  // trap potential [J]

  double l_perp() const { return lp_; }
  double l_z() const { return lz_; }
  double mass() const { return mass_; }
  // Truncation radii for quadrature over this mode.
  double rho_max() const;
  double z_max() const { return 10.0 * lz_; }
  // Radii where the radial profile has derivative kinks (TF edges); quadrature
  // panels split here so thin rings are never missed.
  std::vector<double> radial_breakpoints() const;

  // Rescale factor applied on top of the bare ansatz so the norm is 1
  // (exactly 1.0 for the harmonic kinds).
  double normalization_constant() const { return norm_const_; }

  friend WavefunctionAnsatz harmonic_wavefunction_ansatz(const HarmonicTrap& trap, int ell);
  friend WavefunctionAnsatz tf_wavefunction_ansatz(const MexicanHatTrap& trap,
                                                   const CondensateParams& condensate, int ell);

 private:
  WavefunctionAnsatz() = default;

  AnsatzKind kind_{};
  int ell_ = 0;
  double lp_ = 0, lz_ = 0;
  double mass_ = 0, omega_perp_ = 0, omega_z_ = 0;
  // TF-only state
  double sigma_ = 0, lambda_ = 0;
  double mu_ = 0, eta_ = 0;
  double r_minus_ = 0, r_plus_ = 0;
  double norm_const_ = 1.0;
};

WavefunctionAnsatz harmonic_wavefunction_ansatz(const HarmonicTrap& trap, int ell);
WavefunctionAnsatz tf_wavefunction_ansatz(const MexicanHatTrap& trap,
                                          const CondensateParams& condensate, int ell);

// Pointwise evaluations.
cplx harmonic_wavefunction(const HarmonicTrap& trap, int ell, double rho, double phi, double z);
cplx tf_wavefunction(const MexicanHatTrap& trap, int ell, const CondensateParams& condensate,
                     double rho, double phi, double z);

}  // namespace vortexsim::traps
