#include <doctest.h>

#include <cmath>

#include "vortexsim/constants.hpp"
#include "vortexsim/errors.hpp"
#include "vortexsim/quadrature.hpp"
#include "vortexsim/traps.hpp"

using namespace vortexsim;
using namespace vortexsim::traps;
using constants::hbar;
using constants::mass_rb87;

namespace {

// Dimensionless stand-in: mass = hbar and unit frequencies make
// L = 1 m and hbar omega = hbar J, so formulas reduce to their
// oscillator-unit forms.
MexicanHatTrap unit_hat(double sigma = 2.0, double lambda = 0.005) {
  return {sigma, lambda, hbar, 1.0, 1.0};
}

double norm_3d(const WavefunctionAnsatz& psi, double rel_tol = 1e-9) {
  quad::QuadratureSpec spec;
  spec.rel_tol = rel_tol;
  spec.abs_tol = 0.0;
  const auto res = quad::integrate_2d(
      [&](double rho, double z) {
        const double r = psi.radial(rho, z);
        return 2.0 * M_PI * rho * r * r;
      },
      quad::Rect{0.0, psi.rho_max(), -psi.z_max(), psi.z_max()}, spec);
  return res.value;
}

}  // namespace

TEST_CASE("oscillator lengths satisfy the defining relation") {
  const HarmonicTrap trap{mass_rb87, 132.0, 372.888};
  CHECK(trap.l_perp() * trap.l_perp() * mass_rb87 * trap.omega_perp ==
        doctest::Approx(hbar).epsilon(1e-12));
  CHECK(trap.l_z() * trap.l_z() * mass_rb87 * trap.omega_z ==
        doctest::Approx(hbar).epsilon(1e-12));
  CHECK(trap.pancake());
  // Paper-scale cross-check: omega_perp = 132 rad/s puts Lperp at 2.35 um.
  CHECK(trap.l_perp() == doctest::Approx(2.35e-6).epsilon(2e-3));
  CHECK(trap.l_z() == doctest::Approx(1.4e-6).epsilon(2e-3));
}

TEST_CASE("harmonic potential at the transverse length") {
  const HarmonicTrap trap{mass_rb87, 132.0, 372.888};
  CHECK(potential_value(trap, trap.l_perp(), 0.0) ==
        doctest::Approx(0.5 * hbar * trap.omega_perp).epsilon(1e-12));
}

TEST_CASE("mexican hat potential shape") {
  const MexicanHatTrap trap = unit_hat();
  CHECK(potential_value(trap, 0.0, 0.0) == 0.0);
  // minimum at rho^2 = sigma M / (lambda g), value -sigma^2 M^2 / (4 lambda g)
  const double rho_min = std::sqrt(trap.sigma * trap.m_coeff() / (trap.lambda * trap.g_coeff()));
  CHECK(potential_value(trap, rho_min, 0.0) == doctest::Approx(trap.hat_minimum()).epsilon(1e-12));
  // it is indeed a minimum
  CHECK(potential_value(trap, 0.99 * rho_min, 0.0) > trap.hat_minimum());
  CHECK(potential_value(trap, 1.01 * rho_min, 0.0) > trap.hat_minimum());
  CHECK(rho_min * rho_min == doctest::Approx(400.0).epsilon(1e-12));
  CHECK(trap.hat_minimum() == doctest::Approx(-200.0 * hbar).epsilon(1e-12));
}

TEST_CASE("thomas-fermi radii") {
  const MexicanHatTrap trap = unit_hat();
  SUBCASE("mu = 0 reaches the axis") {
    const auto [rm, rp] = tf_radii(trap, 0.0);
    CHECK(rm == 0.0);
    CHECK(rp * rp == doctest::Approx(800.0).epsilon(1e-12));
  }
  SUBCASE("mu = -100 hbar omega gives the ring") {
    const auto [rm, rp] = tf_radii(trap, -100.0 * hbar);
    CHECK(rm * rm == doctest::Approx((2.0 - std::sqrt(2.0)) / 0.005).epsilon(1e-12));
    CHECK(rp * rp == doctest::Approx((2.0 + std::sqrt(2.0)) / 0.005).epsilon(1e-12));
  }
  SUBCASE("mu at the hat minimum collapses the ring") {
    const auto [rm, rp] = tf_radii(trap, trap.hat_minimum());
    CHECK(rm == doctest::Approx(rp).epsilon(1e-12));
  }
  SUBCASE("mu below the minimum has no condensate") {
    CHECK_THROWS_AS(tf_radii(trap, 1.0001 * trap.hat_minimum()), NoCondensateError);
  }
  SUBCASE("positive mu clamps the inner radius to zero") {
    const auto [rm, rp] = tf_radii(trap, 50.0 * hbar);
    CHECK(rm == 0.0);
    CHECK(rp > 0.0);
  }
}

TEST_CASE("harmonic wavefunctions are unit normalized") {
  const HarmonicTrap trap{mass_rb87, 132.0, 372.888};
  CHECK(norm_3d(harmonic_wavefunction_ansatz(trap, 0)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(norm_3d(harmonic_wavefunction_ansatz(trap, 2)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(norm_3d(harmonic_wavefunction_ansatz(trap, -3)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("vortex cores are empty in both traps") {
  const HarmonicTrap trap{mass_rb87, 132.0, 372.888};
  CHECK(std::abs(harmonic_wavefunction(trap, 2, 0.0, 0.7, 0.0)) == 0.0);

  const MexicanHatTrap hat = unit_hat();
  const CondensateParams cond = [&] {
    CondensateParams p;
    p.eta = 1e-32;  // eta_hat ~ 95 in these units
    p.a_sc = 1e-9;
    p.n_atoms = 1;
    p.mu = solve_chemical_potential(hat, p.eta);
    p.mu_solved = true;
    return p;
  }();
  CHECK(std::abs(tf_wavefunction(hat, 2, cond, 0.0, 0.1, 0.0)) == 0.0);
}

TEST_CASE("chemical potential solve normalizes the TF ground profile") {
  const MexicanHatTrap hat = unit_hat();
  CondensateParams cond;
  cond.eta = 2e-32;
  cond.mu = solve_chemical_potential(hat, cond.eta);
  cond.mu_solved = true;
  CHECK(cond.mu > hat.hat_minimum());

  const auto psi0 = tf_wavefunction_ansatz(hat, cond, 0);
  // Independent 2-D quadrature over the full domain.
  CHECK(norm_3d(psi0) == doctest::Approx(1.0).epsilon(1e-8));
  // The bare prefactor already normalizes the ell = 0 profile after the solve.
  CHECK(psi0.normalization_constant() == doctest::Approx(1.0).epsilon(1e-6));

  const auto psi2 = tf_wavefunction_ansatz(hat, cond, 2);
  CHECK(norm_3d(psi2) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("chemical potential is monotone in eta and unbounded") {
  const MexicanHatTrap hat = unit_hat();
  double last = -1e300;
  for (double eta : {5e-33, 1e-32, 2e-32, 4e-32, 8e-32}) {
    const double mu = solve_chemical_potential(hat, eta);
    CHECK(mu > last);
    last = mu;
  }
  // and keeps growing over a further increase
  double prev = solve_chemical_potential(hat, 1e-31);
  for (double eta : {1e-30, 1e-29}) {
    const double mu = solve_chemical_potential(hat, eta);
    CHECK(mu > prev);
    prev = mu;
  }
}

TEST_CASE("chemical potential bracket failure is a configuration error") {
  CHECK_THROWS_AS(solve_chemical_potential(unit_hat(), 1e-24), ConfigError);
}

TEST_CASE("TF density is zero outside the radii and continuous at them") {
  const MexicanHatTrap hat = unit_hat();
  CondensateParams cond;
  cond.eta = 2e-32;
  cond.mu = solve_chemical_potential(hat, cond.eta);
  cond.mu_solved = true;
  const auto [rm, rp] = tf_radii(hat, cond.mu);
  const auto psi = tf_wavefunction_ansatz(hat, cond, 0);
  CHECK(psi.radial(rm * 0.9, 0.0) == 0.0);
  CHECK(psi.radial(rp * 1.1, 0.0) == 0.0);
  CHECK(psi.radial(0.5 * (rm + rp), 0.0) > 0.0);
  // approaches zero from the inside at both edges
  for (const double edge : {rm, rp}) {
    double prev = psi.radial(0.5 * (rm + rp), 0.0);
    for (double eps : {1e-2, 1e-4, 1e-6}) {
      const double towards = edge + (edge == rm ? eps : -eps) * (rp - rm);
      const double v = psi.radial(towards, 0.0);
      CHECK(v < prev);
      prev = v;
    }
    CHECK(prev < 0.1 * psi.radial(0.5 * (rm + rp), 0.0));
  }
}

TEST_CASE("wavefunctions are single valued in phi") {
  const HarmonicTrap trap{mass_rb87, 132.0, 372.888};
  const auto psi = harmonic_wavefunction_ansatz(trap, 3);
  const double rho = 1.5 * trap.l_perp(), z = 0.3 * trap.l_z();
  for (double phi : {0.0, 0.7, 2.1}) {
    const cplx a = psi.value(rho, phi, z);
    const cplx b = psi.value(rho, phi + 2.0 * M_PI, z);
    CHECK(std::abs(a - b) < 1e-12 * std::abs(a));
  }

  const MexicanHatTrap hat = unit_hat();
  CondensateParams cond;
  cond.eta = 2e-32;
  cond.mu = solve_chemical_potential(hat, cond.eta);
  cond.mu_solved = true;
  const auto tf = tf_wavefunction_ansatz(hat, cond, 2);
  const double ring = 0.5 * (tf_radii(hat, cond.mu).first + tf_radii(hat, cond.mu).second);
  for (double phi : {0.4, 1.9}) {
    const cplx a = tf.value(ring, phi, 0.1);
    const cplx b = tf.value(ring, phi + 2.0 * M_PI, 0.1);
    CHECK(std::abs(a - b) < 1e-12 * std::abs(a));
  }
}

TEST_CASE("kappa forms agree and recover the reference atom number") {
  // Lengths pinned to the reference point: Lperp = 2.35 um, Lz = 1.4 um.
  const double lp = 2.35e-6, lz = 1.4e-6;
  const HarmonicTrap trap{mass_rb87, hbar / (mass_rb87 * lp * lp),
                          hbar / (mass_rb87 * lz * lz)};
  const double kappa_target = 1.7e3;
  const CondensateParams cond = condensate_from_kappa(trap, kappa_target, 5e-9);
  CHECK(cond.n_atoms > 1e3);
  CHECK(cond.n_atoms < 1e6);
  // round trip: building from that N recovers kappa
  const CondensateParams again = condensate_from_atoms(trap, cond.n_atoms, 5e-9);
  CHECK(kappa_from(again, trap) == doctest::Approx(kappa_target).epsilon(1e-9));
}

TEST_CASE("kappa vanishes with the atom number") {
  const HarmonicTrap trap{mass_rb87, 132.0, 372.888};
  CHECK(condensate_from_atoms(trap, 0.0, 5e-9).kappa == 0.0);
}
