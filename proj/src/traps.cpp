#include "vortexsim/traps.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "vortexsim/errors.hpp"

namespace vortexsim::traps {

using constants::hbar;

namespace {

double oscillator_length(double mass, double omega) {
  if (mass <= 0.0 || omega <= 0.0) {
    throw std::invalid_argument("oscillator length needs positive mass and frequency");
  }
  return std::sqrt(hbar / (mass * omega));
}

double factorial_sqrt(int l) { return std::exp(0.5 * std::lgamma(l + 1.0)); }

// Dimensionless hat profile in oscillator units, V / (hbar omega_perp) at z=0.
double hat_dimensionless(double sigma, double lambda, double u) {
  const double u2 = u * u;
  return -0.5 * sigma * u2 + 0.25 * lambda * u2 * u2;
}

// Radial normalization moment of the bare TF ansatz in oscillator units:
// (2 pi^{3/2} / ell!) * int u^{2 ell} (mu - V(u)) u du / eta_hat over the
// positive-density interval.
double tf_norm_raw(const MexicanHatTrap& trap, double mu, double eta, int ell) {
  const double lp = trap.l_perp();
  const double hw = hbar * trap.omega_perp;
  const double mu_hat = mu / hw;
  const double eta_hat = eta / (hw * lp * lp * lp);
  const auto [rm, rp] = tf_radii(trap, mu);
  const double um = rm / lp, up = rp / lp;
  quad::QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  spec.abs_tol = 1e-300;
  const auto res = quad::integrate_1d(
      [&](double u) {
        const double dens = mu_hat - hat_dimensionless(trap.sigma, trap.lambda, u);
        return std::pow(u, 2 * ell) * (dens > 0.0 ? dens : 0.0) * u;
      },
      um, up, spec);
  const double lfact = std::exp(std::lgamma(ell + 1.0));
  return 2.0 * std::pow(M_PI, 1.5) * res.value / (eta_hat * lfact);
}

}  // namespace

double HarmonicTrap::l_perp() const { return oscillator_length(mass, omega_perp); }
double HarmonicTrap::l_z() const { return oscillator_length(mass, omega_z); }

double MexicanHatTrap::m_coeff() const { return mass * omega_perp * omega_perp; }
double MexicanHatTrap::g_coeff() const {
  return mass * mass * omega_perp * omega_perp * omega_perp / hbar;
}
double MexicanHatTrap::l_perp() const { return oscillator_length(mass, omega_perp); }
double MexicanHatTrap::l_z() const { return oscillator_length(mass, omega_z); }

double MexicanHatTrap::hat_minimum() const {
  const double m = m_coeff(), g = g_coeff();
  return -sigma * sigma * m * m / (4.0 * lambda * g);
}

double potential_value(const HarmonicTrap& trap, double rho, double z) {
  if (rho < 0.0) throw std::invalid_argument("potential_value: rho must be non-negative");
  return 0.5 * trap.mass *
         (trap.omega_perp * trap.omega_perp * rho * rho + trap.omega_z * trap.omega_z * z * z);
}

double potential_value(const MexicanHatTrap& trap, double rho, double z) {
  if (rho < 0.0) throw std::invalid_argument("potential_value: rho must be non-negative");
  if (trap.sigma <= 0.0 || trap.lambda <= 0.0) {
    throw std::invalid_argument("MexicanHatTrap: sigma and lambda must be positive");
  }
  const double r2 = rho * rho;
  return -0.5 * trap.sigma * trap.m_coeff() * r2 + 0.25 * trap.lambda * trap.g_coeff() * r2 * r2 +
         0.5 * trap.mass * trap.omega_z * trap.omega_z * z * z;
}

CondensateParams condensate_from_atoms(const HarmonicTrap& trap, double n_atoms, double a_sc) {
  if (n_atoms < 0.0 || a_sc < 0.0) {
    throw std::invalid_argument("condensate: N and a_sc must be non-negative");
  }
  CondensateParams p;
  p.n_atoms = n_atoms;
  p.a_sc = a_sc;
  p.eta = 4.0 * M_PI * hbar * hbar * a_sc * n_atoms / trap.mass;
  p.kappa = kappa_from(p, trap);
  return p;
}

CondensateParams condensate_from_kappa(const HarmonicTrap& trap, double kappa, double a_sc) {
  if (kappa < 0.0) throw std::invalid_argument("condensate: kappa must be non-negative");
  const double lp = trap.l_perp(), lz = trap.l_z();
  const double n = kappa * trap.mass * std::pow(2.0 * M_PI, 1.5) * lp * lp * lz /
                   (M_PI * hbar * a_sc);
  return condensate_from_atoms(trap, n, a_sc);
}

CondensateParams condensate_for_mexican_hat(const MexicanHatTrap& trap, double n_atoms,
                                            double a_sc) {
  CondensateParams p;
  p.n_atoms = n_atoms;
  p.a_sc = a_sc;
  p.eta = 4.0 * M_PI * hbar * hbar * a_sc * n_atoms / trap.mass;
  // Nominal interaction rate on the trap length scales; the dynamics for this
  // trap consume the quadrature integrals, not kappa.
  const double lp = trap.l_perp(), lz = trap.l_z();
  p.kappa = p.eta / (4.0 * std::pow(2.0 * M_PI, 1.5) * hbar * lp * lp * lz);
  p.mu = solve_chemical_potential(trap, p.eta);
  p.mu_solved = true;
  return p;
}

double kappa_from(const CondensateParams& params, const HarmonicTrap& trap) {
  const double lp = trap.l_perp(), lz = trap.l_z();
  const double denom = std::pow(2.0 * M_PI, 1.5) * lp * lp * lz;
  const double kappa_eta = params.eta / (4.0 * hbar * denom);
  const double kappa_a = M_PI * hbar * params.a_sc * params.n_atoms / (trap.mass * denom);
  if (std::abs(kappa_eta - kappa_a) > 1e-12 * std::max(1.0, std::abs(kappa_eta))) {
    throw std::logic_error("kappa_from: eta-form and a-form disagree");
  }
  return kappa_eta;
}

std::pair<double, double> tf_radii(const MexicanHatTrap& trap, double mu) {
  const double m = trap.m_coeff(), g = trap.g_coeff();
  const double disc = trap.sigma * trap.sigma * m * m + 4.0 * trap.lambda * g * mu;
  if (disc < 0.0) {
    std::ostringstream os;
    os << "tf_radii: mu = " << mu << " J lies below the hat minimum " << trap.hat_minimum()
       << " J; no condensate";
    throw NoCondensateError(os.str());
  }
  const double root = std::sqrt(disc);
  const double rp_sq = (trap.sigma * m + root) / (trap.lambda * g);
  const double rm_sq = (trap.sigma * m - root) / (trap.lambda * g);
  return {rm_sq > 0.0 ? std::sqrt(rm_sq) : 0.0, std::sqrt(rp_sq)};
}

double solve_chemical_potential(const MexicanHatTrap& trap, double eta) {
  if (eta <= 0.0) throw std::invalid_argument("solve_chemical_potential: eta must be positive");
  const double hw = hbar * trap.omega_perp;
  double lo = trap.hat_minimum();
  double hi = lo + 1e4 * hw;
  auto norm_at = [&](double mu) { return tf_norm_raw(trap, mu, eta, 0); };
  // norm(mu) grows monotonically from 0 at the hat minimum.
  if (norm_at(hi) < 1.0) {
    std::ostringstream os;
    os << "solve_chemical_potential: no bracket; norm(" << hi << " J) = " << norm_at(hi)
       << " < 1. eta = " << eta << " J m^3 is too large for the bracket width of 1e4 hbar "
       << "omega_perp above the hat minimum.";
    throw ConfigError(os.str());
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double n = norm_at(mid);
    if (std::abs(n - 1.0) < 1e-10) return mid;
    (n < 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double WavefunctionAnsatz::radial(double rho, double z) const {
  if (rho < 0.0) throw std::invalid_argument("WavefunctionAnsatz: rho must be non-negative");
  const int al = std::abs(ell_);
  switch (kind_) {
    case AnsatzKind::harmonic_ground:
    case AnsatzKind::harmonic_vortex: {
      const double u = rho / lp_, v = z / lz_;
      const double gauss =
          std::exp(-0.5 * (u * u + v * v)) / (std::pow(M_PI, 0.75) * lp_ * std::sqrt(lz_));
      if (al == 0) return gauss;
      return std::pow(u, al) / factorial_sqrt(al) * gauss;
    }
    case AnsatzKind::tf_ground:
    case AnsatzKind::tf_vortex: {
      const double v0 = potential_value(
          MexicanHatTrap{sigma_, lambda_, mass_, omega_perp_, omega_z_}, rho, 0.0);
      const double dens = (mu_ - v0) / eta_;
      if (dens <= 0.0) return 0.0;
      const double pre = 1.0 / (lp_ * std::sqrt(lz_)) / factorial_sqrt(al);
      return norm_const_ * pre * std::pow(rho / lp_, al) *
             std::exp(-z * z / (2.0 * lz_ * lz_)) * std::sqrt(dens);
    }
  }
  return 0.0;
}

cplx WavefunctionAnsatz::value(double rho, double phi, double z) const {
  return radial(rho, z) * std::exp(imag_unit * static_cast<double>(ell_) * phi);
}

bool WavefunctionAnsatz::has_kinetic() const {
  return kind_ == AnsatzKind::harmonic_ground || kind_ == AnsatzKind::harmonic_vortex;
}

double WavefunctionAnsatz::grad_sq(double rho, double z) const {
  if (!has_kinetic()) {
    throw std::logic_error("grad_sq: kinetic energy is not defined for Thomas-Fermi kinds");
  }
  const int al = std::abs(ell_);
  const double r = radial(rho, z);
  // d/drho [rho^l e^{-rho^2/2lp^2}] = (l/rho - rho/lp^2) * radial; written with
  // rho^{l-1} so the axis is finite for every l.
  double dr;
  double ang = 0.0;
  if (al == 0) {
    dr = -rho / (lp_ * lp_) * r;
  } else {
    const double u = rho / lp_, v = z / lz_;
    const double gauss =
        std::exp(-0.5 * (u * u + v * v)) / (std::pow(M_PI, 0.75) * lp_ * std::sqrt(lz_));
    const double r_over_rho = std::pow(u, al - 1) / (factorial_sqrt(al) * lp_) * gauss;
    dr = al * r_over_rho - rho / (lp_ * lp_) * r;
    ang = al * r_over_rho;
  }
  const double dz = -z / (lz_ * lz_) * r;
  return dr * dr + ang * ang + dz * dz;
}

double WavefunctionAnsatz::potential(double rho, double z) const {
  switch (kind_) {
    case AnsatzKind::harmonic_ground:
    case AnsatzKind::harmonic_vortex:
      return potential_value(HarmonicTrap{mass_, omega_perp_, omega_z_}, rho, z);
    case AnsatzKind::tf_ground:
    case AnsatzKind::tf_vortex:
      return potential_value(MexicanHatTrap{sigma_, lambda_, mass_, omega_perp_, omega_z_}, rho,
                             z);
  }
  return 0.0;
}

double WavefunctionAnsatz::rho_max() const {
  if (has_kinetic()) return 12.0 * lp_;
  return r_plus_ + 8.0 * lp_;
}

std::vector<double> WavefunctionAnsatz::radial_breakpoints() const {
  if (has_kinetic()) return {};
  return {r_minus_, r_plus_};
}

WavefunctionAnsatz harmonic_wavefunction_ansatz(const HarmonicTrap& trap, int ell) {
  WavefunctionAnsatz a;
  a.kind_ = ell == 0 ? AnsatzKind::harmonic_ground : AnsatzKind::harmonic_vortex;
  a.ell_ = ell;
  a.lp_ = trap.l_perp();
  a.lz_ = trap.l_z();
  a.mass_ = trap.mass;
  a.omega_perp_ = trap.omega_perp;
  a.omega_z_ = trap.omega_z;
  return a;
}

WavefunctionAnsatz tf_wavefunction_ansatz(const MexicanHatTrap& trap,
                                          const CondensateParams& condensate, int ell) {
  if (!condensate.mu_solved) {
    throw std::logic_error("tf_wavefunction_ansatz: chemical potential has not been solved");
  }
  WavefunctionAnsatz a;
  a.kind_ = ell == 0 ? AnsatzKind::tf_ground : AnsatzKind::tf_vortex;
  a.ell_ = ell;
  a.lp_ = trap.l_perp();
  a.lz_ = trap.l_z();
  a.mass_ = trap.mass;
  a.omega_perp_ = trap.omega_perp;
  a.omega_z_ = trap.omega_z;
  a.sigma_ = trap.sigma;
  a.lambda_ = trap.lambda;
  a.mu_ = condensate.mu;
  a.eta_ = condensate.eta;
  const auto [rm, rp] = tf_radii(trap, condensate.mu);
  a.r_minus_ = rm;
  a.r_plus_ = rp;
  // tf_norm_raw is the oscillator-unit norm of the bare ansatz (the mu solve
  // targets 1 there); the SI norm differs by Lperp^3, and the stored constant
  // rescales to a unit SI mode.
  const double raw = tf_norm_raw(trap, condensate.mu, condensate.eta, std::abs(ell));
  a.norm_const_ = std::sqrt(a.lp_ * a.lp_ * a.lp_ / raw);
  return a;
}

cplx harmonic_wavefunction(const HarmonicTrap& trap, int ell, double rho, double phi, double z) {
  return harmonic_wavefunction_ansatz(trap, ell).value(rho, phi, z);
}

cplx tf_wavefunction(const MexicanHatTrap& trap, int ell, const CondensateParams& condensate,
                     double rho, double phi, double z) {
  return tf_wavefunction_ansatz(trap, condensate, ell).value(rho, phi, z);
}

}  // namespace vortexsim::traps
