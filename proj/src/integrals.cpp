#include "vortexsim/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "vortexsim/constants.hpp"
#include "vortexsim/util.hpp"

namespace vortexsim::integrals {

using constants::hbar;
using traps::WavefunctionAnsatz;

double IntegralSet::stark_factor() const {
  return std::pow(std::sqrt(2.0) / beam_waist, 2 * ell) * i2l_gg;
}

double IntegralSet::coupling_factor() const {
  return std::pow(std::sqrt(2.0) / beam_waist, ell) * il_gp;
}

std::string IntegralSet::to_json() const {
  nlohmann::json j;
  j["t_g"] = t_g;
  j["v_g"] = v_g;
  j["t_pm"] = t_pm;
  j["v_pm"] = v_pm;
  j["i_gg"] = i_gg;
  j["i_gp"] = i_gp;
  j["i_gm"] = i_gm;
  j["i_pp"] = i_pp;
  j["i_mm"] = i_mm;
  j["i_pm"] = i_pm;
  j["i2l_gg"] = i2l_gg;
  j["il_gp"] = il_gp;
  j["il_pg"] = il_pg;
  j["il_gm"] = il_gm;
  j["il_mg"] = il_mg;
  j["beam_waist"] = beam_waist;
  j["ell"] = ell;
  return j.dump(2);
}

IntegralSet IntegralSet::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  IntegralSet s;
  s.t_g = j.at("t_g");
  s.v_g = j.at("v_g");
  s.t_pm = j.at("t_pm");
  s.v_pm = j.at("v_pm");
  s.i_gg = j.at("i_gg");
  s.i_gp = j.at("i_gp");
  s.i_gm = j.at("i_gm");
  s.i_pp = j.at("i_pp");
  s.i_mm = j.at("i_mm");
  s.i_pm = j.at("i_pm");
  s.i2l_gg = j.at("i2l_gg");
  s.il_gp = j.at("il_gp");
  s.il_pg = j.at("il_pg");
  s.il_gm = j.at("il_gm");
  s.il_mg = j.at("il_mg");
  s.beam_waist = j.at("beam_waist");
  s.ell = j.at("ell");
  return s;
}

IntegralSet harmonic_analytic_integrals(const traps::HarmonicTrap& trap, double kappa, double w) {
  if (w <= 0.0) throw std::invalid_argument("harmonic_analytic_integrals: w must be positive");
  IntegralSet s;
  s.ell = 2;
  s.beam_waist = w;
  const double lp = trap.l_perp();
  const double lp2 = lp * lp;
  s.t_g = 0.25 * trap.omega_z + 0.5 * trap.omega_perp;
  s.v_g = s.t_g;
  s.t_pm = 0.25 * trap.omega_z + 1.5 * trap.omega_perp;
  s.v_pm = s.t_pm;
  s.i_gg = 4.0 * kappa;
  s.i_gp = kappa;
  s.i_gm = kappa;
  s.i_pp = 1.5 * kappa;
  s.i_mm = 1.5 * kappa;
  s.i_pm = 1.5 * kappa;
  // Radial moments with the beam-waist powers stripped; stark_factor() and
  // coupling_factor() restore (sqrt(2)/w)^{2l} and (sqrt(2)/w)^l.
  s.i2l_gg = 2.0 * lp2 * lp2;
  s.il_gp = std::sqrt(2.0) * lp2;
  s.il_pg = s.il_gp;
  s.il_gm = s.il_gp;
  s.il_mg = s.il_gp;
  return s;
}

namespace {

double integrate_mode_pair(const WavefunctionAnsatz& a, const WavefunctionAnsatz& b,
                           const std::function<double(double, double)>& weight,
                           const quad::QuadratureSpec& spec) {
  const double rho_max = std::max(a.rho_max(), b.rho_max());
  const double z_max = std::max(a.z_max(), b.z_max());

  // Panel edges at the profile kinks (TF radii); a narrow ring would
  // otherwise slip between the nodes of the first coarse rule.
  std::vector<double> edges{0.0, rho_max};
  for (const WavefunctionAnsatz* psi : {&a, &b}) {
    for (double r : psi->radial_breakpoints()) {
      if (r > 0.0 && r < rho_max) edges.push_back(r);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  // The moments span many decades of SI magnitude (m^4 entries sit near
  // 1e-18), so an absolute floor would mask them; only rel_tol applies.
  quad::QuadratureSpec relative = spec;
  relative.abs_tol = 0.0;
  auto integrand = [&](double rho, double z) {
    return weight(rho, z) * 2.0 * M_PI * rho;  // azimuth reduces to 2 pi
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    total += quad::integrate_2d(integrand, quad::Rect{edges[i], edges[i + 1], -z_max, z_max},
                                relative)
                 .value;
  }
  return total;
}

}  // namespace

IntegralSet numeric_integrals(const WavefunctionAnsatz& psi_g, const WavefunctionAnsatz& psi_vp,
                              const WavefunctionAnsatz& psi_vm, double eta, double w, int ell,
                              const quad::QuadratureSpec& spec, bool include_beam_envelope) {
  if (ell != std::abs(psi_vp.ell()) || ell != std::abs(psi_vm.ell())) {
    throw std::invalid_argument("numeric_integrals: ell does not match the vortex ansatz");
  }
  if (w <= 0.0) throw std::invalid_argument("numeric_integrals: w must be positive");

  IntegralSet s;
  s.ell = ell;
  s.beam_waist = w;

  auto dens = [](const WavefunctionAnsatz& psi) {
    return [&psi](double rho, double z) {
      const double r = psi.radial(rho, z);
      return r * r;
    };
  };

  // Kinetic (1/hbar) <T> = (hbar / 2m) int |grad psi|^2; zero for TF kinds.
  if (psi_g.has_kinetic()) {
    const double pre = hbar / (2.0 * psi_g.mass());
    s.t_g = pre * integrate_mode_pair(
                      psi_g, psi_g, [&](double rho, double z) { return psi_g.grad_sq(rho, z); },
                      spec);
    s.t_pm = pre * integrate_mode_pair(
                       psi_vp, psi_vp,
                       [&](double rho, double z) { return psi_vp.grad_sq(rho, z); }, spec);
  }

  s.v_g = (1.0 / hbar) *
          integrate_mode_pair(
              psi_g, psi_g,
              [&](double rho, double z) {
                const double r = psi_g.radial(rho, z);
                return psi_g.potential(rho, z) * r * r;
              },
              spec);
  s.v_pm = (1.0 / hbar) *
           integrate_mode_pair(
               psi_vp, psi_vp,
               [&](double rho, double z) {
                 const double r = psi_vp.radial(rho, z);
                 return psi_vp.potential(rho, z) * r * r;
               },
               spec);

  // Self-interaction entries scale linearly in eta.
  const double eta_over_hbar = eta / hbar;
  auto pair_overlap = [&](const WavefunctionAnsatz& a, const WavefunctionAnsatz& b) {
    auto da = dens(a), db = dens(b);
    return integrate_mode_pair(
        a, b, [&](double rho, double z) { return da(rho, z) * db(rho, z); }, spec);
  };
  s.i_gg = eta_over_hbar * pair_overlap(psi_g, psi_g);
  s.i_gp = eta_over_hbar * pair_overlap(psi_g, psi_vp);
  s.i_gm = eta_over_hbar * pair_overlap(psi_g, psi_vm);
  s.i_pp = eta_over_hbar * pair_overlap(psi_vp, psi_vp);
  s.i_mm = eta_over_hbar * pair_overlap(psi_vm, psi_vm);
  s.i_pm = eta_over_hbar * pair_overlap(psi_vp, psi_vm);

  // Light-coupling moments. The azimuthal phases cancel against the drive's
  // e^{±il phi}, leaving real radial integrands. Stored with the (sqrt(2)/w)^l
  // powers stripped (restored by stark_factor / coupling_factor), so these are
  // pure r^l moments; the optional envelope keeps the Gaussian beam profile.
  auto envelope = [&](double rho, int power) {
    return include_beam_envelope ? std::exp(-static_cast<double>(power) * rho * rho / (w * w))
                                 : 1.0;
  };
  s.i2l_gg = integrate_mode_pair(
      psi_g, psi_g,
      [&](double rho, double z) {
        const double r = psi_g.radial(rho, z);
        return r * r * std::pow(rho, 2 * ell) * envelope(rho, 2);
      },
      spec);
  s.il_gp = integrate_mode_pair(
      psi_g, psi_vp,
      [&](double rho, double z) {
        return psi_g.radial(rho, z) * psi_vp.radial(rho, z) * std::pow(rho, ell) *
               envelope(rho, 1);
      },
      spec);
  s.il_gm = integrate_mode_pair(
      psi_g, psi_vm,
      [&](double rho, double z) {
        return psi_g.radial(rho, z) * psi_vm.radial(rho, z) * std::pow(rho, ell) *
               envelope(rho, 1);
      },
      spec);
  // Real radial profiles make the reversed-order moments identical.
  s.il_pg = s.il_gp;
  s.il_mg = s.il_gm;
  return s;
}

double default_beam_waist(const traps::HarmonicTrap& trap, int ell) {
  if (ell <= 0) throw std::invalid_argument("default_beam_waist: ell must be positive");
  const double lfact_root = std::exp(std::lgamma(ell + 1.0) / (2.0 * ell));
  return std::sqrt(2.0) * lfact_root * trap.l_perp();
}

double default_beam_waist(const traps::WavefunctionAnsatz& psi_g,
                          const traps::WavefunctionAnsatz& psi_vp, int ell,
                          const quad::QuadratureSpec& spec) {
  if (ell <= 0) throw std::invalid_argument("default_beam_waist: ell must be positive");
  const double moment = integrate_mode_pair(
      psi_g, psi_vp,
      [&](double rho, double z) {
        return psi_g.radial(rho, z) * psi_vp.radial(rho, z) * std::pow(rho, ell);
      },
      spec);
  return std::sqrt(2.0) * std::pow(moment, 1.0 / ell);
}

std::uint64_t cache_key(const std::string& trap_descriptor, double eta, int ell, double w,
                        const quad::QuadratureSpec& spec, bool include_beam_envelope) {
  std::ostringstream os;
  os << trap_descriptor << '|' << util::format_double(eta) << '|' << ell << '|'
     << util::format_double(w) << '|' << static_cast<int>(spec.scheme) << '|'
     << util::format_double(spec.abs_tol) << '|' << util::format_double(spec.rel_tol) << '|'
     << spec.max_evals << '|' << include_beam_envelope;
  return util::fnv1a64(os.str());
}

}  // namespace vortexsim::integrals
