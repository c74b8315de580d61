#include "vortexsim/oam.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace vortexsim::oam {

namespace {
constexpr double kUnitarityTol = 1e-12;

double lgamma_int(int n) { return std::lgamma(static_cast<double>(n)); }
}  // namespace

double assoc_laguerre(int p, int l, double x) {
  if (p < 0 || l < 0) {
    throw std::invalid_argument("assoc_laguerre: p and l must be non-negative");
  }
  // sum_{m=0}^p (-1)^m (l+p)! / ((p-m)! (l+m)! m!) x^m
  double sum = 0.0;
  double x_pow = 1.0;
  double sign = 1.0;
  for (int m = 0; m <= p; ++m) {
    const double log_coeff = lgamma_int(l + p + 1) - lgamma_int(p - m + 1) -
                             lgamma_int(l + m + 1) - lgamma_int(m + 1);
    sum += sign * std::exp(log_coeff) * x_pow;
    x_pow *= x;
    sign = -sign;
  }
  return sum;
}

cplx lg_mode_amplitude(const LgModeParams& params, double rho, double phi) {
  if (params.w0 <= 0.0) throw std::invalid_argument("lg_mode_amplitude: w0 must be positive");
  if (params.p < 0) throw std::invalid_argument("lg_mode_amplitude: p must be non-negative");
  if (rho < 0.0) throw std::invalid_argument("lg_mode_amplitude: rho must be non-negative");

  const int al = std::abs(params.ell);
  const double w0 = params.w0;
  // sqrt(2 p! / (pi (|l|+p)!)) via lgamma
  const double log_norm =
      0.5 * (std::log(2.0 / M_PI) + lgamma_int(params.p + 1) - lgamma_int(al + params.p + 1));
  const double u = std::sqrt(2.0) * rho / w0;
  // rho^|l| with l = 0 at the axis resolves to 1
  const double radial = std::exp(log_norm) / w0 * std::pow(u, al) *
                        assoc_laguerre(params.p, al, 2.0 * rho * rho / (w0 * w0)) *
                        std::exp(-rho * rho / (w0 * w0));
  return radial * std::exp(imag_unit * static_cast<double>(params.ell) * phi);
}

OamSuperposition::OamSuperposition(std::map<int, cplx> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) {
    throw std::invalid_argument("OamSuperposition: empty term map is forbidden");
  }
}

OamSuperposition OamSuperposition::single(int ell, cplx amplitude) {
  return OamSuperposition({{ell, amplitude}});
}

cplx OamSuperposition::amplitude(int ell) const {
  const auto it = terms_.find(ell);
  return it == terms_.end() ? cplx{0.0, 0.0} : it->second;
}

double OamSuperposition::norm_sq() const {
  double s = 0.0;
  for (const auto& [ell, c] : terms_) s += std::norm(c);
  return s;
}

double OamSuperposition::norm() const { return std::sqrt(norm_sq()); }

OamSuperposition OamSuperposition::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::invalid_argument("OamSuperposition: cannot normalize a zero state");
  return scaled(1.0 / n);
}

OamSuperposition OamSuperposition::scaled(cplx s) const {
  std::map<int, cplx> out = terms_;
  for (auto& [ell, c] : out) c *= s;
  return OamSuperposition(std::move(out));
}

OamSuperposition dove_prism(const OamSuperposition& state) {
  std::map<int, cplx> out;
  for (const auto& [ell, c] : state.terms()) out[-ell] = c;
  return OamSuperposition(std::move(out));
}

BeamSplitter::BeamSplitter(cplx r, cplx t, cplx rp, cplx tp) : r_(r), t_(t), rp_(rp), tp_(tp) {
  const double unit = std::norm(r_) + std::norm(t_);
  if (std::abs(unit - 1.0) > kUnitarityTol) {
    throw std::invalid_argument("BeamSplitter: |r|^2 + |t|^2 must equal 1");
  }
  if (std::abs(rp_ - std::conj(r_)) > kUnitarityTol ||
      std::abs(tp_ + std::conj(t_)) > kUnitarityTol) {
    throw std::invalid_argument("BeamSplitter: r' = r*, t' = -t* violated");
  }
}

BeamSplitter BeamSplitter::general(cplx r, cplx t) {
  return BeamSplitter(r, t, std::conj(r), -std::conj(t));
}

BeamSplitter BeamSplitter::symmetric(double r_mag, double t_mag) {
  if (r_mag < 0.0 || t_mag < 0.0) {
    throw std::invalid_argument("BeamSplitter::symmetric: magnitudes must be non-negative");
  }
  return general(cplx{r_mag, 0.0}, imag_unit * t_mag);
}

BeamSplitter BeamSplitter::fifty_fifty() {
  const double s = 1.0 / std::sqrt(2.0);
  return symmetric(s, s);
}

TwoPortState beam_splitter_apply(const BeamSplitter& bs, const TwoPortState& input) {
  // out = [[r, t'], [t, r']] acting port-wise on each winding-number term.
  std::map<int, cplx> out1, out2;
  auto accumulate = [](std::map<int, cplx>& dst, const OamSuperposition& src, cplx factor) {
    for (const auto& [ell, c] : src.terms()) dst[ell] += factor * c;
  };
  accumulate(out1, input.port1, bs.r());
  accumulate(out1, input.port2, bs.t_prime());
  accumulate(out2, input.port1, bs.t());
  accumulate(out2, input.port2, bs.r_prime());
  return {OamSuperposition(std::move(out1)), OamSuperposition(std::move(out2))};
}

TwoPortState mach_zehnder(const BeamSplitter& bs1, double phase, int input_ell, cplx u0) {
  TwoPortState state{OamSuperposition::single(input_ell, u0),
                     OamSuperposition::single(input_ell, cplx{0.0, 0.0})};
  state = beam_splitter_apply(bs1, state);
  state.port2 = state.port2.scaled(std::exp(imag_unit * phase));
  state.port1 = dove_prism(state.port1);
  return beam_splitter_apply(BeamSplitter::fifty_fifty(), state);
}

}  // namespace vortexsim::oam
