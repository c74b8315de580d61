#include "vortexsim/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vortexsim/errors.hpp"

namespace vortexsim::detect {

namespace {

constexpr int kAngularSamples = 4096;
constexpr int kRadialSamples = 1024;

double factorial_sqrt(int l) { return std::exp(0.5 * std::lgamma(l + 1.0)); }

// Angular intensity profile around radius rho, bilinear-sampled.
std::vector<double> angular_profile(const DensityGrid& grid, double rho, int n = kAngularSamples) {
  std::vector<double> p(n);
  for (int k = 0; k < n; ++k) {
    const double phi = 2.0 * M_PI * k / n;
    p[k] = grid.sample(rho * std::cos(phi), rho * std::sin(phi));
  }
  return p;
}

// Radius of maximum ring-averaged density.
double peak_ring_radius(const DensityGrid& grid) {
  const double rmax = 0.49 * grid.extent;
  double best_r = 0.0, best_v = -1.0;
  for (int i = 1; i <= kRadialSamples; ++i) {
    const double r = rmax * i / kRadialSamples;
    double mean = 0.0;
    constexpr int na = 256;
    for (int k = 0; k < na; ++k) {
      const double phi = 2.0 * M_PI * k / na;
      mean += grid.sample(r * std::cos(phi), r * std::sin(phi));
    }
    mean /= na;
    if (mean > best_v) {
      best_v = mean;
      best_r = r;
    }
  }
  if (best_v <= 0.0) throw AnalysisError("density grid is empty; no ring to analyze");
  return best_r;
}

}  // namespace

RadialProfile harmonic_vortex_profile(const traps::HarmonicTrap& trap, int ell) {
  const int al = std::abs(ell);
  const double lp = trap.l_perp();
  const double norm = 1.0 / (factorial_sqrt(al) * std::pow(lp, al) * std::sqrt(M_PI) * lp);
  return {[al, lp, norm](double rho) {
            return norm * std::pow(rho, al) * std::exp(-rho * rho / (2.0 * lp * lp));
          },
          lp};
}

RadialProfile tf_vortex_profile(const traps::MexicanHatTrap& trap,
                                const traps::CondensateParams& condensate, int ell) {
  const auto ansatz = traps::tf_wavefunction_ansatz(trap, condensate, ell);
  // z separates as a Gaussian of length Lz; the column factor is sqrt(pi) Lz.
  const double column = std::sqrt(std::sqrt(M_PI) * ansatz.l_z());
  const auto [rm, rp] = traps::tf_radii(trap, condensate.mu);
  (void)rm;
  return {[ansatz, column](double rho) { return column * ansatz.radial(rho, 0.0); }, rp};
}

std::function<RadialProfile(int)> harmonic_profile_maker(const traps::HarmonicTrap& trap) {
  return [trap](int ell) { return harmonic_vortex_profile(trap, ell); };
}

std::function<RadialProfile(int)> tf_profile_maker(const traps::MexicanHatTrap& trap,
                                                   const traps::CondensateParams& condensate) {
  return [trap, condensate](int ell) { return tf_vortex_profile(trap, condensate, ell); };
}

VortexSuperposition VortexSuperposition::counter_rotating(
    double alpha, double beta, double theta, int ell, std::function<RadialProfile(int)> maker) {
  if (alpha < 0.0 || beta < 0.0) {
    throw std::invalid_argument("VortexSuperposition: amplitudes must be non-negative");
  }
  if (std::abs(alpha * alpha + beta * beta - 1.0) > 1e-12) {
    throw std::invalid_argument("VortexSuperposition: alpha^2 + beta^2 must equal 1");
  }
  if (ell == 0) throw std::invalid_argument("VortexSuperposition: ell must be nonzero");
  VortexSuperposition s;
  s.alpha = alpha;
  s.beta = beta;
  s.theta = theta;
  s.ell1 = ell;
  s.ell2 = -ell;
  s.prof1 = maker(ell);
  s.prof2 = maker(-ell);
  s.profile_maker = std::move(maker);
  return s;
}

double interference_density(const VortexSuperposition& state, double rho, double phi) {
  const cplx one = state.alpha * state.prof1.value(rho) *
                   std::exp(imag_unit * static_cast<double>(state.ell1) * phi);
  const cplx two = state.beta * state.prof2.value(rho) *
                   std::exp(imag_unit * (static_cast<double>(state.ell2) * phi + state.theta));
  return std::norm(one + two);
}

double DensityGrid::sample(double x, double y) const {
  const double dx = extent / nx, dy = extent / ny;
  const double fx = (x + 0.5 * extent) / dx - 0.5;
  const double fy = (y + 0.5 * extent) / dy - 0.5;
  const int ix = static_cast<int>(std::floor(fx));
  const int iy = static_cast<int>(std::floor(fy));
  const double wx = fx - ix, wy = fy - iy;
  auto cell = [&](int i, int j) -> double {
    if (i < 0 || j < 0 || i >= nx || j >= ny) return 0.0;
    return at(i, j);
  };
  return (1 - wx) * (1 - wy) * cell(ix, iy) + wx * (1 - wy) * cell(ix + 1, iy) +
         (1 - wx) * wy * cell(ix, iy + 1) + wx * wy * cell(ix + 1, iy + 1);
}

double DensityGrid::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * cell_area();
}

DensityGrid render_grid(const VortexSuperposition& state, int nx, int ny, double extent) {
  if (nx < 64 || ny < 64) throw std::invalid_argument("render_grid: nx, ny must be >= 64");
  if (extent <= 0.0) throw std::invalid_argument("render_grid: extent must be positive");
  DensityGrid g;
  g.nx = nx;
  g.ny = ny;
  g.extent = extent;
  g.values.resize(static_cast<std::size_t>(nx) * ny);
  for (int iy = 0; iy < ny; ++iy) {
    const double y = g.y_of(iy);
    for (int ix = 0; ix < nx; ++ix) {
      const double x = g.x_of(ix);
      const double rho = std::hypot(x, y);
      const double phi = std::atan2(y, x);
      g.values[static_cast<std::size_t>(iy) * nx + ix] = interference_density(state, rho, phi);
    }
  }
  return g;
}

double visibility(const VortexSuperposition& state) { return 2.0 * state.alpha * state.beta; }

double visibility(const DensityGrid& grid) {
  const double r = peak_ring_radius(grid);
  const std::vector<double> p = angular_profile(grid, r);
  const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
  if (*hi <= 0.0) throw AnalysisError("visibility: ring intensity vanishes");
  return (*hi - *lo) / (*hi + *lo);
}

int count_lobes(const DensityGrid& grid) {
  const double r = peak_ring_radius(grid);
  const std::vector<double> p = angular_profile(grid, r);
  const double pmax = *std::max_element(p.begin(), p.end());
  const double pmin = *std::min_element(p.begin(), p.end());
  if (pmax <= 0.0 || (pmax - pmin) / (pmax + pmin) < 0.1) {
    throw AnalysisError("count_lobes: pattern visibility below 0.1, lobes unresolvable");
  }
  const double threshold = 0.5 * pmax;
  const int n = static_cast<int>(p.size());
  // A lobe peak must dominate a finite angular window, not just its two
  // neighbours; bilinear sampling of the grid produces sub-cell wiggles.
  const int w = std::max(1, n / 128);
  int count = 0;
  for (int i = 0; i < n; ++i) {
    if (p[i] < threshold) continue;
    bool is_peak = true;
    for (int k = 1; k <= w && is_peak; ++k) {
      const double before = p[(i - k + n) % n], after = p[(i + k) % n];
      // strictly above everything earlier in the window, ties allowed after,
      // so a flat top counts exactly once
      if (!(p[i] > before) || !(p[i] >= after)) is_peak = false;
    }
    if (is_peak) ++count;
  }
  return count;
}

double pattern_rotation(const DensityGrid& grid, const DensityGrid& reference) {
  if (grid.nx != reference.nx || grid.ny != reference.ny || grid.extent != reference.extent) {
    throw std::invalid_argument("pattern_rotation: grids must share geometry");
  }
  const double r = peak_ring_radius(reference);
  const std::vector<double> ref = angular_profile(reference, r);
  const std::vector<double> rot = angular_profile(grid, r);
  const int n = static_cast<int>(ref.size());

  const double ref_max = *std::max_element(ref.begin(), ref.end());
  const double ref_min = *std::min_element(ref.begin(), ref.end());
  if (ref_max <= 0.0 || (ref_max - ref_min) / (ref_max + ref_min) < 1e-3) {
    throw AnalysisError("pattern_rotation: featureless reference pattern");
  }

  // rot(phi) = ref(phi - d) peaks the correlation at shift d.
  std::vector<double> corr(n);
  int best = 0;
  for (int s = 0; s < n; ++s) {
    double c = 0.0;
    for (int k = 0; k < n; ++k) c += ref[k] * rot[(k + s) % n];
    corr[s] = c;
    if (c > corr[best]) best = s;
  }
  // Parabolic sub-bin refinement around the peak.
  const double cm = corr[(best + n - 1) % n], c0 = corr[best], cp = corr[(best + 1) % n];
  const double denom = cm - 2.0 * c0 + cp;
  const double frac = std::abs(denom) > 0.0 ? 0.5 * (cm - cp) / denom : 0.0;
  double shift = (best + frac) * 2.0 * M_PI / n;

  // Fold into one fringe period centred on zero.
  const int lobes = count_lobes(reference);
  const double period = 2.0 * M_PI / lobes;
  shift = std::fmod(shift, period);
  if (shift > 0.5 * period) shift -= period;
  if (shift <= -0.5 * period) shift += period;
  return shift;
}

VortexSuperposition probe_shift(const VortexSuperposition& state) {
  if (state.ell2 != -state.ell1) {
    throw std::invalid_argument("probe_shift: state must carry charges (ell, -ell)");
  }
  if (!state.profile_maker) {
    throw std::logic_error("probe_shift: state has no profile factory");
  }
  VortexSuperposition s;
  s.alpha = state.alpha;
  s.beta = state.beta;
  s.theta = state.theta;
  s.ell1 = state.ell1 + 1;
  s.ell2 = state.ell2 + 1;
  s.profile_maker = state.profile_maker;
  s.prof1 = s.profile_maker(s.ell1);
  s.prof2 = s.profile_maker(s.ell2);
  return s;
}

AmplitudeAssignment disambiguate_amplitudes(double v_before, const DensityGrid& grid_after,
                                            const VortexSuperposition& shifted_template) {
  if (v_before < 0.0 || v_before > 1.0 + 1e-12) {
    throw std::invalid_argument("disambiguate_amplitudes: visibility must lie in [0, 1]");
  }
  AmplitudeAssignment out;
  const double v = std::min(v_before, 1.0);
  // alpha^2 + beta^2 = 1 and 2 alpha beta = V have the two-fold solution
  const double root = std::sqrt(std::max(0.0, 1.0 - v * v));
  const double big = std::sqrt(0.5 * (1.0 + root));
  const double small = std::sqrt(0.5 * (1.0 - root));
  out.amp_large = big;
  out.amp_small = small;
  if (root < 1e-6) {
    out.symmetric = true;
    out.large_on_ell1 = true;
    out.residual_ratio = 1.0;
    return out;
  }

  auto candidate = [&](bool large_first) {
    VortexSuperposition c = shifted_template;
    c.alpha = large_first ? big : small;
    c.beta = large_first ? small : big;
    return render_grid(c, grid_after.nx, grid_after.ny, grid_after.extent);
  };
  auto residual = [&](const DensityGrid& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.values.size(); ++i) {
      const double d = c.values[i] - grid_after.values[i];
      s += d * d;
    }
    return std::sqrt(s);
  };
  const double res_large_first = residual(candidate(true));
  const double res_small_first = residual(candidate(false));
  out.large_on_ell1 = res_large_first <= res_small_first;
  const double chosen = out.large_on_ell1 ? res_large_first : res_small_first;
  const double other = out.large_on_ell1 ? res_small_first : res_large_first;
  out.residual_ratio = chosen > 0.0 ? other / chosen : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace vortexsim::detect
