#pragma once

#include <cstddef>
#include <functional>

namespace vortexsim::quad {

struct QuadratureSpec {
  enum class Scheme { adaptive_nested, fixed_tensor };
  Scheme scheme = Scheme::adaptive_nested;
  double abs_tol = 1e-14;
  double rel_tol = 1e-9;
  std::size_t max_evals = 20'000'000;
};

struct QuadResult {
  double value = 0.0;
  double err_bound = 0.0;
  std::size_t evals = 0;
};

struct Rect {
  double x0, x1, y0, y1;
};

// Adaptive Gauss-Kronrod (G7/K15) on [a, b]. Deterministic for a fixed spec.
// Throws AccuracyError when max_evals is exhausted before the tolerance
// max(abs_tol, rel_tol*|value|) is met.
QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const QuadratureSpec& spec = {});

// Tensor G7/K15 patches over a rectangle with largest-error-first bisection.
// Same tolerance contract and determinism guarantee as integrate_1d.
QuadResult integrate_2d(const std::function<double(double, double)>& f, const Rect& domain,
                        const QuadratureSpec& spec = {});

}  // namespace vortexsim::quad
