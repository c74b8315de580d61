#include <doctest.h>

#include <cmath>
#include <random>

#include "vortexsim/errors.hpp"
#include "vortexsim/quadrature.hpp"

using namespace vortexsim;
using quad::integrate_1d;
using quad::integrate_2d;
using quad::QuadratureSpec;
using quad::Rect;

TEST_CASE("gaussian integral over a mapped half-line") {
  // int_0^inf e^{-x^2} dx = sqrt(pi)/2; the tail beyond 40 is below 1e-300.
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  const auto res = integrate_2d([](double x, double) { return std::exp(-x * x); },
                                Rect{0.0, 40.0, 0.0, 1.0}, spec);
  CHECK(res.value == doctest::Approx(std::sqrt(M_PI) / 2.0).epsilon(1e-10));
  CHECK(res.err_bound < 1e-8);
}

TEST_CASE("zero integrand returns exactly zero") {
  const auto res = integrate_2d([](double, double) { return 0.0; }, Rect{0, 1, 0, 1});
  CHECK(res.value == 0.0);
  CHECK(res.err_bound == 0.0);
}

TEST_CASE("1d polynomial is exact") {
  const auto res = integrate_1d([](double x) { return 3.0 * x * x; }, 0.0, 2.0);
  CHECK(res.value == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("1d handles an integrable kink") {
  const auto res = integrate_1d([](double x) { return std::sqrt(std::abs(x - 0.3)); }, 0.0, 1.0);
  const double exact = (std::pow(0.3, 1.5) + std::pow(0.7, 1.5)) * 2.0 / 3.0;
  CHECK(res.value == doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("max_evals exhaustion raises AccuracyError with the partial result") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-14;
  spec.abs_tol = 0.0;
  spec.max_evals = 2000;  // far too few for this oscillatory integrand
  CHECK_THROWS_AS(integrate_2d([](double x, double y) { return std::sin(50 * x) * std::cos(30 * y) + 1.0; },
                               Rect{0, 3, 0, 3}, spec),
                  AccuracyError);
}

TEST_CASE("determinism: identical spec gives identical bits") {
  auto f = [](double x, double y) { return std::exp(-x * y) * std::sin(3 * x + y); };
  const auto a = integrate_2d(f, Rect{0, 2, 0, 2});
  const auto b = integrate_2d(f, Rect{0, 2, 0, 2});
  CHECK(a.value == b.value);
  CHECK(a.err_bound == b.err_bound);
}

TEST_CASE("error bound honored when the tolerance is halved") {
  // Tightening rel_tol must not move the value by more than the bound that
  // was reported at the looser tolerance.
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> amp(0.5, 2.0), freq(0.5, 6.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = amp(rng), w1 = freq(rng), w2 = freq(rng);
    auto f = [a, w1, w2](double x, double y) {
      return a * std::sin(w1 * x) * std::cos(w2 * y) + std::exp(-x * x - 0.5 * y * y);
    };
    QuadratureSpec loose;
    loose.rel_tol = 1e-6;
    const auto coarse = integrate_2d(f, Rect{0, 2, -1, 2}, loose);
    QuadratureSpec tight = loose;
    tight.rel_tol = 0.5e-6;
    const auto fine = integrate_2d(f, Rect{0, 2, -1, 2}, tight);
    CHECK(std::abs(fine.value - coarse.value) <= coarse.err_bound + 1e-15);
  }
}

TEST_CASE("fixed tensor scheme agrees on a smooth integrand") {
  QuadratureSpec spec;
  spec.scheme = QuadratureSpec::Scheme::fixed_tensor;
  const auto res =
      integrate_2d([](double x, double y) { return std::exp(-x * x - y * y); },
                   Rect{-6, 6, -6, 6}, spec);
  CHECK(res.value == doctest::Approx(M_PI).epsilon(1e-10));
}
