#pragma once

#include <stdexcept>
#include <string>

namespace vortexsim {

// Configuration problems: bad fields, missing keys, unphysical parameter sets.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine could not reach the requested tolerance. Carries the
// best estimate and the error bound it did achieve.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double best_estimate, double err_bound)
      : std::runtime_error(what), best_estimate(best_estimate), err_bound(err_bound) {}
  double best_estimate;
  double err_bound;
};

// Step-size underflow in the ODE integrator.
class StiffnessError : public std::runtime_error {
 public:
  explicit StiffnessError(const std::string& what) : std::runtime_error(what) {}
};

// Pattern analysis failed (featureless or degenerate grid, etc.).
class AnalysisError : public std::runtime_error {
 public:
  explicit AnalysisError(const std::string& what) : std::runtime_error(what) {}
};

// Requested state does not exist (e.g. chemical potential below the trap
// minimum, so no condensate forms).
class NoCondensateError : public std::runtime_error {
 public:
  explicit NoCondensateError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vortexsim
