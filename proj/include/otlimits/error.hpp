#ifndef OTLIMITS_ERROR_HPP
#define OTLIMITS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace otl {

/// Malformed input: bad weights, mismatched dimensions, unknown JSON keys.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to reach its stated postcondition.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The dual face built from a solution is empty; the solution is broken.
class InfeasibleFace : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Semi-discrete dual ascent hit its iteration cap.
class NonConvergence : public SolverError {
 public:
  NonConvergence(const std::string& what, double residual)
      : SolverError(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Quadrature too coarse to resolve a semi-discrete cell.
class QuadratureUnderflow : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Studentizing variance is (numerically) zero.
class DegenerateVariance : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Too many replications failed in a Monte Carlo experiment.
class ExperimentAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace otl

#endif  // OTLIMITS_ERROR_HPP
