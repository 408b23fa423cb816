#pragma once

#include <stdexcept>
#include <string>

namespace fdsylv {

// Bad inputs: out-of-domain values, inconsistent configuration, violated
// preconditions. The CLI maps these to exit code 1.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Matrix or grid dimensions that the requested operation cannot accept.
struct DimensionError : ValidationError {
  using ValidationError::ValidationError;
};

// A three-level scheme was asked to run without its first-step row.
struct StartupError : ValidationError {
  using ValidationError::ValidationError;
};

// A scheme whose update weights cannot advance in time at all.
struct AdvanceError : ValidationError {
  using ValidationError::ValidationError;
};

// An iterative factorization stopped before reaching the requested quality.
// Carries the residual it did achieve. The CLI maps the remaining errors
// below to exit code 2 (mathematical degeneracy).
struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, double residual_achieved)
      : std::runtime_error(what), residual(residual_achieved) {}
  double residual;
};

// A linear solve hit a (numerically) singular matrix.
struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The two spectra of a two-sided linear matrix equation (nearly) collide,
// so the solution is not unique. Carries the smallest eigenvalue-pair gap.
struct NonUniqueError : std::runtime_error {
  NonUniqueError(const std::string& what, double spectra_gap)
      : std::runtime_error(what), gap(spectra_gap) {}
  double gap;
};

// A componentwise minimum-norm cell has both diagonal weights exactly zero.
struct DegeneratePairError : std::runtime_error {
  DegeneratePairError(const std::string& what, long row, long col)
      : std::runtime_error(what), i(row), j(col) {}
  long i;
  long j;
};

}  // namespace fdsylv
