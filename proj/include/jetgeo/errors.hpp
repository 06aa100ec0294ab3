#pragma once

#include <stdexcept>
#include <string>

namespace jetgeo {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Root refinement stalled (ill-conditioned near-multiple roots).
struct NonConvergence : Error {
  using Error::Error;
};

/// Discriminant of the pencil quadratic is not positive; the momentum lies
/// outside the homoclinic family.
struct DegenerateDiscriminant : Error {
  using Error::Error;
};

/// Argument outside the operation's domain.
struct DomainError : Error {
  using Error::Error;
};

/// Potential exceeds the energy level inside the supposed hill interval.
struct InvalidInterval : Error {
  using Error::Error;
};

/// V > 1 everywhere: no motion at energy 1/2.
struct NoHillInterval : Error {
  using Error::Error;
};

/// Both polynomial derivatives vanish; every direction is abnormal there.
struct ZeroGradient : Error {
  using Error::Error;
};

/// The phi-integral diverges (numerator does not cancel a double root).
struct NonIntegrable : Error {
  using Error::Error;
};

/// Quadrature could not reach the requested tolerance; carries the best value.
struct ToleranceNotMet : Error {
  ToleranceNotMet(const std::string& what, double best, double err)
      : Error(what), best_value(best), error_estimate(err) {}
  double best_value;
  double error_estimate;
};

/// Adaptive step size underflowed away from an equilibrium.
struct StepUnderflow : Error {
  using Error::Error;
};

/// Finite-difference Jacobian determinant fell below the degeneracy floor.
struct DegenerateJacobian : Error {
  using Error::Error;
};

}  // namespace jetgeo
