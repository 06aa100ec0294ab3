#pragma once

#include "jetgeo/classify.hpp"
#include "jetgeo/momentum.hpp"
#include "jetgeo/poly.hpp"

namespace jetgeo {

/// Integrand of a dphi-weighted integral over a monotone leg of a hill
/// interval:  integral of numerator(x) / sqrt(1 - V(x)) dx.
/// The measure has inverse-square-root singularities at simple roots of
/// 1 - V and a 1/|x - r| singularity at a double root r; the latter is
/// integrable exactly when the numerator vanishes there.
struct PhiIntegrand {
  Poly numerator;
  Poly potential;
  HillInterval interval;  // the leg; mult0/mult1 = multiplicities of 1 - V
                          // at the endpoints (0 when not a root)

  /// Endpoint multiplicities of 1 - V detected from the polynomial itself
  /// (derivative magnitudes, threshold 1e-9 * max(1, |1-V|_inf)).
  static HillInterval make_leg(const Poly& potential, double lo, double hi);

  bool integrable() const;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Evaluates the integral to max(1e-10 abs, 1e-10 rel) by default.
/// Double-root endpoint factors are cancelled symbolically (synthetic
/// division of the numerator), remaining simple-root endpoints are absorbed
/// by a sine substitution, and the resulting smooth integrand goes through
/// adaptive Gauss-Kronrod 7/15 with deterministic panel subdivision.
/// Throws NonIntegrable when the integrability flag fails and
/// ToleranceNotMet (carrying the best estimate) when refinement is exhausted.
QuadResult integrate_phi(const PhiIntegrand& f, double tol = 1e-10);

/// Displacements and costs of a geodesic with pencil momentum nu over one
/// monotone x-leg. Components whose dphi-integral diverges (a leg endpoint
/// sits on the double root with a non-vanishing integrand) are +infinity;
/// the costs are always computed from their own cancelled integrands:
///   cost_t = integral of (1 - G_1) dphi,  cost_y = integral of G_1 (1 - P_1) dphi.
struct DeltaResult {
  double dt = 0.0;
  double dy1 = 0.0, dy2 = 0.0;
  double dz1 = 0.0, dz2 = 0.0;
  double cost_t = 0.0, cost_y = 0.0;
  double error_estimate = 0.0;
};

/// The leg [x_from, x_to] (either orientation) must lie inside a hill
/// interval of V_nu; throws DomainError otherwise, and propagates
/// quadrature errors for the cost components.
DeltaResult delta_map(double a, double b, const PencilMomentum& nu, double x_from,
                      double x_to, double tol = 1e-10);

}  // namespace jetgeo
