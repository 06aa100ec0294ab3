#pragma once

#include <array>
#include <optional>

#include "jetgeo/poly.hpp"

namespace jetgeo {

/// Momentum of a normal geodesic in the 2-jet space of plane curves: the six
/// coefficients (a0_1, a0_2, a1_1, a1_2, a2_1, a2_2) of the degree-<=2
/// vector-valued polynomial P(x) = (a0_1 + a1_1 x + a2_1 x^2,
///                                  a0_2 + a1_2 x + a2_2 x^2).
///
/// The homoclinic family is parametrized by (lambda, a, b) through
///   mu(lambda, a, b) = (1, 0, 0, b/lambda, -1/lambda^2, a/lambda^2),
/// which pins P(0) = (1,0), P(0).P'(0) = 0, and a hill interval [0, x+].
class Momentum {
 public:
  static Momentum from_parameters(double lambda, double a, double b);
  static Momentum from_coefficients(const std::array<double, 6>& mu);

  const std::array<double, 6>& coefficients() const { return mu_; }

  /// (lambda, a, b) when this momentum was built from (or matches) the
  /// homoclinic parametrization; empty otherwise.
  std::optional<std::array<double, 3>> parameters() const { return lab_; }

  /// Membership in the admissible parameter set:
  /// lambda > 0 and (2 - b^2 > 0, or b = +-sqrt(2) with ab < 0).
  /// False for momenta not of the parametrized form.
  bool in_admissible_set() const;

  /// P_mu as a two-component vector polynomial.
  VecPoly poly() const;

 private:
  Momentum() = default;
  std::array<double, 6> mu_{};
  std::optional<std::array<double, 3>> lab_;
};

enum class Branch { plus, minus };

inline const char* branch_name(Branch b) { return b == Branch::plus ? "+" : "-"; }

/// Momentum of a geodesic in the five-dimensional magnetic space: the pencil
/// member G_nu(x) = (1 - tau x^2, eta (b x + a x^2)) determined by
/// nu(tau, eta) = (1 - tau, 0, tau, eta), together with the choice of hill
/// interval I+ = [0, x+] or I- = [x-, 0].
struct PencilMomentum {
  double tau = 1.0;
  double eta = 1.0;
  Branch branch = Branch::plus;

  std::array<double, 4> nu() const { return {1.0 - tau, 0.0, tau, eta}; }

  /// G_nu for the base parameters (a, b).
  VecPoly poly(double a, double b) const;

  /// The four sign cases: the constraint 2 tau - b^2 eta^2 is strict for the
  /// + branch when ab >= 0 and for the - branch when ab <= 0, non-strict
  /// otherwise. tau > 0 always.
  bool in_domain(double a, double b) const;

  /// Interior of the domain: tau > 0 and 2 tau - b^2 eta^2 > 0.
  bool in_domain_interior(double a, double b) const;
};

/// Closed-form outer roots of 1 - V_nu: with A = a^2 eta^2 + tau^2,
/// B = 2ab eta^2, C = 2 tau - b^2 eta^2, the nonzero roots of
/// x^2 (C - Bx - Ax^2) are (-B +- sqrt(B^2 + 4AC)) / (2A).
double pencil_root(double a, double b, double tau, double eta, Branch branch);

/// Quadratic data of the pencil potential and its normalized factorization
///   1 - V_nu(x) = v3 * x^2 * (1 - (v1 x + v2)^2),
/// with v1 = 2A/sqrt(D), v2 = B/sqrt(D), v3 = D/(4A), D = B^2 + 4AC.
struct ThetaCoords {
  double v1 = 0, v2 = 0, v3 = 0;
  double A = 0, B = 0, C = 0;
  double discriminant = 0;
};

/// Throws DegenerateDiscriminant when D <= 0 (nu outside the homoclinic
/// family).
ThetaCoords theta_coords(const PencilMomentum& nu, double a, double b);

/// Inverse of theta_coords on the eta > 0 branch:
///   tau = (v3/2)(1 + (b/a) v1 v2 - v2^2),  eta = sqrt(v1 v2 v3 / (ab)).
/// Throws DomainError when a = 0 or ab * v2 <= 0.
PencilMomentum theta_inverse(const ThetaCoords& th, double a, double b);

}  // namespace jetgeo
