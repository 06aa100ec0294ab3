#include "jetgeo/momentum.hpp"

#include <cmath>

#include "jetgeo/errors.hpp"

namespace jetgeo {

Momentum Momentum::from_parameters(double lambda, double a, double b) {
  if (!(lambda > 0.0)) throw DomainError("momentum: lambda must be positive");
  Momentum m;
  m.mu_ = {1.0, 0.0, 0.0, b / lambda, -1.0 / (lambda * lambda), a / (lambda * lambda)};
  m.lab_ = {lambda, a, b};
  return m;
}

Momentum Momentum::from_coefficients(const std::array<double, 6>& mu) {
  Momentum m;
  m.mu_ = mu;
  // Recover (lambda, a, b) when the coefficients match the parametrized form.
  if (mu[0] == 1.0 && mu[1] == 0.0 && mu[2] == 0.0 && mu[4] < 0.0) {
    double lambda = 1.0 / std::sqrt(-mu[4]);
    m.lab_ = {lambda, mu[5] * lambda * lambda, mu[3] * lambda};
  }
  return m;
}

bool Momentum::in_admissible_set() const {
  if (!lab_) return false;
  double lambda = (*lab_)[0], a = (*lab_)[1], b = (*lab_)[2];
  if (!(lambda > 0.0)) return false;
  if (2.0 - b * b > 0.0) return true;
  return std::abs(std::abs(b) - std::sqrt(2.0)) <= 1e-12 && a * b < 0.0;
}

VecPoly Momentum::poly() const {
  return VecPoly(Poly{mu_[0], mu_[2], mu_[4]}, Poly{mu_[1], mu_[3], mu_[5]});
}

VecPoly PencilMomentum::poly(double a, double b) const {
  return VecPoly(Poly{1.0, 0.0, -tau}, Poly{0.0, eta * b, eta * a});
}

bool PencilMomentum::in_domain(double a, double b) const {
  if (!(tau > 0.0)) return false;
  const double c = 2.0 * tau - b * b * eta * eta;
  const double ab = a * b;
  const bool strict = (branch == Branch::plus) ? (ab >= 0.0) : (ab <= 0.0);
  return strict ? (c > 0.0) : (c >= 0.0);
}

bool PencilMomentum::in_domain_interior(double a, double b) const {
  (void)a;
  (void)b;
  return tau > 0.0 && 2.0 * tau - b * b * eta * eta > 0.0;
}

double pencil_root(double a, double b, double tau, double eta, Branch branch) {
  const double A = a * a * eta * eta + tau * tau;
  const double B = 2.0 * a * b * eta * eta;
  const double C = 2.0 * tau - b * b * eta * eta;
  const double D = B * B + 4.0 * A * C;
  if (D < 0.0) throw DegenerateDiscriminant("pencil_root: negative discriminant");
  const double s = std::sqrt(D);
  return branch == Branch::plus ? (-B + s) / (2.0 * A) : (-B - s) / (2.0 * A);
}

ThetaCoords theta_coords(const PencilMomentum& nu, double a, double b) {
  ThetaCoords th;
  th.A = a * a * nu.eta * nu.eta + nu.tau * nu.tau;
  th.B = 2.0 * a * b * nu.eta * nu.eta;
  th.C = 2.0 * nu.tau - b * b * nu.eta * nu.eta;
  th.discriminant = th.B * th.B + 4.0 * th.A * th.C;
  if (!(th.discriminant > 0.0))
    throw DegenerateDiscriminant("theta_coords: discriminant not positive");
  const double s = std::sqrt(th.discriminant);
  th.v1 = 2.0 * th.A / s;
  th.v2 = th.B / s;
  th.v3 = th.discriminant / (4.0 * th.A);
  return th;
}

PencilMomentum theta_inverse(const ThetaCoords& th, double a, double b) {
  if (a == 0.0) throw DomainError("theta_inverse: a must be nonzero");
  const double ab = a * b;
  if (!(ab * th.v2 > 0.0))
    throw DomainError("theta_inverse: ab * v2 must be positive");
  PencilMomentum nu;
  nu.tau = 0.5 * th.v3 * (1.0 + (b / a) * th.v1 * th.v2 - th.v2 * th.v2);
  nu.eta = std::sqrt(th.v1 * th.v2 * th.v3 / ab);
  nu.branch = Branch::plus;
  return nu;
}

}  // namespace jetgeo
