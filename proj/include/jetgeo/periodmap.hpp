#pragma once

#include <string>
#include <utility>
#include <vector>

#include "jetgeo/momentum.hpp"
#include "jetgeo/quadrature.hpp"

namespace jetgeo {

/// The period map of a homoclinic pencil momentum: the triple of
/// dphi-integrals over one traversal of the hill interval I+ = [0, x+]
/// (or I- = [x-, 0] for the minus branch),
///   Theta^1 = int G_2 dphi,
///   Theta^2 = int G_1 (1 - P_1) dphi = int x^2 (1 - tau x^2) dphi,
///   Theta^3 = int G_2 P_2 dphi.
/// The limits of (dy^2, cost_y, dz^2) over the full time line equal twice
/// these values (the orbit crosses the interval once out and once back).
struct PeriodVector {
  double theta1 = 0.0, theta2 = 0.0, theta3 = 0.0;
  double error_estimate = 0.0;
  Branch branch = Branch::plus;
};

/// Throws DomainError when (tau, eta) lies outside the branch domain.
PeriodVector period_map(double a, double b, double tau, double eta, Branch branch,
                        double tol = 1e-10);

/// Closed forms of (Theta^2, Theta^3) on the one-parameter families, with
/// A = a^2 eta^2 + tau^2 and C = 2 tau - b^2 eta^2:
///   (a,0): ( sqrt(2 tau)(3 a^2 eta^2 - tau^2) / (3 A^2),
///            2 a^2 eta (2 tau)^{3/2} / (3 A^2) )
///   (0,b): ( sqrt(C)(2 b^2 eta^2 - tau) / (3 tau^3),
///            b^2 eta sqrt(C) / tau^2 )
/// Exactly one of a, b must vanish (DomainError otherwise).
std::pair<double, double> period_map_closed_form(double a, double b, double tau,
                                                 double eta);

/// Closed forms of (Theta^2, Theta^3) on the plus branch with eta > 0,
/// expressed in the factorization coordinates (v1, v2, v3). Requires
/// ab != 0, ab*v2 > 0 and |v2| < 1 (DomainError otherwise).
std::pair<double, double> period_map_appendix(double a, double b,
                                              const ThetaCoords& th);

/// The arccos/sqrt building blocks of the Jacobian sign analysis, all
/// evaluated at one v2 in [-1, 1], with s = sqrt(1-v2^2), c = arccos(v2):
///   rho1 = s - v2 c
///   rho2 = (11 v2^2 + 4) s - (6 v2^3 + 9 v2) c
///   rho3 = (2 v2^2 + 1) c - 3 v2 s
///   rho4 = (42 v2^3 + 27 v2) c - (65 v2^2 + 4) s
///   rho5 = (10 v2^2 + 1) c - 11 v2 s
///   rho6 = 3 v2 c - s
/// and disc = 6 rho5^2 - 4 rho4 rho6 (the quadratic discriminant over 6a^2b^2).
struct RhoTable {
  double theta2 = 0.0;
  double rho1 = 0, rho2 = 0, rho3 = 0, rho4 = 0, rho5 = 0, rho6 = 0;
  double disc = 0;
};

RhoTable rho_suite(double theta2);

enum class JacobianMode { analytic, finite_difference };

/// det of the 2x2 Jacobian of (tau, eta) -> (Theta^2, Theta^3) on the plus
/// branch. Analytic mode evaluates the family closed forms
///   (a,0): 4 a^2 tau (3 a^2 eta^2 + tau^2) / (3 A^4)
///   (0,b): b^2 / tau^4
/// and requires exactly one of a, b to vanish; use jacobian_certificate for
/// the general case. Finite-difference mode uses central differences with
/// h = 1e-5 * max(1, |tau|, |eta|) on the quadrature period map and throws
/// DegenerateJacobian when |det| < 1e-10.
double jacobian_det(double a, double b, double tau, double eta, JacobianMode mode,
                    double tol = 1e-10);

/// Nondegeneracy certificate for general ab != 0, eta > 0, mirroring the
/// two-factor argument: the (v1, v2) block of the coordinate change is
/// nonzero, and one partial of the reduced map is sign-definite through the
/// rho functions (rho1, rho2, rho3 > 0 when ab > 0; disc < 0 when ab < 0).
struct JacobianCertificate {
  double df1_block = 0.0;        // 2ab eta A / (2tau^2 - b^2 eta^2 tau + 2a^2 eta^2)^2
  double dtheta2_dv3 = 0.0;      // finite-difference, must be < 0
  double definite_margin = 0.0;  // min margin of the rho-based sign condition
  std::string condition;         // which rho condition certified full rank
  bool nonzero = false;
};

JacobianCertificate jacobian_certificate(double a, double b, double tau, double eta);

/// true iff Theta^-_(a,b)(tau,eta) equals Theta^+_(a,-b)(tau,eta) componentwise
/// within tol. Requires (tau, eta) in the minus-branch domain.
bool switch_symmetry_check(double a, double b, double tau, double eta,
                           double tol = 1e-8);

struct GridSpec {
  double tau_min = 0.2, tau_max = 3.0;
  int n_tau = 40;
  double eta_min = -2.0, eta_max = 2.0;
  int n_eta = 40;
  /// Points with 2 tau - b^2 eta^2 below this margin are excluded.
  double boundary_margin = 1e-3;
};

struct ThetaSample {
  double tau = 0, eta = 0;
  Branch branch = Branch::plus;
  PeriodVector theta;
};

struct InjectivityReport {
  double a = 0, b = 0;
  GridSpec grid;
  double collision_tol = 1e-7;
  std::vector<ThetaSample> samples;
  struct Collision {
    size_t i, j;
    double dist;
  };
  std::vector<Collision> collisions;  // empty = evidence of injectivity
  double min_image_distance = 0.0;    // over non-identified pairs
};

/// Evaluates the period map on the feasible grid points (concurrently, in a
/// fixed index order), scans all pairs for image collisions within
/// collision_tol (max norm), excluding the eta-reflection identifications,
/// and records the minimum pairwise image distance.
InjectivityReport injectivity_probe(double a, double b, const GridSpec& grid,
                                    Branch branch = Branch::plus,
                                    double collision_tol = 1e-7,
                                    double tol = 1e-10);

/// CSV point cloud: a,b,tau,eta,branch,theta1,theta2,theta3,err.
void write_theta_cloud_csv(std::ostream& os, double a, double b,
                           const std::vector<ThetaSample>& samples);

}  // namespace jetgeo
