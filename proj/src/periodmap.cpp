#include "jetgeo/periodmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "jetgeo/errors.hpp"
#include "jetgeo/io.hpp"

namespace jetgeo {

PeriodVector period_map(double a, double b, double tau, double eta, Branch branch,
                        double tol) {
  PencilMomentum nu{tau, eta, branch};
  if (!nu.in_domain(a, b))
    throw DomainError("period_map: (tau, eta) outside the branch domain");

  const VecPoly G = nu.poly(a, b);
  const VecPoly P(Poly{1.0, 0.0, -1.0}, Poly{0.0, b, a});
  const Poly V = potential(G);
  const double outer = pencil_root(a, b, tau, eta, branch);
  const double lo = branch == Branch::plus ? 0.0 : outer;
  const double hi = branch == Branch::plus ? outer : 0.0;
  const HillInterval leg = PhiIntegrand::make_leg(V, lo, hi);
  const Poly one = Poly::constant(1.0);

  PeriodVector th;
  th.branch = branch;
  auto part = [&](const Poly& num) {
    QuadResult q = integrate_phi(PhiIntegrand{num, V, leg}, tol);
    th.error_estimate += q.error_estimate;
    return q.value;
  };
  th.theta1 = part(G[1]);
  th.theta2 = part(G[0] * (one - P[0]));
  th.theta3 = part(G[1] * P[1]);
  return th;
}

std::pair<double, double> period_map_closed_form(double a, double b, double tau,
                                                 double eta) {
  const bool a_zero = a == 0.0, b_zero = b == 0.0;
  if (a_zero == b_zero)
    throw DomainError("period_map_closed_form: exactly one of a, b must vanish");
  if (!(tau > 0.0)) throw DomainError("period_map_closed_form: tau must be positive");
  if (b_zero) {
    const double A = a * a * eta * eta + tau * tau;
    const double s = std::sqrt(2.0 * tau);
    return {s * (3.0 * a * a * eta * eta - tau * tau) / (3.0 * A * A),
            2.0 * a * a * eta * s * s * s / (3.0 * A * A)};
  }
  const double C = 2.0 * tau - b * b * eta * eta;
  if (!(C >= 0.0)) throw DomainError("period_map_closed_form: outside the domain");
  const double s = std::sqrt(C);
  return {s * (2.0 * b * b * eta * eta - tau) / (3.0 * tau * tau * tau),
          b * b * eta * s / (tau * tau)};
}

namespace {

struct RhoParts {
  double s, c;  // sqrt(1 - v2^2), arccos(v2)
};

RhoParts rho_parts(double v2) {
  if (v2 < -1.0 || v2 > 1.0) throw DomainError("rho: v2 outside [-1, 1]");
  return {std::sqrt(std::max(0.0, 1.0 - v2 * v2)), std::acos(v2)};
}

}  // namespace

std::pair<double, double> period_map_appendix(double a, double b,
                                              const ThetaCoords& th) {
  if (a * b == 0.0) throw DomainError("period_map_appendix: requires ab != 0");
  if (!(a * b * th.v2 > 0.0))
    throw DomainError("period_map_appendix: requires ab * v2 > 0");
  if (!(std::abs(th.v2) < 1.0))
    throw DomainError("period_map_appendix: requires |v2| < 1");
  const double v1 = th.v1, v2 = th.v2, v3 = th.v3;
  const auto [s, c] = rho_parts(v2);

  // Antiderivatives of the moment integrals J_k = int_{v2}^{1} (w - v2)^k /
  // sqrt(1 - w^2) dw, expanded through the sigma polynomials.
  const double common = a * v2 * v2 - b * v1 * v2 - a;  // = -2 a tau / v3
  const double sg1 = (11.0 / 12.0) * (v2 * v2 + 4.0 / 11.0) * common * v3 + a * v1 * v1;
  const double sg2 =
      0.5 * v2 * ((v2 * v2 + 1.5) * common * v3 + 2.0 * a * v1 * v1);
  const double sg3 = 3.0 * a * b * v1 * v2 - b * b * v1 * v1 -
                     a * a * ((11.0 * v2 * v2) / 6.0 + 2.0 / 3.0);
  const double sg4 = b * b * v1 * v1 * v2 + a * a * (v2 * v2 * v2 + 1.5 * v2) -
                     2.0 * a * b * v1 * (v2 * v2 + 0.5);

  const double t2 = (sg1 * s - sg2 * c) / (a * std::sqrt(v3) * v1 * v1 * v1 * v1);
  const double t3 = -std::sqrt(v2 / (a * b)) / (v1 * v1 * v1 * std::sqrt(v1)) *
                    (sg3 * s + sg4 * c);
  return {t2, t3};
}

RhoTable rho_suite(double theta2) {
  const auto [s, c] = rho_parts(theta2);
  const double v2 = theta2;
  RhoTable r;
  r.theta2 = v2;
  r.rho1 = s - v2 * c;
  r.rho2 = (11.0 * v2 * v2 + 4.0) * s - (6.0 * v2 * v2 * v2 + 9.0 * v2) * c;
  r.rho3 = (2.0 * v2 * v2 + 1.0) * c - 3.0 * v2 * s;
  r.rho4 = (42.0 * v2 * v2 * v2 + 27.0 * v2) * c - (65.0 * v2 * v2 + 4.0) * s;
  r.rho5 = (10.0 * v2 * v2 + 1.0) * c - 11.0 * v2 * s;
  r.rho6 = 3.0 * v2 * c - s;
  r.disc = 6.0 * r.rho5 * r.rho5 - 4.0 * r.rho4 * r.rho6;
  return r;
}

namespace {

double fd_jacobian_det(double a, double b, double tau, double eta, double tol) {
  const double h = 1e-5 * std::max({1.0, std::abs(tau), std::abs(eta)});
  auto f = [&](double t, double e) {
    PeriodVector th = period_map(a, b, t, e, Branch::plus, tol);
    return std::array<double, 2>{th.theta2, th.theta3};
  };
  const auto fp_t = f(tau + h, eta), fm_t = f(tau - h, eta);
  const auto fp_e = f(tau, eta + h), fm_e = f(tau, eta - h);
  const double d2t = (fp_t[0] - fm_t[0]) / (2 * h), d2e = (fp_e[0] - fm_e[0]) / (2 * h);
  const double d3t = (fp_t[1] - fm_t[1]) / (2 * h), d3e = (fp_e[1] - fm_e[1]) / (2 * h);
  return d2t * d3e - d2e * d3t;
}

}  // namespace

double jacobian_det(double a, double b, double tau, double eta, JacobianMode mode,
                    double tol) {
  if (mode == JacobianMode::finite_difference) {
    const double det = fd_jacobian_det(a, b, tau, eta, tol);
    if (std::abs(det) < 1e-10)
      throw DegenerateJacobian("jacobian_det: |det| below 1e-10");
    return det;
  }
  const bool a_zero = a == 0.0, b_zero = b == 0.0;
  if (a_zero == b_zero)
    throw DomainError(
        "jacobian_det: analytic determinant exists for the one-parameter "
        "families only; use jacobian_certificate for general (a, b)");
  if (b_zero) {
    const double A = a * a * eta * eta + tau * tau;
    return 4.0 * a * a * tau * (3.0 * a * a * eta * eta + tau * tau) /
           (3.0 * A * A * A * A);
  }
  return b * b / (tau * tau * tau * tau);
}

JacobianCertificate jacobian_certificate(double a, double b, double tau, double eta) {
  if (a * b == 0.0)
    throw DomainError("jacobian_certificate: requires ab != 0");
  PencilMomentum nu{tau, eta, Branch::plus};
  if (!(eta > 0.0) || !nu.in_domain_interior(a, b))
    throw DomainError("jacobian_certificate: requires eta > 0 in the open domain");

  JacobianCertificate cert;
  const ThetaCoords th = theta_coords(nu, a, b);
  const double D = 2.0 * tau * tau - b * b * eta * eta * tau + 2.0 * a * a * eta * eta;
  cert.df1_block = 2.0 * a * b * eta * th.A / (D * D);

  // dTheta~2/dv3 < 0, by central difference of the closed form.
  {
    const double h = 1e-6 * std::max(1.0, th.v3);
    ThetaCoords up = th, dn = th;
    up.v3 += h;
    dn.v3 -= h;
    cert.dtheta2_dv3 =
        (period_map_appendix(a, b, up).first - period_map_appendix(a, b, dn).first) /
        (2 * h);
  }

  const RhoTable r = rho_suite(th.v2);
  if (a * b > 0.0) {
    // dTheta~3/dv1 is a positive combination of rho1, rho2, rho3 (v2 > 0).
    cert.condition = "rho1,rho2,rho3 > 0";
    cert.definite_margin = std::min({r.rho1, r.rho2, r.rho3});
  } else {
    // dTheta~3/dv2 != 0 because the v1-quadratic has negative discriminant.
    cert.condition = "6 rho5^2 - 4 rho4 rho6 < 0";
    cert.definite_margin = -r.disc;
  }
  cert.nonzero = std::abs(cert.df1_block) > 0.0 && cert.dtheta2_dv3 < 0.0 &&
                 cert.definite_margin > 0.0;
  return cert;
}

bool switch_symmetry_check(double a, double b, double tau, double eta, double tol) {
  PencilMomentum nu{tau, eta, Branch::minus};
  if (!nu.in_domain(a, b))
    throw DomainError("switch_symmetry_check: (tau, eta) outside the minus domain");
  const PeriodVector lhs = period_map(a, b, tau, eta, Branch::minus);
  const PeriodVector rhs = period_map(a, -b, tau, eta, Branch::plus);
  return std::abs(lhs.theta1 - rhs.theta1) <= tol &&
         std::abs(lhs.theta2 - rhs.theta2) <= tol &&
         std::abs(lhs.theta3 - rhs.theta3) <= tol;
}

namespace {

std::vector<std::pair<double, double>> feasible_grid(double a, double b,
                                                     const GridSpec& g, Branch br) {
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < g.n_tau; ++i) {
    const double tau =
        g.n_tau == 1 ? g.tau_min
                     : g.tau_min + (g.tau_max - g.tau_min) * i / (g.n_tau - 1.0);
    for (int j = 0; j < g.n_eta; ++j) {
      const double eta =
          g.n_eta == 1 ? g.eta_min
                       : g.eta_min + (g.eta_max - g.eta_min) * j / (g.n_eta - 1.0);
      PencilMomentum nu{tau, eta, br};
      if (!(tau > 0.0)) continue;
      if (2.0 * tau - b * b * eta * eta < g.boundary_margin) continue;
      if (!nu.in_domain(a, b)) continue;
      pts.emplace_back(tau, eta);
    }
  }
  return pts;
}

}  // namespace

InjectivityReport injectivity_probe(double a, double b, const GridSpec& grid,
                                    Branch branch, double collision_tol, double tol) {
  InjectivityReport rep;
  rep.a = a;
  rep.b = b;
  rep.grid = grid;
  rep.collision_tol = collision_tol;

  const auto pts = feasible_grid(a, b, grid, branch);
  rep.samples.resize(pts.size());
  parallel_for(pts.size(), [&](size_t i) {
    ThetaSample s;
    s.tau = pts[i].first;
    s.eta = pts[i].second;
    s.branch = branch;
    s.theta = period_map(a, b, s.tau, s.eta, branch, tol);
    rep.samples[i] = s;
  });

  double min_dist = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < rep.samples.size(); ++i) {
    for (size_t j = i + 1; j < rep.samples.size(); ++j) {
      const auto& p = rep.samples[i];
      const auto& q = rep.samples[j];
      // eta-reflection identification: (tau, eta) and (tau, -eta) share
      // Theta^2 by construction; skip those pairs.
      if (p.tau == q.tau && p.eta == -q.eta) continue;
      const double d = std::max({std::abs(p.theta.theta1 - q.theta.theta1),
                                 std::abs(p.theta.theta2 - q.theta.theta2),
                                 std::abs(p.theta.theta3 - q.theta.theta3)});
      min_dist = std::min(min_dist, d);
      if (d <= collision_tol) rep.collisions.push_back({i, j, d});
    }
  }
  rep.min_image_distance = std::isfinite(min_dist) ? min_dist : 0.0;
  return rep;
}

void write_theta_cloud_csv(std::ostream& os, double a, double b,
                           const std::vector<ThetaSample>& samples) {
  os << "a,b,tau,eta,branch,theta1,theta2,theta3,err\n";
  for (const ThetaSample& s : samples) {
    os << format_g17(a) << "," << format_g17(b) << "," << format_g17(s.tau) << ","
       << format_g17(s.eta) << "," << branch_name(s.branch) << ","
       << format_g17(s.theta.theta1) << "," << format_g17(s.theta.theta2) << ","
       << format_g17(s.theta.theta3) << "," << format_g17(s.theta.error_estimate)
       << "\n";
  }
}

}  // namespace jetgeo
