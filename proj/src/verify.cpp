#include "jetgeo/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <set>

#include <json.hpp>

#include "jetgeo/classify.hpp"
#include "jetgeo/dynamics.hpp"
#include "jetgeo/errors.hpp"
#include "jetgeo/io.hpp"
#include "jetgeo/momentum.hpp"
#include "jetgeo/periodmap.hpp"
#include "jetgeo/quadrature.hpp"

namespace jetgeo {

const char* status_name(CheckResult::Status s) {
  switch (s) {
    case CheckResult::Status::pass: return "pass";
    case CheckResult::Status::fail: return "fail";
    case CheckResult::Status::skipped: return "skipped";
  }
  return "?";
}

namespace {

struct Check {
  std::string id;
  std::string module;
  double tolerance;
  // Returns the measured error (max deviation / violated margin).
  std::function<double(const SuiteConfig&)> run;
};

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

// --- poly_core: factorization reconstruction over a momentum grid ---------

double check_theta_reconstruction(const SuiteConfig& cfg) {
  (void)cfg;
  double worst = 0.0;
  const double a = 1.0, b = 1.0;
  for (int i = 0; i < 20; ++i) {
    const double tau = 0.25 + 2.5 * i / 19.0;
    for (int j = 0; j < 20; ++j) {
      const double lim = std::sqrt(2.0 * tau) / std::abs(b);
      const double eta = -0.95 * lim + 1.9 * lim * j / 19.0;
      PencilMomentum nu{tau, eta, Branch::plus};
      if (!nu.in_domain(a, b)) continue;
      const ThetaCoords th = theta_coords(nu, a, b);
      const Poly W = Poly::constant(1.0) - potential(nu.poly(a, b));
      const double xp = pencil_root(a, b, tau, eta, Branch::plus);
      for (int s = 0; s < 50; ++s) {
        const double x = -xp + 2.0 * xp * s / 49.0;
        const double w = th.v1 * x + th.v2;
        const double recon = th.v3 * x * x * (1.0 - w * w);
        worst = std::max(worst, std::abs(recon - W(x)));
      }
    }
  }
  return worst;
}

// --- criterion 1: closed-form Theta^2 at eta = 0 --------------------------

double check_theta2_closed_form(const SuiteConfig& cfg) {
  double worst = 0.0;
  for (double tau : {0.5, 1.0, 2.0}) {
    const PeriodVector th = period_map(1.0, 0.0, tau, 0.0, Branch::plus, cfg.quad_tol);
    const double want = -std::sqrt(2.0) / (3.0 * std::pow(tau, 1.5));
    worst = std::max(worst, rel_err(th.theta2, want));
    worst = std::max(worst, std::abs(th.theta1));
    worst = std::max(worst, std::abs(th.theta3));
  }
  return worst;
}

// --- criterion 2: family closed forms on 10x10 grids ----------------------

double check_family_closed_forms(const SuiteConfig& cfg) {
  double worst = 0.0;
  for (int fam = 0; fam < 2; ++fam) {
    const double a = fam == 0 ? 1.0 : 0.0;
    const double b = fam == 0 ? 0.0 : 1.0;
    for (int i = 0; i < 10; ++i) {
      const double tau = 0.3 + 2.2 * i / 9.0;
      for (int j = 0; j < 10; ++j) {
        const double lim =
            b == 0.0 ? 2.0 : 0.95 * std::sqrt(2.0 * tau) / std::abs(b);
        const double eta = 0.1 + (lim - 0.1) * j / 9.0;
        const PeriodVector th = period_map(a, b, tau, eta, Branch::plus, cfg.quad_tol);
        const auto [t2, t3] = period_map_closed_form(a, b, tau, eta);
        worst = std::max(worst, rel_err(th.theta2, t2));
        worst = std::max(worst, rel_err(th.theta3, t3));
      }
    }
  }
  return worst;
}

// --- criterion 3: explicit (v1,v2,v3) closed forms vs quadrature ----------

double check_appendix_formulas(const SuiteConfig& cfg) {
  double worst = 0.0;
  const double a = 1.0, b = 1.0;
  for (int i = 0; i < 10; ++i) {
    const double tau = 0.4 + 2.1 * i / 9.0;
    for (int j = 0; j < 10; ++j) {
      const double lim = 0.92 * std::sqrt(2.0 * tau);
      const double eta = 0.08 + (lim - 0.08) * j / 9.0;
      PencilMomentum nu{tau, eta, Branch::plus};
      const PeriodVector th = period_map(a, b, tau, eta, Branch::plus, cfg.quad_tol);
      const auto [t2, t3] = period_map_appendix(a, b, theta_coords(nu, a, b));
      worst = std::max(worst, rel_err(th.theta2, t2));
      worst = std::max(worst, rel_err(th.theta3, t3));
    }
  }
  return worst;
}

// --- criterion 4: Jacobian determinants ------------------------------------

double check_jacobians(const SuiteConfig& cfg) {
  double worst = 0.0;
  // Pinned values at (tau, eta) = (1, 1).
  worst = std::max(worst,
                   rel_err(jacobian_det(1, 0, 1, 1, JacobianMode::analytic), 1.0 / 3));
  worst = std::max(worst,
                   rel_err(jacobian_det(0, 1, 1, 1, JacobianMode::analytic), 1.0));
  // FD vs analytic on 10x10 grids; nondegeneracy |det| > 1e-6 rechecked
  // against the criterion's own floor below.
  double min_abs_det = std::numeric_limits<double>::infinity();
  for (int fam = 0; fam < 2; ++fam) {
    const double a = fam == 0 ? 1.0 : 0.0;
    const double b = fam == 0 ? 0.0 : 1.0;
    for (int i = 0; i < 10; ++i) {
      const double tau = 0.4 + 1.8 * i / 9.0;
      for (int j = 0; j < 10; ++j) {
        const double lim =
            b == 0.0 ? 1.6 : 0.9 * std::sqrt(2.0 * tau) / std::abs(b);
        const double eta = 0.15 + (lim - 0.15) * j / 9.0;
        const double fd =
            jacobian_det(a, b, tau, eta, JacobianMode::finite_difference, cfg.quad_tol);
        const double an = jacobian_det(a, b, tau, eta, JacobianMode::analytic);
        worst = std::max(worst, rel_err(fd, an));
        min_abs_det = std::min(min_abs_det, std::abs(fd));
      }
    }
  }
  if (min_abs_det <= 1e-6) worst = std::max(worst, 1.0);  // degenerate point found
  return worst;
}

// --- criterion 5: sign certificates of the rho functions -------------------

double check_sign_certificates(const SuiteConfig& cfg) {
  (void)cfg;
  // Measured error = worst sign violation (0 when every margin is positive).
  double violation = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double v2 = -1.0 + 2.0 * (i + 0.5) / 1000.0;
    const RhoTable r = rho_suite(v2);
    violation = std::max(violation, -r.rho1);
    violation = std::max(violation, -r.rho2);
    violation = std::max(violation, -r.rho3);
  }
  for (int i = 0; i < 1000; ++i) {
    const double v2 = -1.0 + (i + 0.5) / 1000.0;  // (-1, 0)
    const RhoTable r = rho_suite(v2);
    violation = std::max(violation, r.disc);
  }
  return violation;
}

// --- criterion 6: symmetries ------------------------------------------------

double check_symmetries(const SuiteConfig& cfg) {
  double worst = 0.0;
  const double a = 1.0, b = 1.0;
  for (int i = 0; i < 20; ++i) {
    const double tau = 0.3 + 2.4 * i / 19.0;
    for (int j = 0; j < 20; ++j) {
      const double lim = 0.9 * std::sqrt(2.0 * tau) / std::abs(b);
      const double eta = -lim + 2.0 * lim * j / 19.0;
      // eta reflection: Theta^2 even, Theta^{1,3} odd.
      const PeriodVector tp = period_map(a, b, tau, eta, Branch::plus, cfg.quad_tol);
      const PeriodVector tm = period_map(a, b, tau, -eta, Branch::plus, cfg.quad_tol);
      worst = std::max(worst, std::abs(tp.theta2 - tm.theta2));
      worst = std::max(worst, std::abs(tp.theta1 + tm.theta1));
      worst = std::max(worst, std::abs(tp.theta3 + tm.theta3));
      // switch of hill interval: Theta^-_(a,b) = Theta^+_(a,-b).
      const PeriodVector lm = period_map(a, b, tau, eta, Branch::minus, cfg.quad_tol);
      const PeriodVector rp = period_map(a, -b, tau, eta, Branch::plus, cfg.quad_tol);
      worst = std::max(worst, std::abs(lm.theta1 - rp.theta1));
      worst = std::max(worst, std::abs(lm.theta2 - rp.theta2));
      worst = std::max(worst, std::abs(lm.theta3 - rp.theta3));
    }
  }
  // Even case 1: b = 0 makes Theta^+ = Theta^- everywhere on the grid.
  for (int i = 0; i < 20; ++i) {
    const double tau = 0.3 + 2.4 * i / 19.0;
    const double eta = -1.5 + 3.0 * i / 19.0;
    const PeriodVector tp = period_map(1.0, 0.0, tau, eta, Branch::plus, cfg.quad_tol);
    const PeriodVector tm = period_map(1.0, 0.0, tau, eta, Branch::minus, cfg.quad_tol);
    worst = std::max(worst, std::abs(tp.theta1 - tm.theta1));
    worst = std::max(worst, std::abs(tp.theta2 - tm.theta2));
    worst = std::max(worst, std::abs(tp.theta3 - tm.theta3));
  }
  // Even case 2: b != 0 needs eta = 0.
  for (int i = 0; i < 20; ++i) {
    const double tau = 0.3 + 2.4 * i / 19.0;
    const PeriodVector tp = period_map(a, b, tau, 0.0, Branch::plus, cfg.quad_tol);
    const PeriodVector tm = period_map(a, b, tau, 0.0, Branch::minus, cfg.quad_tol);
    worst = std::max(worst, std::abs(tp.theta2 - tm.theta2));
    worst = std::max(worst, std::abs(tp.theta1) + std::abs(tm.theta1));
    worst = std::max(worst, std::abs(tp.theta3) + std::abs(tm.theta3));
  }
  return worst;
}

// --- criterion 7: dynamics consistency --------------------------------------

double check_dynamics(const SuiteConfig& cfg) {
  double worst_scaled = 0.0;  // each part normalized by its own tolerance

  // (a) energy drift over t-span 50 on a periodic geodesic.
  {
    const VecPoly P(Poly{0.9, 0.0, -1.0}, Poly{0.0, 0.3});
    const Poly V = potential(P);
    const auto hills = hill_intervals(V);
    const HillInterval I = hills.back();
    IntegrateOptions opts;
    opts.tol = cfg.quad_tol;
    Trajectory tr = integrate_reduced(V, {0.0, I.x1, 0.0}, {0.0, 50.0}, opts);
    double drift = 0.0;
    for (size_t i = 0; i < tr.size(); ++i)
      drift = std::max(
          drift, std::abs(reduced_energy(V, tr.states[i][0], tr.states[i][1]) - 0.5));
    worst_scaled = std::max(worst_scaled, drift / 1e-8);
  }

  // (b) Delta map from trajectories vs quadrature on 5 monotone legs.
  {
    const double a = 1.0, b = 1.0;
    PencilMomentum nu{1.0, 1.0, Branch::plus};
    const VecPoly G = nu.poly(a, b);
    const Poly V = potential(G);
    const double xp = pencil_root(a, b, 1.0, 1.0, Branch::plus);
    IntegrateOptions opts;
    opts.tol = 1e-12;
    opts.max_step = 0.05;
    Trajectory red = integrate_reduced(V, {0.0, xp, 0.0}, {0.0, 12.0}, opts);
    Trajectory mag = geodesic_magnetic(a, b, nu, red, {xp, 0, 0, 0, 0}, opts);
    // x decreases monotonically from x+ toward 0 for t > 0.
    auto t_of_x = [&](double x) {
      double lo = mag.times.front(), hi = mag.times.back();
      for (int it = 0; it < 200; ++it) {
        double m = 0.5 * (lo + hi);
        if (mag.state_at(m)[0] > x)
          lo = m;
        else
          hi = m;
      }
      return 0.5 * (lo + hi);
    };
    for (int leg = 0; leg < 5; ++leg) {
      const double xa = xp * (0.15 + 0.12 * leg);
      const double xb = xp * (0.45 + 0.10 * leg);
      const double ta = t_of_x(xb), tb = t_of_x(xa);  // xb reached first
      const auto sa = mag.state_at(ta), sb = mag.state_at(tb);
      const DeltaResult d = delta_map(a, b, nu, xa, xb, cfg.quad_tol);
      worst_scaled = std::max(worst_scaled, std::abs((tb - ta) - d.dt) / 1e-6);
      worst_scaled = std::max(worst_scaled, std::abs((sb[1] - sa[1]) - d.dy1) / 1e-6);
      worst_scaled = std::max(worst_scaled, std::abs((sb[2] - sa[2]) - d.dy2) / 1e-6);
      worst_scaled = std::max(worst_scaled, std::abs((sb[3] - sa[3]) - d.dz1) / 1e-6);
      worst_scaled = std::max(worst_scaled, std::abs((sb[4] - sa[4]) - d.dz2) / 1e-6);
    }

    // (c) projection of the horizontal lift vs the direct magnetic geodesic.
    JetPoint jstart = JetPoint::origin();
    jstart.x = xp;
    Trajectory red2 = integrate_reduced(V, {0.0, xp, 0.0}, {0.0, 6.0}, opts);
    Trajectory jet = lift_jet(G, red2, jstart, opts);
    Trajectory proj = project_magnetic(a, b, jet);
    Trajectory mag2 = geodesic_magnetic(a, b, nu, red2, {xp, 0, 0, 0, 0}, opts);
    const double t_end = std::min(proj.times.back(), mag2.times.back());
    for (int i = 0; i <= 40; ++i) {
      const double t = proj.times.front() + (t_end - proj.times.front()) * i / 40.0;
      const auto u = proj.state_at(t);
      const auto v = mag2.state_at(t);
      for (int c = 0; c < 5; ++c)
        worst_scaled = std::max(worst_scaled, std::abs(u[c] - v[c]) / 1e-6);
    }
  }
  return worst_scaled;  // tolerance 1 (each part pre-scaled)
}

// --- criterion 8: injectivity evidence ---------------------------------------

double check_injectivity(const SuiteConfig& cfg) {
  double worst = 0.0;
  for (int fam = 0; fam < 2; ++fam) {
    const double a = fam == 0 ? 1.0 : 0.0;
    const double b = fam == 0 ? 0.0 : 1.0;
    GridSpec g;  // defaults: tau in [0.2,3], eta in [-2,2], 40x40
    const InjectivityReport rep = injectivity_probe(a, b, g, Branch::plus, 1e-7,
                                                    cfg.quad_tol);
    worst = std::max(worst, static_cast<double>(rep.collisions.size()));
  }
  // Theta^+ / Theta^- overlay for (1,1): off the eta = 0 axis the images may
  // only meet at eta = 0 values; measure the closest cross pair.
  {
    GridSpec g;
    g.n_tau = 20;
    g.n_eta = 21;  // odd count puts eta = 0 on the grid
    const auto plus = injectivity_probe(1, 1, g, Branch::plus, 1e-7, cfg.quad_tol);
    const auto minus = injectivity_probe(1, 1, g, Branch::minus, 1e-7, cfg.quad_tol);
    double min_cross = std::numeric_limits<double>::infinity();
    for (const auto& p : plus.samples) {
      if (p.eta == 0.0) continue;
      for (const auto& q : minus.samples) {
        if (q.eta == 0.0) continue;
        const double d = std::max({std::abs(p.theta.theta1 - q.theta.theta1),
                                   std::abs(p.theta.theta2 - q.theta.theta2),
                                   std::abs(p.theta.theta3 - q.theta.theta3)});
        min_cross = std::min(min_cross, d);
      }
    }
    if (min_cross <= 1e-7) worst = std::max(worst, 1.0);
    // And at eta = 0 the two branches must agree (they do meet there).
    for (const auto& p : plus.samples) {
      if (p.eta != 0.0) continue;
      for (const auto& q : minus.samples) {
        if (q.eta != 0.0 || q.tau != p.tau) continue;
        if (std::abs(p.theta.theta2 - q.theta.theta2) > 1e-8)
          worst = std::max(worst, 1.0);
      }
    }
  }
  return worst;
}

// --- criterion 9: classification ----------------------------------------------

double check_classification(const SuiteConfig& cfg) {
  (void)cfg;
  double worst = 0.0;
  const std::pair<double, double> fams[] = {{1, 1}, {1, 0}, {0, 1}, {1, -1}, {0.5, 0.7}};
  for (auto [a, b] : fams) {
    for (int i = 0; i < 6; ++i) {
      const double tau = 0.4 + 2.0 * i / 5.0;
      for (int j = 0; j < 6; ++j) {
        const double lim = b == 0.0 ? 1.8 : 0.9 * std::sqrt(2.0 * tau) / std::abs(b);
        const double eta = -lim + 2.0 * lim * j / 5.0;
        for (Branch br : {Branch::plus, Branch::minus}) {
          PencilMomentum nu{tau, eta, br};
          if (!nu.in_domain(a, b)) continue;
          const VecPoly G = nu.poly(a, b);
          const Poly V = potential(G);
          const double root = pencil_root(a, b, tau, eta, br);
          // The root from the generic isolator must match the closed form.
          const auto hills = hill_intervals(V);
          const HillInterval* I = nullptr;
          for (const auto& h : hills) {
            if (br == Branch::plus && h.is_bounded() && std::abs(h.x0) < 1e-9 &&
                h.x1 > 1e-9)
              I = &h;
            if (br == Branch::minus && h.is_bounded() && std::abs(h.x1) < 1e-9 &&
                h.x0 < -1e-9)
              I = &h;
          }
          if (!I) {
            worst = std::max(worst, 1.0);
            continue;
          }
          const double found = br == Branch::plus ? I->x1 : I->x0;
          if (std::abs(found - root) > 1e-10) worst = std::max(worst, 1.0);
          const GeodesicType g = classify_geodesic(G, *I);
          if (g.kind != GeodesicKind::Homoclinic) worst = std::max(worst, 1.0);
          if (g.kind == GeodesicKind::Direct || g.kind == GeodesicKind::TurnBack)
            worst = std::max(worst, 1.0);
        }
      }
    }
  }
  // Constants classify as Line.
  const VecPoly c(Poly{0.3}, Poly{0.4});
  const auto hills = hill_intervals(potential(c));
  if (classify_geodesic(c, hills.front()).kind != GeodesicKind::Line)
    worst = std::max(worst, 1.0);
  return worst;
}

std::vector<Check> make_checks() {
  return {
      {"ac0_theta_reconstruction", "poly_core", 1e-10, check_theta_reconstruction},
      {"ac1_theta2_closed_form", "quadrature", 1e-8, check_theta2_closed_form},
      {"ac2_family_closed_forms", "periodmap", 1e-6, check_family_closed_forms},
      {"ac3_appendix_formulas", "periodmap", 1e-6, check_appendix_formulas},
      {"ac4_jacobians", "periodmap", 1e-4, check_jacobians},
      {"ac5_sign_certificates", "periodmap", 0.0, check_sign_certificates},
      {"ac6_symmetries", "periodmap", 1e-8, check_symmetries},
      {"ac7_dynamics_consistency", "dynamics", 1.0, check_dynamics},
      {"ac8_injectivity", "periodmap", 0.0, check_injectivity},
      {"ac9_classification", "classify", 0.0, check_classification},
  };
}

}  // namespace

std::vector<std::string> known_modules() {
  std::set<std::string> mods;
  for (const Check& c : make_checks()) mods.insert(c.module);
  return {mods.begin(), mods.end()};
}

std::vector<CheckResult> run_suite(const SuiteConfig& config) {
  std::vector<Check> checks = make_checks();
  if (!config.modules.empty()) {
    checks.erase(std::remove_if(checks.begin(), checks.end(),
                                [&](const Check& c) {
                                  return std::find(config.modules.begin(),
                                                   config.modules.end(),
                                                   c.module) == config.modules.end();
                                }),
                 checks.end());
  }
  std::vector<CheckResult> results(checks.size());
  parallel_for(checks.size(), [&](size_t i) {
    const Check& c = checks[i];
    CheckResult r;
    r.id = c.id;
    r.module = c.module;
    r.tolerance = config.tolerance_override.value_or(c.tolerance);
    const auto start = std::chrono::steady_clock::now();
    try {
      r.measured_error = c.run(config);
      r.status = r.measured_error <= r.tolerance ? CheckResult::Status::pass
                                                 : CheckResult::Status::fail;
    } catch (const Error& e) {
      r.status = CheckResult::Status::fail;
      r.measured_error = std::numeric_limits<double>::infinity();
      r.detail = e.what();
    }
    r.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results[i] = r;
  });
  std::sort(results.begin(), results.end(),
            [](const CheckResult& a, const CheckResult& b) { return a.id < b.id; });
  return results;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (r.status != CheckResult::Status::pass) return false;
  return true;
}

void write_report_json(std::ostream& os, const std::vector<CheckResult>& results) {
  nlohmann::ordered_json j;
  j["schema"] = "jetgeo/1";
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    nlohmann::ordered_json c;
    c["id"] = r.id;
    c["module"] = r.module;
    c["status"] = status_name(r.status);
    c["measured_error"] = r.measured_error;
    c["tolerance"] = r.tolerance;
    c["runtime_seconds"] = r.runtime_seconds;
    if (!r.detail.empty()) c["detail"] = r.detail;
    j["checks"].push_back(c);
  }
  j["all_pass"] = all_passed(results);
  os << j.dump(2) << "\n";
}

}  // namespace jetgeo
