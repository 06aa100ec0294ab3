// jetgeo: sub-Riemannian geodesics in the 2-jet space of plane curves and
// its five-dimensional magnetic quotient. Batch computations only; every
// command emits CSV/JSON for external plotting.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jetgeo/classify.hpp"
#include "jetgeo/dynamics.hpp"
#include "jetgeo/errors.hpp"
#include "jetgeo/io.hpp"
#include "jetgeo/momentum.hpp"
#include "jetgeo/periodmap.hpp"
#include "jetgeo/quadrature.hpp"
#include "jetgeo/verify.hpp"

namespace {

using namespace jetgeo;

constexpr int kExitUsage = 2;
constexpr int kExitIntegrator = 3;

double default_tol() {
  if (const char* env = std::getenv("JETGEO_TOL")) {
    try {
      double v = std::stod(env);
      if (v > 0) return v;
    } catch (...) {
    }
    std::cerr << "warning: ignoring malformed JETGEO_TOL\n";
  }
  return 1e-10;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw DomainError("cannot open output file: " + path);
  return file;
}

Branch parse_branch(const std::string& s) {
  if (s == "+" || s == "plus") return Branch::plus;
  if (s == "-" || s == "minus") return Branch::minus;
  throw DomainError("branch must be + or -");
}

struct MomentumArgs {
  std::optional<double> a, b, tau, eta;
  std::string branch = "+";
  std::vector<double> mu;

  bool has_pencil() const { return a && b; }

  void validate_pencil() const {
    if (!has_pencil())
      throw DomainError("missing --a/--b for the magnetic pipeline");
    if (*a == 0.0 && *b == 0.0)
      throw DomainError("(a, b) = (0, 0) is excluded: the motion quotients to "
                        "the scalar-curve jet space");
  }
};

void add_momentum_flags(CLI::App* cmd, MomentumArgs& m) {
  cmd->add_option("--a", m.a, "base polynomial parameter a");
  cmd->add_option("--b", m.b, "base polynomial parameter b");
  cmd->add_option("--tau", m.tau, "pencil parameter tau");
  cmd->add_option("--eta", m.eta, "pencil parameter eta");
  cmd->add_option("--branch", m.branch, "hill interval branch, + or - (default +)");
  cmd->add_option("--mu", m.mu,
                  "six momentum coefficients a0_1,a0_2,a1_1,a1_2,a2_1,a2_2")
      ->delimiter(',')
      ->expected(6);
}

nlohmann::ordered_json interval_json(const HillInterval& h) {
  nlohmann::ordered_json j;
  j["x0"] = h.unbounded_below ? "-inf" : format_g17(h.x0);
  j["x1"] = h.unbounded_above ? "+inf" : format_g17(h.x1);
  j["mult0"] = h.mult0;
  j["mult1"] = h.mult1;
  return j;
}

std::string interval_text(const HillInterval& h) {
  std::ostringstream os;
  os << "[" << (h.unbounded_below ? "-inf" : format_g17(h.x0)) << ", "
     << (h.unbounded_above ? "+inf" : format_g17(h.x1)) << "]";
  return os.str();
}

// Trajectory CSV plus a unit-speed check column: the norm of the velocity in
// the horizontal block (x and the top layer / y-pair), which is 1 on an
// arc-length geodesic.
void write_csv_with_speed(std::ostream& os, const Trajectory& tr) {
  os << "t";
  for (const auto& c : tr.columns) os << "," << c;
  os << ",speed\n";
  for (size_t i = 0; i < tr.size(); ++i) {
    os << format_g17(tr.times[i]);
    for (double v : tr.states[i]) os << "," << format_g17(v);
    const auto& d = tr.derivs[i];
    const double speed = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    os << "," << format_g17(speed) << "\n";
  }
}

// ---------------------------------------------------------------- classify

int run_classify(const MomentumArgs& m, bool as_json, const std::string& out_path) {
  VecPoly P(Poly{0.0}, Poly{0.0});
  std::string label;
  if (!m.mu.empty()) {
    std::array<double, 6> c;
    std::copy(m.mu.begin(), m.mu.end(), c.begin());
    Momentum mom = Momentum::from_coefficients(c);
    P = mom.poly();
    label = "mu";
  } else {
    m.validate_pencil();
    if (!m.tau || !m.eta) throw DomainError("classify needs --tau and --eta (or --mu)");
    PencilMomentum nu{*m.tau, *m.eta, parse_branch(m.branch)};
    if (!nu.in_domain(*m.a, *m.b))
      throw DomainError("(tau, eta) outside the admissible set for this branch");
    P = nu.poly(*m.a, *m.b);
    label = "nu";
  }

  const Poly V = potential(P);
  const auto hills = hill_intervals(V);
  const auto eqs = equilibria(P);

  std::ofstream file;
  std::ostream& os = open_out(file, out_path);
  if (as_json) {
    nlohmann::ordered_json j;
    j["schema"] = "jetgeo/1";
    j["momentum"] = label;
    j["intervals"] = nlohmann::ordered_json::array();
    for (const auto& h : hills) {
      auto ij = interval_json(h);
      ij["type"] = geodesic_kind_name(classify_geodesic(P, h).kind);
      j["intervals"].push_back(ij);
    }
    j["equilibria"] = nlohmann::ordered_json::array();
    for (double e : eqs) j["equilibria"].push_back(format_g17(e));
    os << j.dump(2) << "\n";
  } else {
    for (const auto& h : hills) {
      os << geodesic_kind_name(classify_geodesic(P, h).kind) << "  I = "
         << interval_text(h) << "\n";
    }
    os << "equilibria:";
    if (eqs.empty()) os << " none";
    for (double e : eqs) os << " " << format_g17(e);
    os << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- geodesic

int run_geodesic(const MomentumArgs& m, const std::string& space,
                 std::vector<double> window, const std::string& out_path,
                 double tol) {
  if (window.size() != 2 || !(window[0] < window[1]))
    throw DomainError("--window needs t0,t1 with t0 < t1");
  IntegrateOptions opts;
  opts.tol = tol;

  Trajectory tr;
  if (space == "jet" && !m.mu.empty()) {
    std::array<double, 6> c;
    std::copy(m.mu.begin(), m.mu.end(), c.begin());
    Momentum mom = Momentum::from_coefficients(c);
    const VecPoly P = mom.poly();
    const Poly V = potential(P);
    // Start on the hill boundary of the interval through/right of 0, or at
    // x = 0 for a line geodesic.
    double x0 = 0.0, p0 = 0.0;
    if (P.is_constant()) {
      const double v = V(0.0);
      if (v >= 1.0) throw DomainError("constant polynomial with |P| >= 1");
      p0 = std::sqrt(1.0 - v);
    } else {
      const auto hills = hill_intervals(V);
      const HillInterval& I = hills.back();
      if (!I.is_bounded()) throw DomainError("unbounded hill interval");
      x0 = I.mult1 >= 2 ? I.x0 : I.x1;  // start at a simple boundary root
      if ((I.mult1 >= 2 ? I.mult0 : I.mult1) >= 2)
        throw DomainError("both hill endpoints are equilibria");
    }
    ReducedState s0{p0, x0, 0.0};
    if (window[0] > 0 || window[1] < 0) s0.t = window[0];
    Trajectory red = integrate_reduced(V, s0, {window[0], window[1]}, opts);
    JetPoint start = JetPoint::origin();
    start.x = x0;
    tr = lift_jet(P, red, start, opts);
  } else {
    m.validate_pencil();
    PencilMomentum nu{m.tau.value_or(1.0), m.eta.value_or(1.0), parse_branch(m.branch)};
    if (!nu.in_domain(*m.a, *m.b))
      throw DomainError("(tau, eta) outside the admissible set for this branch");
    const VecPoly G = nu.poly(*m.a, *m.b);
    const Poly V = potential(G);
    const double xp = pencil_root(*m.a, *m.b, nu.tau, nu.eta, nu.branch);
    ReducedState s0{0.0, xp, 0.0};
    if (window[0] > 0 || window[1] < 0) s0.t = window[0];
    Trajectory red = integrate_reduced(V, s0, {window[0], window[1]}, opts);
    if (space == "reduced") {
      tr = red;
    } else if (space == "jet") {
      JetPoint start = JetPoint::origin();
      start.x = xp;
      tr = lift_jet(G, red, start, opts);
    } else if (space == "magnetic") {
      tr = geodesic_magnetic(*m.a, *m.b, nu, red, {xp, 0, 0, 0, 0}, opts);
    } else {
      throw DomainError("--space must be reduced, jet, or magnetic");
    }
  }

  if (tr.truncated)
    std::cerr << "warning: window truncated near an equilibrium (asymptotic "
                 "approach; expected for homoclinic runs)\n";

  std::ofstream file;
  std::ostream& os = open_out(file, out_path);
  if (tr.kind == TrajectoryKind::Reduced)
    tr.write_csv(os);
  else
    write_csv_with_speed(os, tr);
  return 0;
}

// ---------------------------------------------------------------- periodmap

int run_pm_eval(const MomentumArgs& m, double tol, bool as_json) {
  m.validate_pencil();
  if (!m.tau || !m.eta) throw DomainError("eval needs --tau and --eta");
  const PeriodVector th =
      period_map(*m.a, *m.b, *m.tau, *m.eta, parse_branch(m.branch), tol);
  if (as_json) {
    nlohmann::ordered_json j;
    j["schema"] = "jetgeo/1";
    j["theta1"] = th.theta1;
    j["theta2"] = th.theta2;
    j["theta3"] = th.theta3;
    j["error_estimate"] = th.error_estimate;
    j["branch"] = branch_name(th.branch);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "(" << format_g17(th.theta1) << ", " << format_g17(th.theta2)
              << ", " << format_g17(th.theta3) << ")  err<=" << format_g17(th.error_estimate)
              << "\n";
  }
  return 0;
}

int run_pm_sweep(const MomentumArgs& m, const GridSpec& grid, const std::string& branch,
                 const std::string& out_path, double tol) {
  m.validate_pencil();
  std::vector<ThetaSample> all;
  auto sweep_one = [&](Branch br) {
    InjectivityReport rep = injectivity_probe(*m.a, *m.b, grid, br, 1e-7, tol);
    all.insert(all.end(), rep.samples.begin(), rep.samples.end());
  };
  if (branch == "both") {
    sweep_one(Branch::plus);
    sweep_one(Branch::minus);
  } else {
    sweep_one(parse_branch(branch));
  }
  std::ofstream file;
  std::ostream& os = open_out(file, out_path);
  write_theta_cloud_csv(os, *m.a, *m.b, all);
  return 0;
}

int run_pm_jacobian(const MomentumArgs& m, const std::string& mode, double tol) {
  m.validate_pencil();
  if (!m.tau || !m.eta) throw DomainError("jacobian needs --tau and --eta");
  nlohmann::ordered_json j;
  j["schema"] = "jetgeo/1";
  const bool family = (*m.a == 0.0) != (*m.b == 0.0);
  if (mode == "analytic" || mode == "both") {
    if (family) {
      j["analytic"] = jacobian_det(*m.a, *m.b, *m.tau, *m.eta, JacobianMode::analytic);
    } else {
      const JacobianCertificate c = jacobian_certificate(*m.a, *m.b, *m.tau, *m.eta);
      j["certificate"] = {{"df1_block", c.df1_block},
                          {"dtheta2_dv3", c.dtheta2_dv3},
                          {"condition", c.condition},
                          {"definite_margin", c.definite_margin},
                          {"nonzero", c.nonzero}};
    }
  }
  if (mode == "finite_difference" || mode == "fd" || mode == "both") {
    j["finite_difference"] =
        jacobian_det(*m.a, *m.b, *m.tau, *m.eta, JacobianMode::finite_difference, tol);
  }
  if (mode == "certificate") {
    const JacobianCertificate c = jacobian_certificate(*m.a, *m.b, *m.tau, *m.eta);
    j["certificate"] = {{"df1_block", c.df1_block},
                        {"dtheta2_dv3", c.dtheta2_dv3},
                        {"condition", c.condition},
                        {"definite_margin", c.definite_margin},
                        {"nonzero", c.nonzero}};
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_pm_rho(int n, double lo, double hi, const std::string& out_path) {
  if (n < 2 || !(lo < hi) || lo < -1.0 || hi > 1.0)
    throw DomainError("rho grid must satisfy -1 <= lo < hi <= 1, n >= 2");
  std::ofstream file;
  std::ostream& os = open_out(file, out_path);
  os << "theta2,rho1,rho2,rho3,rho4,rho5,rho6,disc\n";
  for (int i = 0; i < n; ++i) {
    const double v2 = lo + (hi - lo) * i / (n - 1.0);
    const RhoTable r = rho_suite(v2);
    os << format_g17(v2) << "," << format_g17(r.rho1) << "," << format_g17(r.rho2)
       << "," << format_g17(r.rho3) << "," << format_g17(r.rho4) << ","
       << format_g17(r.rho5) << "," << format_g17(r.rho6) << ","
       << format_g17(r.disc) << "\n";
  }
  return 0;
}

int run_pm_inject(const MomentumArgs& m, const GridSpec& grid,
                  const std::string& out_path, const std::string& cloud_path,
                  double tol) {
  m.validate_pencil();
  const InjectivityReport rep =
      injectivity_probe(*m.a, *m.b, grid, Branch::plus, 1e-7, tol);
  nlohmann::ordered_json j;
  j["schema"] = "jetgeo/1";
  j["a"] = *m.a;
  j["b"] = *m.b;
  j["grid_spec"] = {{"tau_min", rep.grid.tau_min}, {"tau_max", rep.grid.tau_max},
                    {"n_tau", rep.grid.n_tau},     {"eta_min", rep.grid.eta_min},
                    {"eta_max", rep.grid.eta_max}, {"n_eta", rep.grid.n_eta},
                    {"boundary_margin", rep.grid.boundary_margin}};
  j["collision_tol"] = rep.collision_tol;
  j["points"] = rep.samples.size();
  j["collisions"] = nlohmann::ordered_json::array();
  for (const auto& c : rep.collisions) {
    j["collisions"].push_back({{"tau_i", rep.samples[c.i].tau},
                               {"eta_i", rep.samples[c.i].eta},
                               {"tau_j", rep.samples[c.j].tau},
                               {"eta_j", rep.samples[c.j].eta},
                               {"dist", c.dist}});
  }
  j["min_image_distance"] = rep.min_image_distance;
  std::ofstream file;
  std::ostream& os = open_out(file, out_path);
  os << j.dump(2) << "\n";
  if (!cloud_path.empty()) {
    std::ofstream cf(cloud_path);
    if (!cf) throw DomainError("cannot open output file: " + cloud_path);
    write_theta_cloud_csv(cf, *m.a, *m.b, rep.samples);
  }
  return 0;
}

// ---------------------------------------------------------------- verify

int run_verify(const std::string& config_path, std::vector<std::string> modules,
               std::optional<double> tol_override, const std::string& out_path,
               double quad_tol) {
  SuiteConfig cfg;
  cfg.quad_tol = quad_tol;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw DomainError("cannot open config: " + config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw DomainError(std::string("bad config: ") + e.what());
    }
    for (auto& [key, value] : j.items()) {
      if (key == "modules") {
        cfg.modules = value.get<std::vector<std::string>>();
      } else if (key == "tolerance_override") {
        cfg.tolerance_override = value.get<double>();
      } else if (key == "quad_tol") {
        cfg.quad_tol = value.get<double>();
      } else {
        throw DomainError("bad config: unknown key '" + key + "'");
      }
    }
  }
  if (!modules.empty()) cfg.modules = std::move(modules);
  if (tol_override) cfg.tolerance_override = tol_override;
  const auto known = known_modules();
  for (const auto& mod : cfg.modules)
    if (std::find(known.begin(), known.end(), mod) == known.end())
      throw DomainError("bad config: unknown module '" + mod + "'");

  const auto results = run_suite(cfg);
  for (const auto& r : results) {
    std::cout << (r.status == CheckResult::Status::pass ? "[PASS] " : "[FAIL] ")
              << r.id << "  err=" << format_g17(r.measured_error)
              << " tol=" << format_g17(r.tolerance) << "  (" << r.runtime_seconds
              << "s)\n";
  }
  if (!out_path.empty()) {
    std::ofstream file(out_path);
    if (!file) throw DomainError("cannot open output file: " + out_path);
    write_report_json(file, results);
  }
  return all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geodesics, period maps, and invariant checks for the 2-jet "
               "space of plane curves and its magnetic quotient"};
  app.require_subcommand(1);
  double tol = default_tol();
  app.add_option("--tol", tol, "quadrature/integration tolerance (or env JETGEO_TOL)");

  // classify
  auto* c_cmd = app.add_subcommand("classify", "hill intervals, equilibria, and "
                                               "geodesic type");
  MomentumArgs c_m;
  add_momentum_flags(c_cmd, c_m);
  bool c_json = false;
  std::string c_out;
  c_cmd->add_flag("--json", c_json, "JSON output");
  c_cmd->add_option("--out", c_out, "output path (default stdout)");

  // geodesic
  auto* g_cmd = app.add_subcommand("geodesic", "integrate a geodesic and write CSV");
  MomentumArgs g_m;
  add_momentum_flags(g_cmd, g_m);
  std::string g_space = "magnetic", g_out;
  std::vector<double> g_window{-5.0, 5.0};
  g_cmd->add_option("--space", g_space, "reduced | jet | magnetic");
  g_cmd->add_option("--window", g_window, "time window t0,t1")
      ->delimiter(',')
      ->expected(2);
  g_cmd->add_option("--out", g_out, "output CSV path (default stdout)");

  // periodmap + subcommands
  auto* p_cmd = app.add_subcommand("periodmap", "period map evaluation and probes");
  p_cmd->require_subcommand(1);
  MomentumArgs p_m;
  GridSpec grid;
  std::string p_out, p_cloud, p_mode = "both", p_branch = "+";
  bool p_json = false;

  auto add_grid_flags = [&grid](CLI::App* cmd) {
    cmd->add_option("--tau-min", grid.tau_min);
    cmd->add_option("--tau-max", grid.tau_max);
    cmd->add_option("--n-tau", grid.n_tau);
    cmd->add_option("--eta-min", grid.eta_min);
    cmd->add_option("--eta-max", grid.eta_max);
    cmd->add_option("--n-eta", grid.n_eta);
    cmd->add_option("--margin", grid.boundary_margin,
                    "exclusion margin on 2 tau - b^2 eta^2");
  };

  auto* pe = p_cmd->add_subcommand("eval", "evaluate the period map at one point");
  add_momentum_flags(pe, p_m);
  pe->add_flag("--json", p_json, "JSON output");

  auto* ps = p_cmd->add_subcommand("sweep", "grid sweep; CSV point cloud");
  add_momentum_flags(ps, p_m);
  add_grid_flags(ps);
  ps->add_option("--branch-set", p_branch, "+ | - | both");
  ps->add_option("--out", p_out, "output CSV path (default stdout)");

  auto* pj = p_cmd->add_subcommand("jacobian", "analytic / FD determinant");
  add_momentum_flags(pj, p_m);
  pj->add_option("--mode", p_mode, "analytic | finite_difference | both | certificate");

  auto* pi = p_cmd->add_subcommand("inject", "injectivity probe; JSON report");
  add_momentum_flags(pi, p_m);
  add_grid_flags(pi);
  pi->add_option("--out", p_out, "report path (default stdout)");
  pi->add_option("--cloud", p_cloud, "optional CSV point cloud path");

  auto* pr = p_cmd->add_subcommand("rho", "tabulate the arccos/sqrt auxiliaries");
  int rho_n = 1000;
  double rho_lo = -1.0, rho_hi = 1.0;
  pr->add_option("--n", rho_n, "number of grid points");
  pr->add_option("--lo", rho_lo, "lower theta2 bound");
  pr->add_option("--hi", rho_hi, "upper theta2 bound");
  pr->add_option("--out", p_out, "output CSV path (default stdout)");

  // verify
  auto* v_cmd = app.add_subcommand("verify", "run the invariant suite");
  std::string v_config, v_out;
  std::vector<std::string> v_modules;
  std::optional<double> v_tol_override;
  v_cmd->add_option("--config", v_config, "JSON config file");
  v_cmd->add_option("--module", v_modules, "restrict to module(s)");
  v_cmd->add_option("--tolerance-override", v_tol_override,
                    "replace every check tolerance");
  v_cmd->add_option("--out", v_out, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (c_cmd->parsed()) return run_classify(c_m, c_json, c_out);
    if (g_cmd->parsed()) return run_geodesic(g_m, g_space, g_window, g_out, tol);
    if (p_cmd->parsed()) {
      if (pe->parsed()) return run_pm_eval(p_m, tol, p_json);
      if (ps->parsed()) return run_pm_sweep(p_m, grid, p_branch, p_out, tol);
      if (pj->parsed()) return run_pm_jacobian(p_m, p_mode, tol);
      if (pi->parsed()) return run_pm_inject(p_m, grid, p_out, p_cloud, tol);
      if (pr->parsed()) return run_pm_rho(rho_n, rho_lo, rho_hi, p_out);
    }
    if (v_cmd->parsed())
      return run_verify(v_config, v_modules, v_tol_override, v_out, tol);
  } catch (const StepUnderflow& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIntegrator;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
