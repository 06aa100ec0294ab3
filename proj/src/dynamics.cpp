#include "jetgeo/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "jetgeo/errors.hpp"
#include "jetgeo/io.hpp"

namespace jetgeo {

namespace {

using Rhs = std::function<void(double t, const std::vector<double>&, std::vector<double>&)>;

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 4th-order embedded weights (include the FSAL stage).
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

struct StepResult {
  std::vector<double> y;
  std::vector<double> dy;  // derivative at the new point (FSAL)
  double error;            // scaled local error
};

StepResult dp_step(const Rhs& f, double t, const std::vector<double>& y,
                   const std::vector<double>& dy, double h, double tol) {
  const size_t n = y.size();
  std::vector<double> k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n);
  auto stage = [&](double ct, auto&&... terms) {
    for (size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      ((acc += terms.first * terms.second[i]), ...);
      tmp[i] = y[i] + h * acc;
    }
    (void)ct;
  };
  using P = std::pair<double, const std::vector<double>&>;
  stage(c2, P{a21, dy});
  f(t + c2 * h, tmp, k2);
  stage(c3, P{a31, dy}, P{a32, k2});
  f(t + c3 * h, tmp, k3);
  stage(c4, P{a41, dy}, P{a42, k2}, P{a43, k3});
  f(t + c4 * h, tmp, k4);
  stage(c5, P{a51, dy}, P{a52, k2}, P{a53, k3}, P{a54, k4});
  f(t + c5 * h, tmp, k5);
  stage(1.0, P{a61, dy}, P{a62, k2}, P{a63, k3}, P{a64, k4}, P{a65, k5});
  f(t + h, tmp, k6);

  StepResult r;
  r.y.resize(n);
  for (size_t i = 0; i < n; ++i)
    r.y[i] = y[i] + h * (b1 * dy[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
  f(t + h, r.y, k7);
  r.dy = k7;

  double err = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double y4 = y[i] + h * (e1 * dy[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                            e6 * k6[i] + e7 * k7[i]);
    double sc = tol + tol * std::max(std::abs(y[i]), std::abs(r.y[i]));
    err = std::max(err, std::abs(r.y[i] - y4) / sc);
  }
  r.error = err;
  return r;
}

struct Piece {
  std::vector<double> t;
  std::vector<std::vector<double>> y;
  std::vector<std::vector<double>> dy;
  bool truncated = false;
};

// Integrate from t0 to t1 (either direction). stop(y, dy) may end the run
// early (equilibrium truncation).
Piece integrate_dir(const Rhs& f, std::vector<double> y0, double t0, double t1,
                    const IntegrateOptions& opts,
                    const std::function<bool(const std::vector<double>&)>& stop) {
  Piece out;
  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  double t = t0;
  std::vector<double> y = std::move(y0);
  std::vector<double> dy(y.size());
  f(t, y, dy);
  out.t.push_back(t);
  out.y.push_back(y);
  out.dy.push_back(dy);
  if (t0 == t1) return out;

  double h = dir * std::min(opts.max_step, std::abs(t1 - t0) / 10.0);
  const double hmin = 1e-14 * std::max(1.0, std::max(std::abs(t0), std::abs(t1)));
  while (dir * (t1 - t) > 0.0) {
    if (std::abs(h) > opts.max_step) h = dir * opts.max_step;
    bool last = false;
    if (dir * (t + h - t1) >= 0.0) {
      h = t1 - t;
      last = true;
    }
    if (std::abs(h) < hmin) {
      if (last) break;  // endpoint reached within roundoff
      if (stop && stop(y)) {
        out.truncated = true;
        return out;
      }
      throw StepUnderflow("integrator: step size underflow");
    }
    StepResult s = dp_step(f, t, y, dy, h, opts.tol);
    if (s.error <= 1.0) {
      t = last ? t1 : t + h;
      y = std::move(s.y);
      dy = std::move(s.dy);
      out.t.push_back(t);
      out.y.push_back(y);
      out.dy.push_back(dy);
      if (stop && stop(y)) {
        out.truncated = true;
        return out;
      }
    }
    double fac = 0.9 * std::pow(std::max(s.error, 1e-10), -0.2);
    h *= std::clamp(fac, 0.2, 5.0);
  }
  return out;
}

// Merge a backward piece (from t_mid down to t0) and a forward piece.
void splice(Trajectory& tr, Piece back, Piece fwd) {
  tr.truncated = back.truncated || fwd.truncated;
  const size_t nb = back.t.size();
  tr.times.reserve(nb + fwd.t.size());
  for (size_t i = nb; i-- > 0;) {
    tr.times.push_back(back.t[i]);
    tr.states.push_back(std::move(back.y[i]));
    tr.derivs.push_back(std::move(back.dy[i]));
  }
  for (size_t i = 1; i < fwd.t.size(); ++i) {  // skip duplicated midpoint
    tr.times.push_back(fwd.t[i]);
    tr.states.push_back(std::move(fwd.y[i]));
    tr.derivs.push_back(std::move(fwd.dy[i]));
  }
  if (tr.times.empty() && !fwd.t.empty()) {
    tr.times.push_back(fwd.t[0]);
    tr.states.push_back(std::move(fwd.y[0]));
    tr.derivs.push_back(std::move(fwd.dy[0]));
  }
}

Trajectory co_integrate(const Rhs& f, TrajectoryKind kind,
                        std::vector<std::string> columns, std::vector<double> y0,
                        double t_start, std::array<double, 2> span,
                        const IntegrateOptions& opts,
                        const std::function<bool(const std::vector<double>&)>& stop) {
  if (!(span[0] <= t_start && t_start <= span[1]))
    throw DomainError("integrator: start time outside the window");
  Trajectory tr;
  tr.kind = kind;
  tr.columns = std::move(columns);
  tr.t_start = t_start;
  tr.start_state = y0;
  tr.tol = opts.tol;
  Piece back = integrate_dir(f, y0, t_start, span[0], opts, stop);
  Piece fwd = integrate_dir(f, y0, t_start, span[1], opts, stop);
  splice(tr, std::move(back), std::move(fwd));
  return tr;
}

// Numerically reachable equilibrium-capture radius: energy conservation at
// local tolerance `tol` keeps |p_x| above ~sqrt(tol) near the saddle, so the
// literal asymptotic threshold is scaled with the integrator tolerance.
double capture_eps(double tol) { return std::max(1e-12, 10.0 * std::sqrt(tol)); }

}  // namespace

JetPoint JetPoint::origin(int k, int n) {
  JetPoint p;
  p.u.assign(k + 1, std::vector<double>(n, 0.0));
  return p;
}

std::vector<double> Trajectory::state_at(double t) const {
  if (times.empty()) throw DomainError("trajectory: empty");
  if (t < times.front() - 1e-12 || t > times.back() + 1e-12)
    throw DomainError("trajectory: time outside sampled window");
  t = std::clamp(t, times.front(), times.back());
  auto it = std::upper_bound(times.begin(), times.end(), t);
  size_t i = (it == times.begin()) ? 0 : (it - times.begin() - 1);
  if (i + 1 >= times.size()) i = times.size() - 2;
  if (times.size() == 1) return states[0];
  const double h = times[i + 1] - times[i];
  const double s = (t - times[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  std::vector<double> out(states[i].size());
  for (size_t c = 0; c < out.size(); ++c)
    out[c] = h00 * states[i][c] + h10 * h * derivs[i][c] + h01 * states[i + 1][c] +
             h11 * h * derivs[i + 1][c];
  return out;
}

void Trajectory::write_csv(std::ostream& os) const {
  os << "t";
  for (const auto& c : columns) os << "," << c;
  os << "\n";
  for (size_t i = 0; i < times.size(); ++i) {
    os << format_g17(times[i]);
    for (double v : states[i]) os << "," << format_g17(v);
    os << "\n";
  }
}

double reduced_energy(const Poly& V, double p_x, double x) {
  return 0.5 * p_x * p_x + 0.5 * V(x);
}

Trajectory integrate_reduced(const Poly& V, const ReducedState& s0,
                             std::array<double, 2> t_span, const IntegrateOptions& opts) {
  if (std::abs(reduced_energy(V, s0.p_x, s0.x) - 0.5) > 1e-10)
    throw DomainError("integrate_reduced: initial state off the energy level 1/2");
  const Poly dV = V.derivative();
  const double eps = capture_eps(opts.tol);
  if (std::abs(s0.p_x) < eps && std::abs(0.5 * dV(s0.x)) < eps)
    throw DomainError("integrate_reduced: start is an equilibrium (double root)");
  Rhs f = [&dV](double, const std::vector<double>& y, std::vector<double>& dy) {
    dy[0] = -0.5 * dV(y[1]);  // p_x
    dy[1] = y[0];             // x
  };
  auto stop = [&dV, eps](const std::vector<double>& y) {
    return std::abs(y[0]) < eps && std::abs(0.5 * dV(y[1])) < eps;
  };
  Trajectory tr = co_integrate(f, TrajectoryKind::Reduced, {"p_x", "x"},
                               {s0.p_x, s0.x}, s0.t, t_span, opts, stop);
  return tr;
}

namespace {

// Reduced initial data recorded in a trajectory produced by integrate_reduced.
struct ReducedSeed {
  double t0, t1, t_start, p0, x0;
};

ReducedSeed seed_from(const Trajectory& reduced) {
  if (reduced.kind != TrajectoryKind::Reduced || reduced.times.empty())
    throw DomainError("expected a non-empty reduced trajectory");
  if (reduced.start_state.size() < 2)
    throw DomainError("reduced trajectory lacks its start record");
  ReducedSeed s;
  s.t0 = reduced.times.front();
  s.t1 = reduced.times.back();
  s.t_start = reduced.t_start;
  s.p0 = reduced.start_state[0];
  s.x0 = reduced.start_state[1];
  return s;
}

}  // namespace

Trajectory lift_jet(const VecPoly& P, const Trajectory& reduced, const JetPoint& start,
                    const IntegrateOptions& opts) {
  const ReducedSeed sd = seed_from(reduced);
  const int k = start.order();
  const int n = start.components();
  if (k < 1 || n < 1) throw DomainError("lift_jet: malformed start point");
  if (P.size() != n) throw DomainError("lift_jet: polynomial/jet dimension mismatch");
  if (std::abs(start.x - sd.x0) > 1e-9)
    throw DomainError("lift_jet: start.x does not match the reduced trajectory");

  // State layout: (x, u^k_1..u^k_n, u^{k-1}_*, ..., u^0_*, p_x).
  std::vector<std::string> cols;
  cols.push_back("x");
  for (int i = k; i >= 0; --i)
    for (int l = 1; l <= n; ++l)
      cols.push_back("u" + std::to_string(i) + "_" + std::to_string(l));
  cols.push_back("p_x");

  std::vector<double> y0;
  y0.push_back(start.x);
  for (int i = k; i >= 0; --i)
    for (int l = 0; l < n; ++l) y0.push_back(start.u[i][l]);
  y0.push_back(sd.p0);

  const Poly V = potential(P);
  const Poly dV = V.derivative();
  const size_t pidx = y0.size() - 1;
  Rhs f = [&, k, n](double, const std::vector<double>& y, std::vector<double>& dy) {
    const double x = y[0];
    const double p = y[pidx];
    dy[0] = p;
    std::vector<double> pv = P.eval(x);
    size_t off = 1;
    for (int l = 0; l < n; ++l) dy[off + l] = pv[l];  // top layer u^k
    for (int i = k - 1; i >= 0; --i) {
      size_t above = off;
      off += n;
      for (int l = 0; l < n; ++l) dy[off + l] = p * y[above + l];
    }
    dy[pidx] = -0.5 * dV(x);
  };
  const double eps = capture_eps(opts.tol);
  auto stop = [&dV, pidx, eps](const std::vector<double>& y) {
    return std::abs(y[pidx]) < eps && std::abs(0.5 * dV(y[0])) < eps;
  };
  Trajectory tr = co_integrate(f, TrajectoryKind::Jet, cols, y0, sd.t_start,
                               {sd.t0, sd.t1}, opts, stop);
  tr.momentum_label = reduced.momentum_label;
  return tr;
}

Trajectory lift_jet(const Momentum& mu, const Trajectory& reduced, const JetPoint& start,
                    const IntegrateOptions& opts) {
  return lift_jet(mu.poly(), reduced, start, opts);
}

Trajectory geodesic_magnetic(double a, double b, const PencilMomentum& nu,
                             const Trajectory& reduced, const MagneticPoint& start,
                             const IntegrateOptions& opts) {
  const ReducedSeed sd = seed_from(reduced);
  if (std::abs(start.x - sd.x0) > 1e-9)
    throw DomainError("geodesic_magnetic: start.x does not match the reduced trajectory");
  const VecPoly G = nu.poly(a, b);
  const VecPoly P = VecPoly(Poly{1.0, 0.0, -1.0}, Poly{0.0, b, a});
  const Poly V = potential(G);
  const Poly dV = V.derivative();

  std::vector<double> y0{start.x, start.y1, start.y2, start.z1, start.z2, sd.p0};
  Rhs f = [&](double, const std::vector<double>& y, std::vector<double>& dy) {
    const double x = y[0];
    const double g1 = G[0](x), g2 = G[1](x);
    dy[0] = y[5];
    dy[1] = g1;
    dy[2] = g2;
    dy[3] = g1 * P[0](x);
    dy[4] = g2 * P[1](x);
    dy[5] = -0.5 * dV(x);
  };
  const double eps = capture_eps(opts.tol);
  auto stop = [&dV, eps](const std::vector<double>& y) {
    return std::abs(y[5]) < eps && std::abs(0.5 * dV(y[0])) < eps;
  };
  Trajectory tr = co_integrate(f, TrajectoryKind::Magnetic,
                               {"x", "y1", "y2", "z1", "z2", "p_x"}, y0, sd.t_start,
                               {sd.t0, sd.t1}, opts, stop);
  tr.momentum_label = "nu(tau=" + format_g17(nu.tau) + ",eta=" + format_g17(nu.eta) + ")";
  return tr;
}

MagneticPoint project_magnetic(double a, double b, const JetPoint& p) {
  if (p.order() != 2 || p.components() != 2)
    throw DomainError("project_magnetic: needs a 2-jet point of plane curves");
  const VecPoly P = VecPoly(Poly{1.0, 0.0, -1.0}, Poly{0.0, b, a});
  MagneticPoint m;
  m.x = p.x;
  m.y1 = p.u[2][0];
  m.y2 = p.u[2][1];
  auto z = [&](int l) {
    return p.u[2][l] * P[l](p.x) - p.u[1][l] * P[l].derivative()(p.x) +
           p.u[0][l] * P[l].derivative().derivative()(p.x);
  };
  m.z1 = z(0);
  m.z2 = z(1);
  return m;
}

Trajectory project_magnetic(double a, double b, const Trajectory& jet) {
  if (jet.kind != TrajectoryKind::Jet)
    throw DomainError("project_magnetic: expected a jet trajectory");
  // Jet columns: x, u2_1, u2_2, u1_1, u1_2, u0_1, u0_2, p_x.
  if (jet.columns.size() != 8)
    throw DomainError("project_magnetic: expected k=2, n=2 layout");
  const VecPoly P = VecPoly(Poly{1.0, 0.0, -1.0}, Poly{0.0, b, a});
  Trajectory out;
  out.kind = TrajectoryKind::Magnetic;
  out.columns = {"x", "y1", "y2", "z1", "z2", "p_x"};
  out.truncated = jet.truncated;
  out.momentum_label = jet.momentum_label;
  out.t_start = jet.t_start;
  out.tol = jet.tol;
  out.times = jet.times;
  out.states.reserve(jet.size());
  out.derivs.reserve(jet.size());
  for (size_t i = 0; i < jet.size(); ++i) {
    const auto& s = jet.states[i];
    const auto& d = jet.derivs[i];
    JetPoint jp;
    jp.x = s[0];
    jp.u = {{s[5], s[6]}, {s[3], s[4]}, {s[1], s[2]}};
    MagneticPoint m = project_magnetic(a, b, jp);
    out.states.push_back({m.x, m.y1, m.y2, m.z1, m.z2, s[7]});
    // Chain rule: zdot_l = du2 P + u2 P' xdot - du1 P' - u1 P'' xdot + du0 P''.
    std::vector<double> dd(6);
    dd[0] = d[0];
    dd[1] = d[1];
    dd[2] = d[2];
    for (int l = 0; l < 2; ++l) {
      const Poly& Pl = P[l];
      const Poly dPl = Pl.derivative();
      const Poly ddPl = dPl.derivative();
      dd[3 + l] = d[1 + l] * Pl(s[0]) + s[1 + l] * dPl(s[0]) * d[0] -
                  d[3 + l] * dPl(s[0]) - s[3 + l] * ddPl(s[0]) * d[0] +
                  d[5 + l] * ddPl(s[0]);
    }
    dd[5] = d[7];
    out.derivs.push_back(std::move(dd));
  }
  return out;
}

MagneticPoint translate(const MagneticPoint& p, const std::array<double, 2>& y0,
                        const std::array<double, 2>& z0) {
  MagneticPoint q = p;
  q.y1 += y0[0];
  q.y2 += y0[1];
  q.z1 += z0[0];
  q.z2 += z0[1];
  return q;
}

}  // namespace jetgeo
