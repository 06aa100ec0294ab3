#include "jetgeo/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "jetgeo/errors.hpp"

namespace jetgeo {

namespace {

const double kPi = std::acos(-1.0);

// Gauss-Kronrod 7/15 nodes and weights (nonnegative half; symmetric).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEval {
  double k15;
  double err;  // |K15 - G7|
};

PanelEval gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double fsum = f(c - h * kXgk[j]) + f(c + h * kXgk[j]);
    resk += kWgk[j] * fsum;
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }
  return {resk * h, std::abs((resk - resg) * h)};
}

// Adaptive bisection with a worst-panel-first queue; panel ordering is a
// pure function of the endpoints, so the subdivision tree is deterministic.
QuadResult adaptive_gk(const std::function<double(double)>& f, double a, double b,
                       double tol) {
  struct Panel {
    double a, b, value, err;
  };
  auto worse = [](const Panel& p, const Panel& q) {
    if (p.err != q.err) return p.err < q.err;
    return p.a > q.a;
  };
  std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> heap(worse);
  PanelEval e0 = gk15(f, a, b);
  heap.push({a, b, e0.k15, e0.err});
  double total = e0.k15, total_err = e0.err;
  const int max_panels = 4000;
  int panels = 1;
  while (total_err > std::max(tol, tol * std::abs(total)) && panels < max_panels) {
    Panel p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) {  // interval exhausted at machine precision
      heap.push(p);
      break;
    }
    PanelEval l = gk15(f, p.a, m);
    PanelEval r = gk15(f, m, p.b);
    total += l.k15 + r.k15 - p.value;
    total_err += l.err + r.err - p.err;
    heap.push({p.a, m, l.k15, l.err});
    heap.push({m, p.b, r.k15, r.err});
    ++panels;
  }
  if (total_err > std::max(tol, tol * std::abs(total)))
    throw ToleranceNotMet("integrate_phi: tolerance not met", total, total_err);
  return {total, total_err};
}

int endpoint_multiplicity(const Poly& W, double e) {
  const double thr = 1e-9 * std::max(1.0, W.inf_norm()) *
                     std::max(1.0, std::pow(std::abs(e), W.degree()));
  if (std::abs(W(e)) > thr) return 0;
  int m = 1;
  Poly d = W.derivative();
  while (m < W.degree() && std::abs(d(e)) <= thr) {
    ++m;
    d = d.derivative();
  }
  return m;
}

}  // namespace

HillInterval PhiIntegrand::make_leg(const Poly& potential, double lo, double hi) {
  const Poly W = Poly::constant(1.0) - potential;
  HillInterval leg;
  leg.x0 = std::min(lo, hi);
  leg.x1 = std::max(lo, hi);
  leg.mult0 = endpoint_multiplicity(W, leg.x0);
  leg.mult1 = endpoint_multiplicity(W, leg.x1);
  return leg;
}

bool PhiIntegrand::integrable() const {
  if (!interval.is_bounded()) return false;
  const double thr = 1e-9 * std::max(1.0, numerator.inf_norm());
  if (interval.mult0 >= 2 && std::abs(numerator(interval.x0)) > thr) return false;
  if (interval.mult1 >= 2 && std::abs(numerator(interval.x1)) > thr) return false;
  return true;
}

QuadResult integrate_phi(const PhiIntegrand& f, double tol) {
  if (f.numerator.is_zero()) return {0.0, 0.0};
  if (!f.interval.is_bounded())
    throw NonIntegrable("integrate_phi: unbounded leg");
  const double lo = f.interval.x0, hi = f.interval.x1;
  if (lo == hi) return {0.0, 0.0};
  if (!f.integrable())
    throw NonIntegrable("integrate_phi: numerator does not cancel a double root");

  Poly N = f.numerator;
  Poly W = Poly::constant(1.0) - f.potential;
  double sign = 1.0;

  // Cancel double-root endpoint factors symbolically: each pass removes
  // |x - e| from sqrt(W) against one factor of (x - e) in N; on a leg left
  // of e the pulled-out factor is negative.
  for (int side = 0; side < 2; ++side) {
    const double e = side == 0 ? lo : hi;
    int m = side == 0 ? f.interval.mult0 : f.interval.mult1;
    while (m >= 2) {
      N = N.deflate(e);
      W = W.deflate(e).deflate(e);
      if (side == 1) sign = -sign;
      m -= 2;
    }
  }

  const bool zlo = endpoint_multiplicity(W, lo) >= 1;
  const bool zhi = endpoint_multiplicity(W, hi) >= 1;

  std::function<double(double)> g;
  double ga = 0, gb = 0;
  auto inv_sqrt = [](double r) { return 1.0 / std::sqrt(std::max(r, 1e-300)); };

  if (zlo && zhi) {
    // W = (x-lo)(hi-x) R with R > 0 on the leg; x = mid + half sin(psi).
    Poly R = W.deflate(lo).deflate(hi) * -1.0;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    g = [N, R, mid, half, inv_sqrt](double psi) {
      const double x = mid + half * std::sin(psi);
      return N(x) * inv_sqrt(R(x));
    };
    ga = -kPi / 2;
    gb = kPi / 2;
  } else if (zhi) {
    // W = (hi-x) R; x = hi - u^2 removes the inverse square root.
    Poly R = W.deflate(hi) * -1.0;
    g = [N, R, hi, inv_sqrt](double u) {
      const double x = hi - u * u;
      return 2.0 * N(x) * inv_sqrt(R(x));
    };
    ga = 0.0;
    gb = std::sqrt(hi - lo);
  } else if (zlo) {
    Poly R = W.deflate(lo);
    g = [N, R, lo, inv_sqrt](double u) {
      const double x = lo + u * u;
      return 2.0 * N(x) * inv_sqrt(R(x));
    };
    ga = 0.0;
    gb = std::sqrt(hi - lo);
  } else {
    g = [N, W, inv_sqrt](double x) { return N(x) * inv_sqrt(W(x)); };
    ga = lo;
    gb = hi;
  }

  QuadResult r = adaptive_gk(g, ga, gb, tol);
  r.value *= sign;
  return r;
}

DeltaResult delta_map(double a, double b, const PencilMomentum& nu, double x_from,
                      double x_to, double tol) {
  const VecPoly G = nu.poly(a, b);
  const VecPoly P(Poly{1.0, 0.0, -1.0}, Poly{0.0, b, a});
  const Poly V = potential(G);
  const double lo = std::min(x_from, x_to), hi = std::max(x_from, x_to);
  for (int i = 0; i <= 20; ++i) {
    const double x = lo + (hi - lo) * i / 20.0;
    if (V(x) > 1.0 + 1e-9)
      throw DomainError("delta_map: leg leaves the hill interval");
  }
  const HillInterval leg = PhiIntegrand::make_leg(V, lo, hi);

  const Poly one = Poly::constant(1.0);
  auto component = [&](const Poly& num) {
    PhiIntegrand f{num, V, leg};
    if (!f.integrable()) {
      // Divergence direction = sign of the numerator at the double root.
      double e = (leg.mult0 >= 2) ? leg.x0 : leg.x1;
      return std::pair<double, double>(
          std::copysign(std::numeric_limits<double>::infinity(), num(e)), 0.0);
    }
    QuadResult q = integrate_phi(f, tol);
    return std::pair<double, double>(q.value, q.error_estimate);
  };

  DeltaResult d;
  double err = 0.0;
  auto take = [&err](std::pair<double, double> ve) {
    if (std::isfinite(ve.first)) err += ve.second;
    return ve.first;
  };
  d.dt = take(component(one));
  d.dy1 = take(component(G[0]));
  d.dy2 = take(component(G[1]));
  d.dz1 = take(component(G[0] * P[0]));
  d.dz2 = take(component(G[1] * P[1]));
  // Costs from their own integrands: the double root cancels analytically.
  d.cost_t = take(component(one - G[0]));
  d.cost_y = take(component(G[0] * (one - P[0])));
  d.error_estimate = err;
  return d;
}

}  // namespace jetgeo
