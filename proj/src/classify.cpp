#include "jetgeo/classify.hpp"

#include <algorithm>
#include <cmath>

#include "jetgeo/errors.hpp"

namespace jetgeo {

const char* geodesic_kind_name(GeodesicKind k) {
  switch (k) {
    case GeodesicKind::Line: return "Line";
    case GeodesicKind::Periodic: return "Periodic";
    case GeodesicKind::Homoclinic: return "Homoclinic";
    case GeodesicKind::Direct: return "Direct";
    case GeodesicKind::TurnBack: return "TurnBack";
  }
  return "?";
}

std::vector<HillInterval> hill_intervals(const Poly& V, double energy_level) {
  const Poly W = Poly::constant(energy_level) - V;  // W >= 0 is the allowed region

  if (V.degree() == 0) {
    const double v = V(0.0);
    if (v < energy_level - 1e-10) {
      HillInterval all;
      all.unbounded_below = all.unbounded_above = true;
      return {all};
    }
    if (std::abs(v - energy_level) <= 1e-10) {
      HillInterval pt;  // every singleton qualifies; report the origin
      return {pt};
    }
    throw NoHillInterval("hill_intervals: constant potential above the level");
  }

  std::vector<PolyRoot> roots = real_roots(W);
  if (roots.empty()) {
    if (V(0.0) < energy_level) {
      HillInterval all;
      all.unbounded_below = all.unbounded_above = true;
      return {all};
    }
    throw NoHillInterval("hill_intervals: V > level everywhere");
  }

  std::vector<HillInterval> out;
  const double span = std::max(1.0, roots.back().x - roots.front().x);

  // Left tail.
  if (V(roots.front().x - span) < energy_level) {
    HillInterval h;
    h.unbounded_below = true;
    h.x1 = roots.front().x;
    h.mult1 = roots.front().multiplicity;
    out.push_back(h);
  }
  // Between consecutive roots.
  for (size_t i = 0; i + 1 < roots.size(); ++i) {
    double m = 0.5 * (roots[i].x + roots[i + 1].x);
    if (V(m) < energy_level) {
      HillInterval h;
      h.x0 = roots[i].x;
      h.x1 = roots[i + 1].x;
      h.mult0 = roots[i].multiplicity;
      h.mult1 = roots[i + 1].multiplicity;
      out.push_back(h);
    }
  }
  // Right tail.
  if (V(roots.back().x + span) < energy_level) {
    HillInterval h;
    h.unbounded_above = true;
    h.x0 = roots.back().x;
    h.mult0 = roots.back().multiplicity;
    out.push_back(h);
  }
  // Roots not adjacent to any region with V < level are touch points:
  // degenerate single-point intervals.
  for (const PolyRoot& r : roots) {
    bool used = false;
    for (const HillInterval& h : out) {
      if ((!h.unbounded_below && h.x0 == r.x) || (!h.unbounded_above && h.x1 == r.x))
        used = true;
    }
    if (!used) {
      HillInterval pt;
      pt.x0 = pt.x1 = r.x;
      pt.mult0 = pt.mult1 = r.multiplicity;
      out.push_back(pt);
    }
  }
  std::sort(out.begin(), out.end(), [](const HillInterval& a, const HillInterval& b) {
    double ax = a.unbounded_below ? -1e300 : a.x0;
    double bx = b.unbounded_below ? -1e300 : b.x0;
    return ax < bx;
  });
  if (out.empty()) throw NoHillInterval("hill_intervals: no sublevel region");
  return out;
}

std::vector<double> equilibria(const VecPoly& P) {
  const Poly V = potential(P);
  const Poly W = V - Poly::constant(1.0);
  if (W.degree() == 0) return {};  // constant potential: handled as Line
  const Poly dV = V.derivative();
  const double thr = 1e-10 * std::max(1.0, dV.inf_norm());
  std::vector<double> out;
  for (const PolyRoot& r : real_roots(W)) {
    if (std::abs(dV(r.x)) <= thr) out.push_back(r.x);
  }
  return out;
}

namespace {

bool endpoint_is_equilibrium(const Poly& V, const Poly& dV, double x) {
  return std::abs(V(x) - 1.0) <= 1e-8 &&
         std::abs(dV(x)) <= 1e-9 * std::max(1.0, dV.inf_norm());
}

}  // namespace

GeodesicType classify_geodesic(const VecPoly& P, const HillInterval& I) {
  if (P.is_constant()) return {GeodesicKind::Line, I};

  const Poly V = potential(P);
  if (I.is_bounded() && !I.is_singleton()) {
    for (int i = 1; i <= 20; ++i) {
      double x = I.x0 + (I.x1 - I.x0) * i / 21.0;
      if (V(x) > 1.0 + 1e-9)
        throw InvalidInterval("classify_geodesic: V exceeds 1 inside the interval");
    }
  }
  if (!I.is_bounded())
    throw InvalidInterval("classify_geodesic: unbounded interval for non-constant P");

  const Poly dV = V.derivative();
  const bool eq0 = endpoint_is_equilibrium(V, dV, I.x0);
  const bool eq1 = endpoint_is_equilibrium(V, dV, I.x1);
  if (eq0 && eq1) {
    std::vector<double> p0 = P.eval(I.x0);
    std::vector<double> p1 = P.eval(I.x1);
    double d = 0.0;
    for (size_t i = 0; i < p0.size(); ++i) d = std::max(d, std::abs(p0[i] - p1[i]));
    return {d <= 1e-10 ? GeodesicKind::Direct : GeodesicKind::TurnBack, I};
  }
  if (eq0 || eq1) return {GeodesicKind::Homoclinic, I};
  return {GeodesicKind::Periodic, I};
}

std::array<double, 2> abnormal_directions(double a, double b, double x) {
  // P'(x) = (-2x, b + 2ax)
  const double g1 = -2.0 * x;
  const double g2 = b + 2.0 * a * x;
  const double n = std::hypot(g1, g2);
  if (n <= 1e-14)
    throw ZeroGradient("abnormal_directions: both derivatives vanish");
  std::array<double, 2> v{-g2 / n, g1 / n};
  // Normalize the sign: first positive component leads.
  if (v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0)) {
    v[0] = -v[0];
    v[1] = -v[1];
  }
  return v;
}

}  // namespace jetgeo
