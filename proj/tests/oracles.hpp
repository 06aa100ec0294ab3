// Independent oracles for the test suite. Everything here is deliberately
// written from the defining formulas, without touching the library's
// quadrature, root-finding, or factorization code paths.
#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

// Midpoint rule on the sine-substituted integrand of a dphi-integral over a
// full hill leg of the pencil potential
//   V(x) = (1 - tau x^2)^2 + eta^2 (b x + a x^2)^2,
// for numerators that vanish at x = 0. `g` is numerator(x)/x, supplied by
// the caller in closed form. plus_branch selects [0, x+] vs [x-, 0].
inline double midpoint_phi_leg(double a, double b, double tau, double eta,
                               bool plus_branch, const std::function<double(double)>& g,
                               long panels = 1000000) {
  const double A = a * a * eta * eta + tau * tau;
  const double B = 2.0 * a * b * eta * eta;
  const double C = 2.0 * tau - b * b * eta * eta;
  const double disc = B * B + 4.0 * A * C;
  const double v1 = 2.0 * A / std::sqrt(disc);
  const double v2 = B / std::sqrt(disc);
  const double v3 = disc / (4.0 * A);
  // 1 - V = v3 x^2 (1 - w^2), w = v1 x + v2; w = sin(psi) absorbs the
  // simple-root singularity. On [0, x+]: psi from asin(v2) to pi/2; on
  // [x-, 0]: psi from -pi/2 to asin(v2), and |x| = -x flips the sign.
  const double psi_mid = std::asin(std::min(1.0, std::max(-1.0, v2)));
  const double lo = plus_branch ? psi_mid : -std::acos(-1.0) / 2;
  const double hi = plus_branch ? std::acos(-1.0) / 2 : psi_mid;
  const double h = (hi - lo) / static_cast<double>(panels);
  double sum = 0.0;
  for (long i = 0; i < panels; ++i) {
    const double psi = lo + (static_cast<double>(i) + 0.5) * h;
    const double x = (std::sin(psi) - v2) / v1;
    sum += g(x);
  }
  const double sign = plus_branch ? 1.0 : -1.0;
  return sign * sum * h / (std::sqrt(v3) * v1);
}

// Brute-force scan for the sublevel set {V <= level}: returns the
// boundaries of maximal runs of grid points with V(x) < level.
inline std::vector<std::pair<double, double>> sign_scan_sublevel(
    const std::function<double(double)>& V, double lo, double hi, double level,
    double step = 1e-3) {
  std::vector<std::pair<double, double>> runs;
  bool inside = false;
  double start = 0.0;
  for (double x = lo; x <= hi; x += step) {
    const bool below = V(x) < level;
    if (below && !inside) {
      inside = true;
      start = x;
    } else if (!below && inside) {
      inside = false;
      runs.emplace_back(start, x - step);
    }
  }
  if (inside) runs.emplace_back(start, hi);
  return runs;
}

// Polyline arc length of selected columns of a sampled curve.
inline double arc_length(const std::vector<double>& t,
                         const std::vector<std::vector<double>>& states,
                         const std::vector<int>& cols) {
  (void)t;
  double len = 0.0;
  for (size_t i = 1; i < states.size(); ++i) {
    double d2 = 0.0;
    for (int c : cols) {
      const double d = states[i][c] - states[i - 1][c];
      d2 += d * d;
    }
    len += std::sqrt(d2);
  }
  return len;
}

// Central finite difference of a scalar function.
inline double central_diff(const std::function<double(double)>& f, double x,
                           double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace oracle
