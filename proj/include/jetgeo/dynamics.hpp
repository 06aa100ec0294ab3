#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "jetgeo/momentum.hpp"
#include "jetgeo/poly.hpp"

namespace jetgeo {

/// State of the reduced one-degree-of-freedom system
/// H(p_x, x) = p_x^2/2 + V(x)/2 at energy 1/2.
struct ReducedState {
  double p_x = 0.0;
  double x = 0.0;
  double t = 0.0;
};

/// Point of the k-jet space of curves R -> R^n, coordinates
/// (x, u^k, ..., u^0) with u[i][l] = l-th component of u^i.
struct JetPoint {
  double x = 0.0;
  std::vector<std::vector<double>> u;  // u[i] = (u^i_1 .. u^i_n), i = 0..k

  static JetPoint origin(int k = 2, int n = 2);
  int order() const { return static_cast<int>(u.size()) - 1; }
  int components() const { return u.empty() ? 0 : static_cast<int>(u[0].size()); }
};

/// Point of the five-dimensional magnetic space.
struct MagneticPoint {
  double x = 0.0;
  double y1 = 0.0, y2 = 0.0;
  double z1 = 0.0, z2 = 0.0;
};

enum class TrajectoryKind { Reduced, Jet, Magnetic };

/// Time-sampled arc of a geodesic. Samples are the accepted steps of the
/// adaptive integrator (strictly increasing t, spacing capped by max_step);
/// stored derivatives give C^1 Hermite interpolation between samples.
struct Trajectory {
  TrajectoryKind kind = TrajectoryKind::Reduced;
  std::vector<std::string> columns;             // state column names
  std::vector<double> times;
  std::vector<std::vector<double>> states;      // states[i][c]
  std::vector<std::vector<double>> derivs;      // d(state)/dt at each sample
  bool truncated = false;                       // stopped at an equilibrium
  std::string momentum_label;
  double t_start = 0.0;                         // where integration began
  std::vector<double> start_state;
  double tol = 1e-10;

  size_t size() const { return times.size(); }
  /// Cubic Hermite interpolation; t must lie within [times.front(), times.back()].
  std::vector<double> state_at(double t) const;
  /// CSV with header "t,<columns>" and 17 significant digits.
  void write_csv(std::ostream& os) const;
};

struct IntegrateOptions {
  double tol = 1e-10;       // local error tolerance (abs and rel)
  double max_step = 0.1;    // cap on accepted step / sample spacing
};

/// Reduced Hamiltonian flow xdot = p_x, pdot = -V'(x)/2 over t_span around
/// s0.t (backward and forward as needed). Requires |H(s0) - 1/2| <= 1e-10,
/// and the start must not itself be an equilibrium (a double boundary root).
/// Runs into an equilibrium are truncated (flag set) once |p_x| and |V'/2|
/// both drop below max(1e-12, 10 sqrt(tol)); energy conservation at local
/// tolerance tol pins |p_x| near a saddle at about sqrt(tol), so a smaller
/// capture radius is never reached before roundoff throws the orbit back
/// out. A step-size underflow away from equilibria throws StepUnderflow.
/// Columns: p_x, x.
Trajectory integrate_reduced(const Poly& V, const ReducedState& s0,
                             std::array<double, 2> t_span,
                             const IntegrateOptions& opts = {});

/// Horizontal lift through the jet-space frame, co-integrated with the
/// reduced flow that produced `reduced` (same span, tolerance, initial
/// (p_x, x)):
///   du^k_l/dt = P_l(x),  du^i_l/dt = p_x u^{i+1}_l  (i < k).
/// `start` supplies the initial u (its x must match the reduced start).
Trajectory lift_jet(const VecPoly& P, const Trajectory& reduced, const JetPoint& start,
                    const IntegrateOptions& opts = {});
Trajectory lift_jet(const Momentum& mu, const Trajectory& reduced, const JetPoint& start,
                    const IntegrateOptions& opts = {});

/// Magnetic-space geodesic for pencil momentum nu, co-integrated with the
/// reduced flow of V_nu: ydot_i = G_i(x), zdot_i = G_i(x) P_i(x).
Trajectory geodesic_magnetic(double a, double b, const PencilMomentum& nu,
                             const Trajectory& reduced, const MagneticPoint& start,
                             const IntegrateOptions& opts = {});

/// Submersion from the 2-jet space onto the magnetic space:
///   (x, u^2, z) with z_l = u^2_l P_l(x) - u^1_l P_l'(x) + u^0_l P_l''(x).
MagneticPoint project_magnetic(double a, double b, const JetPoint& p);
/// Sample-wise projection of a jet trajectory (derivatives via chain rule).
Trajectory project_magnetic(double a, double b, const Trajectory& jet);

/// The translation isometry (x, y, z) -> (x, y + y0, z + z0).
MagneticPoint translate(const MagneticPoint& p, const std::array<double, 2>& y0,
                        const std::array<double, 2>& z0);

/// Reduced Hamiltonian energy of a sample (first two columns p_x, x).
double reduced_energy(const Poly& V, double p_x, double x);

}  // namespace jetgeo
