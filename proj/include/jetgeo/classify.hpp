#pragma once

#include <array>
#include <vector>

#include "jetgeo/poly.hpp"

namespace jetgeo {

/// Closed interval on which a potential stays at or below the energy level,
/// with equality exactly on the (finite) boundary. Unbounded sides carry
/// explicit infinity markers; mult0/mult1 are the multiplicities of the
/// boundary roots of level - V (0 at an infinite or non-root endpoint).
struct HillInterval {
  double x0 = 0.0;
  double x1 = 0.0;
  int mult0 = 0;
  int mult1 = 0;
  bool unbounded_below = false;
  bool unbounded_above = false;

  bool is_singleton() const {
    return !unbounded_below && !unbounded_above && x0 == x1;
  }
  bool is_bounded() const { return !unbounded_below && !unbounded_above; }
};

enum class GeodesicKind { Line, Periodic, Homoclinic, Direct, TurnBack };

const char* geodesic_kind_name(GeodesicKind k);

struct GeodesicType {
  GeodesicKind kind;
  HillInterval interval;
};

/// All maximal closed intervals where V <= level with equality on finite
/// boundaries, split at interior double roots of level - V (adjacent
/// intervals share the touching point). A constant V < level yields the
/// whole line; V > level everywhere throws NoHillInterval.
std::vector<HillInterval> hill_intervals(const Poly& V, double energy_level = 1.0);

/// Points x with ||P(x)|| = 1 and P(x) . P'(x) = 0, i.e. the common roots of
/// V - 1 and V' (equilibria of the reduced dynamics; singular points of the
/// isoenergy curve). Empty for constant P.
std::vector<double> equilibria(const VecPoly& P);

/// Five-way classification on a hill interval of ||P||^2:
///  - Line when P is constant;
///  - Periodic when neither endpoint is an equilibrium;
///  - Homoclinic when exactly one endpoint is;
///  - Direct / TurnBack when both are, split by P(x0) = P(x1) (1e-10 abs).
/// Throws InvalidInterval when V > 1 inside I.
GeodesicType classify_geodesic(const VecPoly& P, const HillInterval& I);

/// Unit vector (up to sign) orthogonal to (P1'(x), P2'(x)) for the base
/// polynomial P_(a,b)(x) = (1 - x^2, b x + a x^2): the direction along which
/// magnetic-space abnormal geodesics travel. Throws ZeroGradient when both
/// derivatives vanish.
std::array<double, 2> abnormal_directions(double a, double b, double x);

}  // namespace jetgeo
