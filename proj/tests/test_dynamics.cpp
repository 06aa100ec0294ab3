#include <doctest.h>

#include <cmath>
#include <sstream>

#include "jetgeo/classify.hpp"
#include "jetgeo/dynamics.hpp"
#include "jetgeo/errors.hpp"
#include "jetgeo/momentum.hpp"
#include "jetgeo/periodmap.hpp"
#include "jetgeo/quadrature.hpp"
#include "oracles.hpp"

using namespace jetgeo;

TEST_SUITE_BEGIN("dynamics");

TEST_CASE("free motion when the potential vanishes") {
  Trajectory tr = integrate_reduced(Poly{0.0}, {1.0, 0.0, 0.0}, {0.0, 1.0});
  const auto end = tr.state_at(1.0);
  CHECK(end[1] == doctest::Approx(1.0).epsilon(1e-10));
  for (size_t i = 0; i < tr.size(); ++i) {
    CHECK(tr.states[i][0] == doctest::Approx(1.0).epsilon(1e-12));
    if (i > 0) {
      CHECK(tr.times[i] > tr.times[i - 1]);
      CHECK(tr.times[i] - tr.times[i - 1] <= 0.1 + 1e-12);
    }
  }
}

TEST_CASE("energy stays on the level set from a hill endpoint") {
  const Poly V = potential(VecPoly(Poly{1.0, 0.0, -1.0}, Poly{0.0}));
  Trajectory tr = integrate_reduced(V, {0.0, std::sqrt(2.0), 0.0}, {0.0, 10.0});
  double drift = 0.0;
  bool moved_toward_zero = false;
  for (size_t i = 0; i < tr.size(); ++i) {
    drift = std::max(drift,
                     std::abs(reduced_energy(V, tr.states[i][0], tr.states[i][1]) - 0.5));
    if (tr.states[i][1] < 1.0) moved_toward_zero = true;
  }
  CHECK(drift <= 1e-8);
  CHECK(moved_toward_zero);
}

TEST_CASE("reduced flow is time reversible from a boundary start") {
  PencilMomentum nu{1.0, 1.0, Branch::plus};
  const Poly V = potential(nu.poly(1.0, 1.0));
  const double xp = pencil_root(1.0, 1.0, 1.0, 1.0, Branch::plus);
  Trajectory tr = integrate_reduced(V, {0.0, xp, 0.0}, {-4.0, 4.0});
  for (double t : {0.5, 1.0, 2.0, 3.5}) {
    CHECK(std::abs(tr.state_at(t)[1] - tr.state_at(-t)[1]) <= 1e-7);
  }
}

TEST_CASE("bad initial energy is rejected") {
  CHECK_THROWS_AS(integrate_reduced(Poly{0.0}, {0.3, 0.0, 0.0}, {0.0, 1.0}),
                  DomainError);
}

TEST_CASE("homoclinic run truncates at the equilibrium instead of throwing") {
  PencilMomentum nu{1.0, 1.0, Branch::plus};
  const Poly V = potential(nu.poly(1.0, 1.0));
  const double xp = pencil_root(1.0, 1.0, 1.0, 1.0, Branch::plus);
  IntegrateOptions opts;
  opts.tol = 1e-12;
  Trajectory tr = integrate_reduced(V, {0.0, xp, 0.0}, {0.0, 200.0}, opts);
  CHECK(tr.truncated);
  CHECK(tr.times.back() < 200.0);
  // Capture radius at tol = 1e-12 is 1e-5.
  CHECK(std::abs(tr.states.back()[1]) < 2e-5);
  CHECK(tr.states.back()[1] > 0.0);  // approached, never crossed
}

TEST_CASE("equilibrium starts are rejected") {
  PencilMomentum nu{1.0, 1.0, Branch::plus};
  const Poly V = potential(nu.poly(1.0, 1.0));
  CHECK_THROWS_AS(integrate_reduced(V, {0.0, 0.0, 0.0}, {0.0, 1.0}), DomainError);
}

TEST_CASE("lift of a constant polynomial is a straight line") {
  const VecPoly P(Poly{0.3}, Poly{0.4});
  const Poly V = potential(P);
  const double p0 = std::sqrt(1.0 - V(0.0));
  Trajectory red = integrate_reduced(V, {p0, 0.0, 0.0}, {0.0, 2.0});
  Trajectory jet = lift_jet(P, red, JetPoint::origin(), {});
  // (x, u2_1, u2_2) moves along the fixed direction (p0, 0.3, 0.4).
  const auto s0 = jet.states.front();
  for (size_t i = 1; i < jet.size(); ++i) {
    const double dt = jet.times[i] - jet.times.front();
    CHECK(std::abs(jet.states[i][0] - s0[0] - p0 * dt) <= 1e-9);
    CHECK(std::abs(jet.states[i][1] - s0[1] - 0.3 * dt) <= 1e-9);
    CHECK(std::abs(jet.states[i][2] - s0[2] - 0.4 * dt) <= 1e-9);
  }
}

TEST_CASE("zero polynomial leaves the top jet layer constant") {
  const VecPoly P(Poly{0.0}, Poly{0.0});
  Trajectory red = integrate_reduced(Poly{0.0}, {1.0, 0.0, 0.0}, {0.0, 1.5});
  Trajectory jet = lift_jet(P, red, JetPoint::origin(), {});
  for (size_t i = 0; i < jet.size(); ++i) {
    CHECK(jet.states[i][1] == doctest::Approx(0.0));
    CHECK(jet.states[i][2] == doctest::Approx(0.0));
  }
}

TEST_CASE("jet lift is parametrized by arc length") {
  const Momentum mu = Momentum::from_parameters(1.0, 1.0, 1.0);
  const VecPoly P = mu.poly();
  const Poly V = potential(P);
  const auto hills = hill_intervals(V);
  const HillInterval* I = nullptr;
  for (const auto& h : hills)
    if (h.is_bounded() && std::abs(h.x0) < 1e-10 && h.x1 > 0) I = &h;
  REQUIRE(I != nullptr);
  IntegrateOptions opts;
  opts.max_step = 0.01;  // dense polyline for the arc-length oracle
  Trajectory red = integrate_reduced(V, {0.0, I->x1, 0.0}, {-2.0, 2.0}, opts);
  JetPoint start = JetPoint::origin();
  start.x = I->x1;
  Trajectory jet = lift_jet(P, red, start, opts);
  // Horizontal speed lives in the (x, u^2) block.
  const double len = oracle::arc_length(jet.times, jet.states, {0, 1, 2});
  CHECK(std::abs(len - (jet.times.back() - jet.times.front())) <= 1e-6);
}

TEST_CASE("lift supports higher jet order and one component") {
  // k = 3, n = 1, constant polynomial c: the layers integrate to the
  // factorial cascade u^3 = c t, u^2 = p c t^2/2, u^1 = p^2 c t^3/6,
  // u^0 = p^3 c t^4/24 from the origin.
  const double c = 0.6;
  const VecPoly P(std::vector<Poly>{Poly{c}});
  const double p0 = std::sqrt(1.0 - c * c);
  Trajectory red = integrate_reduced(potential(P), {p0, 0.0, 0.0}, {0.0, 1.5});
  Trajectory jet = lift_jet(P, red, JetPoint::origin(3, 1), {});
  REQUIRE(jet.columns.size() == 6);  // x, u3..u0, p_x
  const double t = 1.5;
  const auto s = jet.state_at(t);
  CHECK(s[0] == doctest::Approx(p0 * t).epsilon(1e-9));
  CHECK(s[1] == doctest::Approx(c * t).epsilon(1e-9));
  CHECK(s[2] == doctest::Approx(p0 * c * t * t / 2).epsilon(1e-9));
  CHECK(s[3] == doctest::Approx(p0 * p0 * c * t * t * t / 6).epsilon(1e-9));
  CHECK(s[4] == doctest::Approx(p0 * p0 * p0 * c * t * t * t * t / 24).epsilon(1e-9));
}

TEST_CASE("candidate magnetic geodesic has monotone z1") {
  PencilMomentum nu{1.0, 1.0, Branch::plus};  // G = P here
  const Poly V = potential(nu.poly(1.0, 1.0));
  const double xp = pencil_root(1.0, 1.0, 1.0, 1.0, Branch::plus);
  Trajectory red = integrate_reduced(V, {0.0, xp, 0.0}, {-3.0, 3.0});
  Trajectory mag = geodesic_magnetic(1.0, 1.0, nu, red, {xp, 0, 0, 0, 0}, {});
  for (size_t i = 1; i < mag.size(); ++i)
    CHECK(mag.states[i][3] >= mag.states[i - 1][3] - 1e-12);
}

TEST_CASE("eta = 0 freezes the second magnetic pair") {
  PencilMomentum nu{1.0, 0.0, Branch::plus};
  const Poly V = potential(nu.poly(1.0, 1.0));
  const double xp = pencil_root(1.0, 1.0, 1.0, 0.0, Branch::plus);
  Trajectory red = integrate_reduced(V, {0.0, xp, 0.0}, {0.0, 3.0});
  Trajectory mag = geodesic_magnetic(1.0, 1.0, nu, red, {xp, 0, 0, 0, 0}, {});
  for (size_t i = 0; i < mag.size(); ++i) {
    CHECK(mag.states[i][2] == doctest::Approx(0.0));
    CHECK(mag.states[i][4] == doctest::Approx(0.0));
  }
}

TEST_CASE("magnetic trajectory is parametrized by arc length") {
  PencilMomentum nu{1.2, 0.8, Branch::plus};
  const Poly V = potential(nu.poly(1.0, 1.0));
  const double xp = pencil_root(1.0, 1.0, 1.2, 0.8, Branch::plus);
  IntegrateOptions opts;
  opts.max_step = 0.002;  // the polyline oracle needs a dense sampling
  Trajectory red = integrate_reduced(V, {0.0, xp, 0.0}, {-2.0, 2.0}, opts);
  Trajectory mag = geodesic_magnetic(1.0, 1.0, nu, red, {xp, 0, 0, 0, 0}, opts);
  const double len = oracle::arc_length(mag.times, mag.states, {0, 1, 2});
  CHECK(std::abs(len - (mag.times.back() - mag.times.front())) <= 1e-6);
}

TEST_CASE("window displacement matches the quadrature integral") {
  const double a = 1.0, b = 1.0;
  PencilMomentum nu{1.0, 1.0, Branch::plus};
  const Poly V = potential(nu.poly(a, b));
  const double xp = pencil_root(a, b, 1.0, 1.0, Branch::plus);
  IntegrateOptions opts;
  opts.tol = 1e-12;
  Trajectory red = integrate_reduced(V, {0.0, xp, 0.0}, {0.0, 8.0}, opts);
  Trajectory mag = geodesic_magnetic(a, b, nu, red, {xp, 0, 0, 0, 0}, opts);
  // Pick the monotone window t in [1, 3]; x decreases there.
  const auto s1 = mag.state_at(1.0), s3 = mag.state_at(3.0);
  const DeltaResult d = delta_map(a, b, nu, s3[0], s1[0]);
  CHECK(std::abs((s3[1] - s1[1]) - d.dy1) <= 1e-6);
  CHECK(std::abs((s3[2] - s1[2]) - d.dy2) <= 1e-6);
  CHECK(std::abs((s3[3] - s1[3]) - d.dz1) <= 1e-6);
  CHECK(std::abs((s3[4] - s1[4]) - d.dz2) <= 1e-6);
  CHECK(std::abs(2.0 - d.dt) <= 1e-6);
}

TEST_CASE("full homoclinic window displacement doubles the period map") {
  const double a = 1.0, b = 1.0;
  PencilMomentum nu{1.0, 1.0, Branch::plus};
  const Poly V = potential(nu.poly(a, b));
  const double xp = pencil_root(a, b, 1.0, 1.0, Branch::plus);
  IntegrateOptions opts;
  opts.tol = 1e-12;
  Trajectory red = integrate_reduced(V, {0.0, xp, 0.0}, {-30.0, 30.0}, opts);
  Trajectory mag = geodesic_magnetic(a, b, nu, red, {xp, 0, 0, 0, 0}, opts);
  const PeriodVector th = period_map(a, b, 1.0, 1.0, Branch::plus);
  const auto first = mag.states.front(), last = mag.states.back();
  // One traversal out plus one back: the asymptotic displacements are twice
  // the single-leg integrals. The run is truncated at the capture radius, so
  // add back the two missing tail legs by quadrature additivity.
  const DeltaResult tail_b = delta_map(a, b, nu, 0.0, first[0], 1e-12);
  const DeltaResult tail_f = delta_map(a, b, nu, 0.0, last[0], 1e-12);
  const double dy2 = (last[2] - first[2]) + tail_b.dy2 + tail_f.dy2;
  const double dz2 = (last[4] - first[4]) + tail_b.dz2 + tail_f.dz2;
  const double cost_y = (last[1] - first[1]) - (last[3] - first[3]) +
                        tail_b.cost_y + tail_f.cost_y;
  CHECK(std::abs(dy2 - 2.0 * th.theta1) <= 1e-7);
  CHECK(std::abs(dz2 - 2.0 * th.theta3) <= 1e-7);
  CHECK(std::abs(cost_y - 2.0 * th.theta2) <= 1e-7);
  // The doubling is unambiguous: a single traversal is nowhere near.
  CHECK(std::abs(dy2 - th.theta1) > 0.5);
}

TEST_CASE("projection formula on a hand-evaluated point") {
  JetPoint p = JetPoint::origin();
  CHECK(project_magnetic(1.0, 1.0, p).z1 == doctest::Approx(0.0));
  p.x = 1.0;
  p.u[2] = {1.0, 0.0};
  const MagneticPoint m = project_magnetic(0.0, 1.0, p);
  // z1 = u2_1 P1(1) = 1 * (1 - 1) = 0, z2 = u2_2 P2(1) = 0.
  CHECK(m.z1 == doctest::Approx(0.0));
  CHECK(m.z2 == doctest::Approx(0.0));
  CHECK(m.y1 == doctest::Approx(1.0));
  CHECK(m.x == doctest::Approx(1.0));
}

TEST_CASE("projection of the lift equals the magnetic geodesic") {
  const double a = 1.0, b = 1.0;
  PencilMomentum nu{1.3, 0.6, Branch::plus};
  const VecPoly G = nu.poly(a, b);
  const Poly V = potential(G);
  const double xp = pencil_root(a, b, 1.3, 0.6, Branch::plus);
  IntegrateOptions opts;
  opts.tol = 1e-12;
  Trajectory red = integrate_reduced(V, {0.0, xp, 0.0}, {-4.0, 4.0}, opts);
  JetPoint start = JetPoint::origin();
  start.x = xp;
  Trajectory jet = lift_jet(G, red, start, opts);
  Trajectory proj = project_magnetic(a, b, jet);
  Trajectory mag = geodesic_magnetic(a, b, nu, red, {xp, 0, 0, 0, 0}, opts);
  for (double t : {-3.5, -1.0, 0.0, 0.7, 2.2, 3.9}) {
    const auto u = proj.state_at(t);
    const auto v = mag.state_at(t);
    for (int c = 0; c < 5; ++c) CHECK(std::abs(u[c] - v[c]) <= 1e-6);
  }
}

TEST_CASE("translation is a shift with an inverse") {
  MagneticPoint p{0.3, 1.0, -2.0, 0.5, 0.25};
  const MagneticPoint same = translate(p, {0, 0}, {0, 0});
  CHECK(same.y1 == p.y1);
  CHECK(same.z2 == p.z2);
  const MagneticPoint back = translate(translate(p, {1, 2}, {3, 4}), {-1, -2}, {-3, -4});
  CHECK(back.x == doctest::Approx(p.x));
  CHECK(back.y1 == doctest::Approx(p.y1));
  CHECK(back.y2 == doctest::Approx(p.y2));
  CHECK(back.z1 == doctest::Approx(p.z1));
  CHECK(back.z2 == doctest::Approx(p.z2));
}

TEST_CASE("translation preserves distances between samples") {
  MagneticPoint p{0.0, 1.0, 2.0, 3.0, 4.0};
  MagneticPoint q{0.5, -1.0, 0.0, 1.0, 2.0};
  auto dist = [](const MagneticPoint& u, const MagneticPoint& v) {
    return std::hypot(std::hypot(u.x - v.x, u.y1 - v.y1),
                      std::hypot(std::hypot(u.y2 - v.y2, u.z1 - v.z1), u.z2 - v.z2));
  };
  const double before = dist(p, q);
  const MagneticPoint ps = translate(p, {2, -1}, {0.5, 3});
  const MagneticPoint qs = translate(q, {2, -1}, {0.5, 3});
  CHECK(dist(ps, qs) == doctest::Approx(before).epsilon(1e-14));
}

TEST_CASE("periodic orbit returns after the quadrature period") {
  // Both hill endpoints simple: the reduced orbit is a closed oval and the
  // half period equals the dphi-length of one traversal.
  const VecPoly P(Poly{0.9, 0.0, -1.0}, Poly{0.0, 0.3});
  const Poly V = potential(P);
  const auto hills = hill_intervals(V);
  const HillInterval I = hills.back();
  REQUIRE(I.mult0 == 1);
  REQUIRE(I.mult1 == 1);
  const QuadResult half =
      integrate_phi({Poly::constant(1.0), V, PhiIntegrand::make_leg(V, I.x0, I.x1)});
  IntegrateOptions opts;
  opts.tol = 1e-12;
  Trajectory tr = integrate_reduced(V, {0.0, I.x1, 0.0}, {0.0, 2.2 * half.value}, opts);
  CHECK(std::abs(tr.state_at(half.value)[1] - I.x0) <= 1e-7);
  CHECK(std::abs(tr.state_at(2.0 * half.value)[1] - I.x1) <= 1e-7);
}

TEST_CASE("csv export carries full precision") {
  Trajectory tr = integrate_reduced(Poly{0.0}, {1.0, 0.0, 0.0}, {0.0, 0.5});
  std::ostringstream os;
  tr.write_csv(os);
  const std::string text = os.str();
  CHECK(text.substr(0, text.find('\n')) == "t,p_x,x");
  // Round-trip one sampled value.
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  std::getline(is, line);
  const size_t c1 = line.find(','), c2 = line.find(',', c1 + 1);
  CHECK(std::stod(line.substr(c1 + 1, c2 - c1 - 1)) == tr.states[0][0]);
}

TEST_SUITE_END();
