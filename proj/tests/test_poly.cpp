#include <doctest.h>

#include <cmath>
#include <random>

#include "jetgeo/errors.hpp"
#include "jetgeo/momentum.hpp"
#include "jetgeo/poly.hpp"

using namespace jetgeo;

TEST_SUITE_BEGIN("poly");

namespace {
VecPoly base_poly(double a, double b) {
  return VecPoly(Poly{1.0, 0.0, -1.0}, Poly{0.0, b, a});
}
}  // namespace

TEST_CASE("vector polynomial evaluation") {
  const VecPoly p11 = base_poly(1, 1);
  CHECK(p11.eval(0.0)[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p11.eval(0.0)[1] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(p11.eval(1.0)[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(p11.eval(1.0)[1] == doctest::Approx(2.0).epsilon(1e-15));
  const VecPoly p01 = base_poly(0, 1);
  CHECK(p01.eval(0.5)[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(p01.eval(0.5)[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("derivative drops the degree") {
  const Poly p{1.0, 2.0, 3.0};  // 1 + 2x + 3x^2
  CHECK(p.derivative().degree() == 1);
  CHECK(p.derivative()(2.0) == doctest::Approx(14.0));
  CHECK(Poly{5.0}.derivative().is_zero());
}

TEST_CASE("potential of simple polynomials") {
  const Poly v1 = potential(VecPoly(Poly{1.0}, Poly{0.0}));
  CHECK(v1.degree() == 0);
  CHECK(v1(3.7) == doctest::Approx(1.0));

  const Poly v2 = potential(VecPoly(Poly{1.0, 0.0, -1.0}, Poly{0.0}));
  for (double x : {-1.5, -0.3, 0.0, 0.7, 2.0}) {
    const double w = (1 - x * x);
    CHECK(v2(x) == doctest::Approx(w * w).epsilon(1e-14));
  }

  const Poly v3 = potential(base_poly(1, 1));
  for (double x : {-0.8, 0.1, 0.9}) {
    const double w = (1 - x * x), u = x + x * x;
    CHECK(v3(x) == doctest::Approx(w * w + u * u).epsilon(1e-14));
  }
}

TEST_CASE("potential coefficients agree with value-space evaluation") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    VecPoly p(Poly{coef(rng), coef(rng), coef(rng)}, Poly{coef(rng), coef(rng), coef(rng)});
    const Poly V = potential(p);
    const double x = coef(rng);
    const auto v = p.eval(x);
    const double want = v[0] * v[0] + v[1] * v[1];
    CHECK(std::abs(V(x) - want) <= 1e-13 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("real roots of factored quartics") {
  // x^2 (x^2 - 2)
  const auto roots = real_roots(Poly{0.0, 0.0, -2.0, 0.0, 1.0});
  REQUIRE(roots.size() == 3);
  CHECK(roots[0].x == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
  CHECK(roots[0].multiplicity == 1);
  CHECK(roots[1].x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(roots[1].multiplicity == 2);
  CHECK(roots[2].x == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(roots[2].multiplicity == 1);
}

TEST_CASE("real roots: double root only") {
  const auto roots = real_roots(Poly{1.0, -2.0, 1.0});  // (x-1)^2
  REQUIRE(roots.size() == 1);
  CHECK(roots[0].x == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(roots[0].multiplicity == 2);
}

TEST_CASE("real roots of 1 - V for (a,b) = (0,1), tau = eta = 1") {
  PencilMomentum nu{1.0, 1.0, Branch::plus};
  const Poly W = Poly::constant(1.0) - potential(nu.poly(0.0, 1.0));
  const auto roots = real_roots(W);
  bool saw_plus_one = false;
  for (const auto& r : roots) {
    if (std::abs(r.x - 1.0) < 1e-10) {
      saw_plus_one = true;
      CHECK(r.multiplicity == 1);
    }
  }
  CHECK(saw_plus_one);
}

TEST_CASE("real roots are ascending and multiplicities bounded by degree") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 100; ++trial) {
    // Product of two random quadratics, occasionally sharing a root.
    const double r1 = u(rng), r2 = u(rng);
    Poly q = Poly{-r1, 1.0} * Poly{-r2, 1.0} * Poly{u(rng), u(rng), 1.0};
    const auto roots = real_roots(q);
    int total = 0;
    for (size_t i = 0; i < roots.size(); ++i) {
      total += roots[i].multiplicity;
      if (i > 0) CHECK(roots[i - 1].x < roots[i].x);
    }
    CHECK(total <= q.degree());
  }
}

TEST_CASE("theta coordinates at the candidate momentum") {
  PencilMomentum nu{1.0, 1.0, Branch::plus};
  const ThetaCoords th = theta_coords(nu, 1.0, 1.0);
  // Quadratic data straight from the definitions.
  CHECK(th.A == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(th.B == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(th.C == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(th.discriminant == doctest::Approx(12.0).epsilon(1e-15));
  CHECK(th.v1 == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(th.v2 == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(th.v3 == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("theta2 vanishes when b = 0") {
  PencilMomentum nu{1.0, 0.8, Branch::plus};
  CHECK(theta_coords(nu, 1.0, 0.0).v2 == 0.0);
}

TEST_CASE("factorization reconstructs 1 - V") {
  PencilMomentum nu{1.0, 1.0, Branch::plus};
  const ThetaCoords th = theta_coords(nu, 1.0, 1.0);
  const Poly W = Poly::constant(1.0) - potential(nu.poly(1.0, 1.0));
  const double x = 0.3;
  const double w = th.v1 * x + th.v2;
  CHECK(std::abs(th.v3 * x * x * (1 - w * w) - W(x)) <= 1e-12);
}

TEST_CASE("factorization identity across the admissible grid") {
  for (int i = 0; i < 20; ++i) {
    const double tau = 0.3 + 2.2 * i / 19.0;
    for (int j = 0; j < 20; ++j) {
      const double lim = 0.95 * std::sqrt(2.0 * tau);
      const double eta = -lim + 2 * lim * j / 19.0;
      PencilMomentum nu{tau, eta, Branch::plus};
      if (!nu.in_domain(1.0, 1.0)) continue;
      const ThetaCoords th = theta_coords(nu, 1.0, 1.0);
      CHECK(th.v1 > 0.0);
      CHECK(std::abs(th.v2) <= 1.0);
      CHECK(th.v3 > 0.0);
      const Poly W = Poly::constant(1.0) - potential(nu.poly(1.0, 1.0));
      for (int s = 0; s < 50; ++s) {
        const double x = -1.0 + 2.0 * s / 49.0;
        const double w = th.v1 * x + th.v2;
        CHECK(std::abs(th.v3 * x * x * (1 - w * w) - W(x)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("theta_inverse round trips") {
  for (auto [a, b, tau, eta] : {std::array<double, 4>{1, 1, 1, 1},
                                std::array<double, 4>{2, 1, 1.5, 0.5}}) {
    PencilMomentum nu{tau, eta, Branch::plus};
    const PencilMomentum back = theta_inverse(theta_coords(nu, a, b), a, b);
    CHECK(std::abs(back.tau - tau) <= 1e-10);
    CHECK(std::abs(back.eta - eta) <= 1e-10);
  }
}

TEST_CASE("theta_inverse rejects the wrong sign quadrant") {
  ThetaCoords th;
  th.v1 = 1.0;
  th.v2 = 0.5;  // positive while ab < 0
  th.v3 = 1.0;
  CHECK_THROWS_AS(theta_inverse(th, 1.0, -1.0), DomainError);
  CHECK_THROWS_AS(theta_inverse(th, 0.0, 1.0), DomainError);
}

TEST_CASE("degenerate discriminant is rejected") {
  // tau < 0 puts the quadratic data outside the admissible family.
  PencilMomentum nu{-1.0, 0.0, Branch::plus};
  CHECK_THROWS_AS(theta_coords(nu, 1.0, 1.0), DegenerateDiscriminant);
}

TEST_SUITE_END();
