#pragma once

#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

namespace jetgeo {

/// Dense real polynomial in the monomial basis, coefficient of x^i at index i.
/// Degrees stay small (<= 4 through the whole pipeline), so no attempt is made
/// to fight conditioning beyond exact coefficient arithmetic.
class Poly {
 public:
  Poly() : c_{0.0} {}
  Poly(std::initializer_list<double> coeffs);
  explicit Poly(std::vector<double> coeffs);

  static Poly constant(double c) { return Poly{c}; }

  /// Horner evaluation.
  double operator()(double x) const;

  /// Degree after trimming exact trailing zeros; the zero polynomial has
  /// degree 0.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const;
  const std::vector<double>& coeffs() const { return c_; }
  double coeff(int i) const;

  Poly derivative() const;
  /// n-th derivative evaluated at x.
  double derivative_at(double x, int order) const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(double s) const;
  Poly operator-() const { return *this * -1.0; }

  /// Largest absolute coefficient.
  double inf_norm() const;

  /// Synthetic division by (x - root). Returns the quotient; *remainder (if
  /// given) receives the value at the root.
  Poly deflate(double root, double* remainder = nullptr) const;

  /// Euclidean division: returns {quotient, remainder}.
  std::pair<Poly, Poly> divmod(const Poly& d) const;

 private:
  void trim();
  std::vector<double> c_;
};

/// Vector-valued polynomial P(x) = (P_1(x), ..., P_n(x)).
class VecPoly {
 public:
  explicit VecPoly(std::vector<Poly> components);
  VecPoly(Poly p1, Poly p2) : comps_{std::move(p1), std::move(p2)} {}

  int size() const { return static_cast<int>(comps_.size()); }
  const Poly& operator[](int i) const { return comps_[i]; }

  std::vector<double> eval(double x) const;
  VecPoly derivative() const;
  int max_degree() const;
  bool is_constant() const;

 private:
  std::vector<Poly> comps_;
};

/// V(x) = ||P(x)||^2, computed exactly by coefficient convolution.
Poly potential(const VecPoly& p);

struct PolyRoot {
  double x;
  int multiplicity;
};

/// All real roots of q, ascending, with multiplicities. Isolation uses a
/// Sturm sequence (sign-variation counts) followed by bisection and a guarded
/// Newton polish; multiplicity is read off derivative magnitudes with the
/// 1e-9 * max(1, |q|_inf) threshold. An optional range restricts the search.
/// Throws NonConvergence when an isolated root cannot be refined to
/// |q(root)| <= 1e-12 * |q|_inf.
std::vector<PolyRoot> real_roots(
    const Poly& q, std::optional<std::pair<double, double>> range = {});

}  // namespace jetgeo
