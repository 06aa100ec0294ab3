#include "jetgeo/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jetgeo/errors.hpp"

namespace jetgeo {

Poly::Poly(std::initializer_list<double> coeffs) : c_(coeffs) { trim(); }

Poly::Poly(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

void Poly::trim() {
  while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
  if (c_.empty()) c_.push_back(0.0);
}

double Poly::operator()(double x) const {
  double v = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + *it;
  return v;
}

bool Poly::is_zero() const { return c_.size() == 1 && c_[0] == 0.0; }

double Poly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return 0.0;
  return c_[i];
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly{};
  std::vector<double> d(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
  return Poly(std::move(d));
}

double Poly::derivative_at(double x, int order) const {
  Poly p = *this;
  for (int i = 0; i < order; ++i) p = p.derivative();
  return p(x);
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
  for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return Poly(std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + (o * -1.0); }

Poly Poly::operator*(const Poly& o) const {
  std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return Poly(std::move(r));
}

Poly Poly::operator*(double s) const {
  std::vector<double> r(c_);
  for (double& v : r) v *= s;
  return Poly(std::move(r));
}

double Poly::inf_norm() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

Poly Poly::deflate(double root, double* remainder) const {
  if (c_.size() == 1) {
    if (remainder) *remainder = c_[0];
    return Poly{};
  }
  std::vector<double> q(c_.size() - 1, 0.0);
  double carry = c_.back();
  for (int i = static_cast<int>(c_.size()) - 2; i >= 0; --i) {
    q[i] = carry;
    carry = c_[i] + carry * root;
  }
  if (remainder) *remainder = carry;
  return Poly(std::move(q));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& d) const {
  if (d.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<double> rem(c_);
  const int dn = d.degree();
  const double lead = d.c_.back();
  if (static_cast<int>(rem.size()) - 1 < dn) return {Poly{}, Poly(rem)};
  std::vector<double> quot(rem.size() - dn, 0.0);
  for (int i = static_cast<int>(rem.size()) - 1; i >= dn; --i) {
    double f = rem[i] / lead;
    quot[i - dn] = f;
    for (int j = 0; j <= dn; ++j) rem[i - dn + j] -= f * d.c_[j];
    rem[i] = 0.0;
  }
  rem.resize(dn > 0 ? dn : 1);
  return {Poly(std::move(quot)), Poly(std::move(rem))};
}

VecPoly::VecPoly(std::vector<Poly> components) : comps_(std::move(components)) {
  if (comps_.empty()) throw DomainError("VecPoly needs at least one component");
}

std::vector<double> VecPoly::eval(double x) const {
  std::vector<double> v(comps_.size());
  for (size_t i = 0; i < comps_.size(); ++i) v[i] = comps_[i](x);
  return v;
}

VecPoly VecPoly::derivative() const {
  std::vector<Poly> d;
  d.reserve(comps_.size());
  for (const Poly& p : comps_) d.push_back(p.derivative());
  return VecPoly(std::move(d));
}

int VecPoly::max_degree() const {
  int d = 0;
  for (const Poly& p : comps_) d = std::max(d, p.degree());
  return d;
}

bool VecPoly::is_constant() const {
  for (const Poly& p : comps_)
    if (p.degree() > 0) return false;
  return true;
}

Poly potential(const VecPoly& p) {
  Poly v{};
  for (int i = 0; i < p.size(); ++i) v = v + p[i] * p[i];
  return v;
}

namespace {

// Sturm chain with early termination: when a remainder collapses relative to
// its dividend the last entry is (numerically) gcd(q, q'), and the variation
// count V(a) - V(b) still counts distinct real roots in (a, b].
std::vector<Poly> sturm_chain(const Poly& q) {
  std::vector<Poly> chain;
  Poly p0 = q;
  Poly p1 = q.derivative();
  chain.push_back(p0);
  if (p1.is_zero()) return chain;
  chain.push_back(p1);
  while (chain.back().degree() > 0) {
    const Poly& a = chain[chain.size() - 2];
    const Poly& b = chain.back();
    Poly rem = a.divmod(b).second;
    if (rem.inf_norm() <= 1e-13 * std::max(1.0, a.inf_norm())) break;
    chain.push_back(rem * -1.0);
  }
  return chain;
}

int sign_of(double v, double eps) {
  if (std::abs(v) <= eps) return 0;
  return v > 0 ? 1 : -1;
}

int variations(const std::vector<Poly>& chain, double x) {
  int count = 0;
  int prev = 0;
  for (const Poly& p : chain) {
    double eps = 1e-14 * std::max(1.0, p.inf_norm()) *
                 std::max(1.0, std::pow(std::abs(x), p.degree()));
    int s = sign_of(p(x), eps);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++count;
    prev = s;
  }
  return count;
}

int multiplicity_at(const Poly& q, double r) {
  const double thr = 1e-9 * std::max(1.0, q.inf_norm());
  int m = 1;
  Poly d = q.derivative();
  while (m < std::max(1, q.degree()) && std::abs(d(r)) <= thr) {
    ++m;
    d = d.derivative();
  }
  return m;
}

double bisect_refine(const Poly& q, double a, double b) {
  double fa = q(a);
  for (int it = 0; it < 200 && b - a > 1e-16 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
    double m = 0.5 * (a + b);
    double fm = q(m);
    if (fm == 0.0) return m;
    if ((fa < 0) != (fm < 0)) {
      b = m;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

double newton_polish(const Poly& q, double r, double lo, double hi) {
  Poly d = q.derivative();
  double best = r;
  double best_val = std::abs(q(r));
  for (int it = 0; it < 12; ++it) {
    double dv = d(r);
    if (dv == 0.0) break;
    double next = r - q(r) / dv;
    if (!(next >= lo && next <= hi)) break;
    double val = std::abs(q(next));
    if (val < best_val) {
      best = next;
      best_val = val;
    }
    if (std::abs(next - r) <= 1e-17 * std::max(1.0, std::abs(next))) break;
    r = next;
  }
  return best;
}

// One distinct root of q lies in [a, b] but q does not change sign there:
// it has even multiplicity, so it is also a critical point.
std::optional<double> even_root_in(const Poly& q, double a, double b) {
  Poly d = q.derivative();
  if (d.is_zero()) return std::nullopt;
  std::vector<PolyRoot> crit = real_roots(d, std::make_pair(a, b));
  double best = std::numeric_limits<double>::quiet_NaN();
  double best_val = std::numeric_limits<double>::infinity();
  for (const PolyRoot& c : crit) {
    double v = std::abs(q(c.x));
    if (v < best_val) {
      best_val = v;
      best = c.x;
    }
  }
  if (!(best_val < std::numeric_limits<double>::infinity())) return std::nullopt;
  if (best_val > 1e-12 * std::max(1.0, q.inf_norm())) return std::nullopt;
  return best;
}

}  // namespace

std::vector<PolyRoot> real_roots(const Poly& q,
                                 std::optional<std::pair<double, double>> range) {
  // Coefficient noise below 1e-12 of the largest coefficient is treated as
  // zero when deciding the effective degree.
  std::vector<double> cs = q.coeffs();
  const double scale = q.inf_norm();
  while (cs.size() > 1 && std::abs(cs.back()) <= 1e-12 * scale) cs.pop_back();
  Poly p(cs);
  if (p.degree() == 0) return {};

  double lo, hi;
  if (range) {
    lo = range->first;
    hi = range->second;
  } else {
    // Cauchy bound on root magnitude.
    double m = 0.0;
    const auto& c = p.coeffs();
    for (size_t i = 0; i + 1 < c.size(); ++i)
      m = std::max(m, std::abs(c[i] / c.back()));
    double bound = 1.0 + m;
    lo = -bound;
    hi = bound;
  }
  if (!(lo < hi)) return {};

  std::vector<Poly> chain = sturm_chain(p);
  std::vector<PolyRoot> out;

  struct Seg {
    double a, b;
    int count;
  };
  std::vector<Seg> stack;
  // Nudge endpoints off exact roots so variation counts are unambiguous.
  auto count_between = [&](double a, double b) {
    return variations(chain, a) - variations(chain, b);
  };
  {
    double pad = 1e-12 * std::max(1.0, std::abs(lo) + std::abs(hi));
    double a = lo - pad, b = hi + pad;
    int n = count_between(a, b);
    if (n > 0) stack.push_back({a, b, n});
    // A root exactly at the range's lower edge lies in (a-, a+] of nothing;
    // the pad above keeps it inside [a, b].
  }

  const double width_floor = 1e-14;
  while (!stack.empty()) {
    Seg s = stack.back();
    stack.pop_back();
    double w = s.b - s.a;
    double local_scale = std::max(1.0, std::abs(s.a) + std::abs(s.b));
    if (s.count == 1 || w <= width_floor * local_scale) {
      double r;
      if (q(s.a) * q(s.b) < 0) {
        r = bisect_refine(p, s.a, s.b);
        r = newton_polish(p, r, s.a, s.b);
      } else {
        auto er = even_root_in(p, s.a, s.b);
        if (!er) {
          if (w <= width_floor * local_scale) {
            r = 0.5 * (s.a + s.b);  // clustered roots: report the midpoint
          } else {
            throw NonConvergence("real_roots: could not refine even-multiplicity root");
          }
        } else {
          r = *er;
        }
      }
      if (std::abs(p(r)) > 1e-12 * std::max(1.0, p.inf_norm()) *
                              std::max(1.0, std::pow(std::abs(r), p.degree())))
        throw NonConvergence("real_roots: refinement stalled");
      out.push_back({r, multiplicity_at(p, r)});
      continue;
    }
    double m = 0.5 * (s.a + s.b);
    // If the midpoint is (nearly) a root, shift it so the split is clean.
    if (std::abs(p(m)) <= 1e-13 * std::max(1.0, p.inf_norm())) m += 1e-9 * local_scale;
    int left = count_between(s.a, m);
    int right = s.count - left;
    if (left > 0) stack.push_back({s.a, m, left});
    if (right > 0) stack.push_back({m, s.b, right});
    if (left == 0 && right == 0) continue;
  }

  std::sort(out.begin(), out.end(),
            [](const PolyRoot& a, const PolyRoot& b) { return a.x < b.x; });
  // Merge near-duplicates from adjacent segments.
  std::vector<PolyRoot> merged;
  for (const PolyRoot& r : out) {
    if (!merged.empty() &&
        std::abs(r.x - merged.back().x) <= 1e-10 * std::max(1.0, std::abs(r.x))) {
      merged.back().multiplicity = std::max(merged.back().multiplicity, r.multiplicity);
    } else {
      merged.push_back(r);
    }
  }
  // Keep the multiplicity sum within the degree.
  int total = 0;
  for (const PolyRoot& r : merged) total += r.multiplicity;
  for (size_t i = merged.size(); total > p.degree() && i-- > 0;) {
    int excess = total - p.degree();
    int cut = std::min(excess, merged[i].multiplicity - 1);
    merged[i].multiplicity -= cut;
    total -= cut;
  }
  if (range) {
    std::vector<PolyRoot> inside;
    for (const PolyRoot& r : merged)
      if (r.x >= range->first - 1e-12 && r.x <= range->second + 1e-12)
        inside.push_back(r);
    return inside;
  }
  return merged;
}

}  // namespace jetgeo
