#include "algebra/ratfunc.hpp"

#include <utility>

namespace lucid {

RationalFunction::RationalFunction(LaurentPoly num)
    : num_(std::move(num)), den_(LaurentPoly::one(num_.vars())) {
  canonicalize();
}

RationalFunction::RationalFunction(LaurentPoly num, LaurentPoly den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (!same_vars(num_.vars(), den_.vars()))
    fail(errc::invalid, "numerator and denominator use different variable sets");
  canonicalize();
}

void RationalFunction::canonicalize() {
  if (den_.is_zero()) fail(errc::singular, "division by zero");
  if (num_.is_zero()) {
    den_ = LaurentPoly::one(num_.vars());
    return;
  }

  // Clear negative exponents into the fraction so both parts are ordinary
  // polynomials.
  std::size_t n = num_.vars()->size();
  Monomial shift = Monomial::unit(n);
  bool shifted = false;
  for (std::size_t i = 0; i < n; ++i) {
    int low = std::min(num_.low_degree(i), den_.low_degree(i));
    if (low < 0) {
      shift.exp[i] = -low;
      shifted = true;
    }
  }
  if (shifted) {
    num_ = num_.mul_monomial(shift);
    den_ = den_.mul_monomial(shift);
  }

  if (!den_.is_one()) {
    LaurentPoly g = poly_gcd(num_, den_);
    if (!g.is_one()) {
      num_ = divide_exact(num_, g);
      den_ = divide_exact(den_, g);
    }
  }

  Rational s;
  den_ = normalize_primitive(den_, &s);
  if (s != 1) num_ = num_.scaled(Rational(1) / s);
}

Rational RationalFunction::constant_value() const {
  if (!is_constant()) fail(errc::invalid, "rational function is not constant");
  return num_.constant_value();
}

std::int64_t RationalFunction::degree_weight() const {
  std::int64_t w = den_.leading().first.total_degree();
  if (!num_.is_zero()) w += num_.leading().first.total_degree();
  return w;
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

// Both fractions are reduced, so a common denominator factor g is the only
// cancellation a sum can pick up beyond gcd(num, g); splitting it off keeps
// every gcd call on operands no larger than the inputs.
RationalFunction RationalFunction::add_scaled(const RationalFunction& o, int sign) const {
  const LaurentPoly on = sign < 0 ? -o.num_ : o.num_;
  if (den_.is_one() && o.den_.is_one()) {
    RationalFunction r;
    r.num_ = num_ + on;
    r.den_ = LaurentPoly::one(vars());
    return r;
  }
  LaurentPoly g = poly_gcd(den_, o.den_);
  if (g.is_one()) {
    // Coprime denominators: the sum is already reduced and den stays
    // primitive with a positive leading coefficient.
    RationalFunction r;
    r.num_ = num_ * o.den_ + on * den_;
    r.den_ = r.num_.is_zero() ? LaurentPoly::one(vars()) : den_ * o.den_;
    return r;
  }
  const LaurentPoly db = divide_exact(o.den_, g);
  return RationalFunction(num_ * db + on * divide_exact(den_, g), den_ * db);
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
  return add_scaled(o, 1);
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
  return add_scaled(o, -1);
}

// Cross-reduction: with gcd(num, o.den) and gcd(o.num, den) divided out, the
// four parts are pairwise coprime and the product needs no further gcd.
RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
  if (is_zero() || o.is_zero()) return zero(vars());
  RationalFunction r;
  if (den_.is_one() && o.den_.is_one()) {
    r.num_ = num_ * o.num_;
    r.den_ = LaurentPoly::one(vars());
    return r;
  }
  const LaurentPoly g1 = poly_gcd(num_, o.den_);
  const LaurentPoly g2 = poly_gcd(o.num_, den_);
  r.num_ = divide_exact(num_, g1) * divide_exact(o.num_, g2);
  r.den_ = divide_exact(den_, g2) * divide_exact(o.den_, g1);
  return r;
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
  return *this * o.inverse();
}

RationalFunction RationalFunction::inverse() const {
  if (is_zero()) fail(errc::singular, "division by zero");
  // The parts are coprime already; only the normalization moves.
  RationalFunction r;
  Rational s;
  r.den_ = normalize_primitive(num_, &s);
  r.num_ = den_.scaled(Rational(1) / s);
  return r;
}

RationalFunction RationalFunction::pow(long long e) const {
  if (e == 0) return one(vars());
  if (e < 0) return inverse().pow(-e);
  // Powers of a reduced fraction stay reduced and keep the denominator
  // primitive with a positive leading coefficient, so skip canonicalize().
  RationalFunction r;
  r.num_ = num_.pow(static_cast<unsigned>(e));
  r.den_ = den_.pow(static_cast<unsigned>(e));
  return r;
}

RationalFunction RationalFunction::scaled(const Rational& c) const {
  if (c == 0) return zero(vars());
  RationalFunction r = *this;
  r.num_ = r.num_.scaled(c);
  return r;
}

Rational RationalFunction::evaluate(const std::vector<Rational>& values) const {
  Rational d = den_.evaluate(values);
  if (d == 0)
    fail(errc::singular, "denominator " + den_.render() + " vanishes at the given values");
  return num_.evaluate(values) / d;
}

RationalFunction RationalFunction::substitute(const std::vector<RationalFunction>& values) const {
  RationalFunction d = lucid::substitute(den_, values);
  if (d.is_zero())
    fail(errc::singular, "denominator " + den_.render() + " vanishes under the substitution");
  return lucid::substitute(num_, values) / d;
}

std::string RationalFunction::render() const {
  if (den_.is_one()) return num_.render();
  std::string ns = num_.render();
  if (!num_.is_single_term()) ns = "(" + ns + ")";
  // The denominator may stand bare only when it reads as a single atom: one
  // variable, coefficient one, to a positive power.
  bool bare = false;
  if (den_.is_single_term()) {
    const auto& [m, c] = *den_.terms().begin();
    int nvars = 0;
    for (auto e : m.exp)
      if (e != 0) ++nvars;
    bare = (c == 1 && nvars == 1);
  }
  std::string ds = den_.render();
  if (!bare) ds = "(" + ds + ")";
  return ns + "/" + ds;
}

RationalFunction substitute(const LaurentPoly& p, const std::vector<RationalFunction>& values) {
  if (values.size() != p.vars()->size())
    fail(errc::invalid, "substitution needs one value per variable");
  VarSetPtr target = values.empty() ? p.vars() : values[0].vars();
  for (const auto& v : values)
    if (!same_vars(v.vars(), target))
      fail(errc::invalid, "substitution values use different variable sets");
  RationalFunction out = RationalFunction::zero(target);
  for (const auto& [m, c] : p.terms()) {
    RationalFunction term = RationalFunction::constant(target, c);
    for (std::size_t i = 0; i < m.exp.size(); ++i)
      if (m.exp[i] != 0) term *= values[i].pow(m.exp[i]);
    out += term;
  }
  return out;
}

}  // namespace lucid
