#include "algebra/poly.hpp"

#include <sstream>

namespace lucid {

namespace {

void require_same_vars(const LaurentPoly& a, const LaurentPoly& b) {
  if (!same_vars(a.vars(), b.vars()))
    fail(errc::internal, "polynomial operands over different variable sets");
}

}  // namespace

LaurentPoly LaurentPoly::constant(VarSetPtr vars, Rational c) {
  LaurentPoly p(std::move(vars));
  if (c != 0) p.terms_.emplace(Monomial::unit(p.vars_->size()), std::move(c));
  return p;
}

LaurentPoly LaurentPoly::variable(VarSetPtr vars, std::size_t index, int exponent) {
  LaurentPoly p(std::move(vars));
  Monomial m = Monomial::unit(p.vars_->size());
  m.exp[index] = exponent;
  if (exponent == 0)
    p.terms_.emplace(Monomial::unit(p.vars_->size()), Rational(1));
  else
    p.terms_.emplace(std::move(m), Rational(1));
  return p;
}

LaurentPoly LaurentPoly::monomial(VarSetPtr vars, Monomial m, Rational c) {
  LaurentPoly p(std::move(vars));
  if (c != 0) p.terms_.emplace(std::move(m), std::move(c));
  return p;
}

bool LaurentPoly::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && terms_.begin()->first.is_unit();
}

bool LaurentPoly::is_one() const {
  return terms_.size() == 1 && terms_.begin()->first.is_unit() && terms_.begin()->second == 1;
}

bool LaurentPoly::nonnegative() const {
  for (const auto& [m, c] : terms_)
    if (!m.nonnegative()) return false;
  return true;
}

Rational LaurentPoly::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (!is_constant()) fail(errc::internal, "constant_value on non-constant polynomial");
  return terms_.begin()->second;
}

const std::pair<const Monomial, Rational>& LaurentPoly::leading() const {
  if (terms_.empty()) fail(errc::internal, "leading term of zero polynomial");
  return *terms_.rbegin();
}

int LaurentPoly::degree(std::size_t var) const {
  int d = 0;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (first || m.exp[var] > d) d = m.exp[var];
    first = false;
  }
  return d;
}

int LaurentPoly::low_degree(std::size_t var) const {
  int d = 0;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (first || m.exp[var] < d) d = m.exp[var];
    first = false;
  }
  return d;
}

void LaurentPoly::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r(vars_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  LaurentPoly r = *this;
  r += o;
  return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
  LaurentPoly r = *this;
  r -= o;
  return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  require_same_vars(*this, o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  require_same_vars(*this, o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  require_same_vars(*this, o);
  LaurentPoly r(vars_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

LaurentPoly LaurentPoly::scaled(const Rational& c) const {
  LaurentPoly r(vars_);
  if (c == 0) return r;
  for (const auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
  return r;
}

LaurentPoly LaurentPoly::mul_monomial(const Monomial& m, const Rational& c) const {
  LaurentPoly r(vars_);
  if (c == 0) return r;
  for (const auto& [mm, v] : terms_) r.terms_.emplace(mm * m, v * c);
  return r;
}

LaurentPoly LaurentPoly::pow(unsigned n) const {
  LaurentPoly acc = one(vars_);
  LaurentPoly base = *this;
  while (n > 0) {
    if (n & 1) acc *= base;
    base *= base;
    n >>= 1;
  }
  return acc;
}

LaurentPoly LaurentPoly::coeff_at(std::size_t var, int d) const {
  LaurentPoly r(vars_);
  for (const auto& [m, c] : terms_) {
    if (m.exp[var] != d) continue;
    Monomial stripped = m;
    stripped.exp[var] = 0;
    r.terms_.emplace(std::move(stripped), c);
  }
  return r;
}

Rational LaurentPoly::evaluate(const std::vector<Rational>& values) const {
  if (values.size() != vars_->size()) fail(errc::internal, "evaluate: wrong value count");
  Rational sum(0);
  for (const auto& [m, c] : terms_) {
    Rational term = c;
    for (std::size_t i = 0; i < m.exp.size(); ++i) {
      if (m.exp[i] == 0) continue;
      if (values[i] == 0 && m.exp[i] < 0)
        fail(errc::singular, "evaluation hits a pole: " + vars_->name(i) + " = 0 raised to a negative power");
      term *= rat_pow(values[i], m.exp[i]);
    }
    sum += term;
  }
  return sum;
}

std::string LaurentPoly::render() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  // Descending graded-lex reads like handwritten polynomials.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    Rational a = c;
    if (first) {
      if (a < 0) {
        out << "-";
        a = -a;
      }
    } else {
      out << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;

    std::string mono;
    for (std::size_t i = 0; i < m.exp.size(); ++i) {
      if (m.exp[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars_->name(i);
      if (m.exp[i] != 1) mono += "^" + std::to_string(m.exp[i]);
    }
    if (mono.empty()) {
      out << to_string(a);
    } else if (a == 1) {
      out << mono;
    } else {
      out << to_string(a) << "*" << mono;
    }
  }
  return out.str();
}

bool LaurentPoly::operator==(const LaurentPoly& o) const {
  return same_vars(vars_, o.vars_) && terms_ == o.terms_;
}

Rational rat_content(const LaurentPoly& f) {
  if (f.is_zero()) fail(errc::internal, "content of zero polynomial");
  Rational g(0);
  for (const auto& [m, c] : f.terms()) g = rat_gcd(g, c);
  return g;
}

LaurentPoly normalize_primitive(const LaurentPoly& f, Rational* scale_out) {
  if (f.is_zero()) {
    if (scale_out) *scale_out = Rational(1);
    return f;
  }
  Rational s = rat_content(f);
  if (f.leading().second < 0) s = -s;
  if (scale_out) *scale_out = s;
  return f.scaled(Rational(1) / s);
}

bool try_divide_exact(const LaurentPoly& a, const LaurentPoly& b, LaurentPoly& quotient) {
  require_same_vars(a, b);
  if (b.is_zero()) fail(errc::internal, "exact division by zero polynomial");
  if (!a.nonnegative() || !b.nonnegative())
    fail(errc::invalid, "exact division requires nonnegative exponents");
  LaurentPoly q(a.vars());
  LaurentPoly r = a;
  const auto& [lbm, lbc] = b.leading();
  while (!r.is_zero()) {
    const auto& [lrm, lrc] = r.leading();
    if (!lbm.divides(lrm)) return false;
    Monomial m = lrm.div(lbm);
    Rational c = lrc / lbc;
    q.add_term(m, c);
    r -= b.mul_monomial(m, c);
  }
  quotient = std::move(q);
  return true;
}

LaurentPoly divide_exact(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly q;
  if (!try_divide_exact(a, b, q)) fail(errc::internal, "division was not exact");
  return q;
}

namespace {

// gcd of a single-term polynomial with anything: the common monomial part.
LaurentPoly monomial_gcd(const LaurentPoly& mono, const LaurentPoly& other) {
  Monomial g = mono.terms().begin()->first;
  for (std::size_t v = 0; v < g.exp.size(); ++v) {
    if (g.exp[v] == 0) continue;
    int lo = other.low_degree(v);
    if (lo < g.exp[v]) g.exp[v] = lo;
  }
  return LaurentPoly::monomial(mono.vars(), g, Rational(1));
}

// First variable that actually occurs in either polynomial.
std::size_t pick_main_var(const LaurentPoly& a, const LaurentPoly& b) {
  for (std::size_t v = 0; v < a.vars()->size(); ++v)
    if (a.degree(v) > 0 || b.degree(v) > 0) return v;
  fail(errc::internal, "no variable present in gcd operands");
}

// gcd of the coefficients of f viewed as a univariate polynomial in `var`.
LaurentPoly content_wrt(const LaurentPoly& f, std::size_t var) {
  LaurentPoly g(f.vars());
  for (int d = f.low_degree(var); d <= f.degree(var); ++d) {
    LaurentPoly c = f.coeff_at(var, d);
    if (c.is_zero()) continue;
    g = g.is_zero() ? normalize_primitive(c) : poly_gcd(g, c);
    if (g.is_one()) break;
  }
  return g;
}

// One pseudo-reduction pass: eliminates the top var-degree of r against g.
// Only the primitive part of the remainder matters to the caller, so the
// rational content is stripped after every step to keep coefficients small.
LaurentPoly pseudo_remainder(LaurentPoly r, const LaurentPoly& g, std::size_t var) {
  int dg = g.degree(var);
  LaurentPoly lcg = g.coeff_at(var, dg);
  while (!r.is_zero() && r.degree(var) >= dg) {
    int dr = r.degree(var);
    LaurentPoly lcr = r.coeff_at(var, dr);
    Monomial shift = Monomial::unit(r.vars()->size());
    shift.exp[var] = dr - dg;
    r = r * lcg - (g * lcr).mul_monomial(shift);
    if (!r.is_zero()) r = r.scaled(Rational(1) / rat_content(r));
  }
  return r;
}

// Primitive remainder sequence. Cheap when one operand has low degree, but
// repeated powers in the other operand cause severe intermediate growth, so
// poly_gcd only ever feeds it squarefree second operands.
LaurentPoly prs_gcd(const LaurentPoly& a, const LaurentPoly& b) {
  std::size_t v = pick_main_var(a, b);
  LaurentPoly ca = content_wrt(a, v);
  LaurentPoly cb = content_wrt(b, v);
  LaurentPoly f = normalize_primitive(divide_exact(a, ca));
  LaurentPoly g = normalize_primitive(divide_exact(b, cb));
  LaurentPoly cg = poly_gcd(ca, cb);

  if (f.degree(v) < g.degree(v)) std::swap(f, g);
  while (!g.is_zero()) {
    LaurentPoly r = pseudo_remainder(f, g, v);
    f = std::move(g);
    if (r.is_zero()) {
      g = LaurentPoly(a.vars());
    } else {
      g = normalize_primitive(divide_exact(r, content_wrt(r, v)));
    }
  }
  LaurentPoly result = normalize_primitive(divide_exact(f, content_wrt(f, v)));
  return normalize_primitive(result * cg);
}

LaurentPoly derivative(const LaurentPoly& f, std::size_t v) {
  LaurentPoly d(f.vars());
  for (const auto& [m, c] : f.terms()) {
    if (m.exp[v] == 0) continue;
    Monomial n = m;
    n.exp[v] -= 1;
    d.add_term(n, c * m.exp[v]);
  }
  return d;
}

}  // namespace

LaurentPoly poly_gcd(const LaurentPoly& a, const LaurentPoly& b) {
  require_same_vars(a, b);
  if (!a.nonnegative() || !b.nonnegative())
    fail(errc::invalid, "poly_gcd requires ordinary polynomials (nonnegative exponents)");
  if (a.is_zero()) return b.is_zero() ? b : normalize_primitive(b);
  if (b.is_zero()) return normalize_primitive(a);
  if (a.is_constant() || b.is_constant()) return LaurentPoly::one(a.vars());
  if (a.is_single_term()) return monomial_gcd(a, b);
  if (b.is_single_term()) return monomial_gcd(b, a);
  if (a == b) return normalize_primitive(a);

  // Split off the monomial content first; everything after runs on smaller
  // operands.
  Monomial ma = Monomial::unit(a.vars()->size());
  Monomial mb = ma, mg = ma;
  bool stripped = false;
  for (std::size_t v = 0; v < ma.exp.size(); ++v) {
    ma.exp[v] = -a.low_degree(v);
    mb.exp[v] = -b.low_degree(v);
    mg.exp[v] = std::min(-ma.exp[v], -mb.exp[v]);
    stripped = stripped || ma.exp[v] != 0 || mb.exp[v] != 0;
  }
  if (stripped)
    return poly_gcd(a.mul_monomial(ma), b.mul_monomial(mb)).mul_monomial(mg);

  // Split off the parts free of the main variable; by Gauss's lemma the gcd
  // factors as gcd of contents times gcd of primitive parts.
  const std::size_t v = pick_main_var(a, b);
  LaurentPoly ca = content_wrt(a, v);
  LaurentPoly cb = content_wrt(b, v);
  LaurentPoly xa = normalize_primitive(divide_exact(a, ca));
  LaurentPoly xb = normalize_primitive(divide_exact(b, cb));
  LaurentPoly result = poly_gcd(ca, cb);
  if (xa.degree(v) < xb.degree(v)) std::swap(xa, xb);

  // Peel the primitive parts one squarefree layer at a time. Each round
  // takes the squarefree part u of xb (primitivity puts every prime of xb
  // in u exactly once), pulls the primes shared with xa out of u by a
  // remainder sequence, and divides them out of both sides. Round k then
  // collects precisely the common primes of multiplicity at least k, so
  // the rounds multiply to the gcd. Keeping the second operand of the
  // outer remainder sequence squarefree is what contains the intermediate
  // coefficient growth that a single remainder sequence suffers on
  // repeated factors.
  while (!xa.is_constant() && !xb.is_constant()) {
    // prs_gcd, not poly_gcd: recursing here would redo the whole layer
    // peeling inside every round, and xb against its own derivative keeps
    // the remainder sequence short anyway.
    LaurentPoly u = divide_exact(xb, prs_gcd(xb, derivative(xb, v)));
    LaurentPoly h = prs_gcd(xa, u);
    if (h.is_constant()) break;
    result = result * h;
    xa = divide_exact(xa, h);
    xb = divide_exact(xb, h);
  }
  return normalize_primitive(result);
}

}  // namespace lucid
