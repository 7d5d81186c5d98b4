#include "verify/binet.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"

namespace lucid {

namespace {

bool is_symbol(const RationalFunction& rf, std::size_t idx) {
  if (!rf.den().is_one() || !rf.num().is_single_term()) return false;
  const auto& [m, c] = rf.num().leading();
  if (c != 1) return false;
  for (std::size_t i = 0; i < m.exp.size(); ++i)
    if (m.exp[i] != (i == idx ? 1 : 0)) return false;
  return true;
}

bool lex_less(const Monomial& a, const Monomial& b) {
  return std::lexicographical_compare(a.exp.begin(), a.exp.end(), b.exp.begin(), b.exp.end());
}

std::string render_monomial(const VarSet& vs, const Monomial& m) {
  std::string out;
  for (std::size_t i = 0; i < m.exp.size(); ++i) {
    if (m.exp[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += vs.name(i);
    if (m.exp[i] != 1) out += "^" + std::to_string(m.exp[i]);
  }
  return out.empty() ? "1" : out;
}

int fdiv(int a, int b) {
  int q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
int fmod(int a, int b) { return a - fdiv(a, b) * b; }

}  // namespace

BinetPoly BinetPoly::constant(VarSetPtr vars, RationalFunction c) {
  BinetPoly r(std::move(vars));
  r.add_term(Monomial::unit(r.vars_->size()), std::move(c));
  return r;
}

BinetPoly BinetPoly::monomial(VarSetPtr vars, Monomial m, RationalFunction c) {
  BinetPoly r(std::move(vars));
  r.add_term(m, std::move(c));
  return r;
}

void BinetPoly::add_term(const Monomial& m, const RationalFunction& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

BinetPoly BinetPoly::operator+(const BinetPoly& o) const {
  if (!same_vars(vars_, o.vars_)) fail(errc::invalid, "mixed monomial variable sets");
  BinetPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

BinetPoly BinetPoly::operator-(const BinetPoly& o) const {
  if (!same_vars(vars_, o.vars_)) fail(errc::invalid, "mixed monomial variable sets");
  BinetPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

BinetPoly BinetPoly::operator*(const BinetPoly& o) const {
  if (!same_vars(vars_, o.vars_)) fail(errc::invalid, "mixed monomial variable sets");
  BinetPoly r(vars_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

BinetPoly BinetPoly::pow(unsigned e) const {
  BinetPoly r = BinetPoly::constant(vars_, RationalFunction::one(binet_vars()));
  for (unsigned i = 0; i < e; ++i) r = r * *this;
  return r;
}

BinetPoly BinetPoly::scaled(const RationalFunction& c) const {
  BinetPoly r(vars_);
  for (const auto& [m, v] : terms_) r.add_term(m, v * c);
  return r;
}

std::string BinetPoly::render() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + c.render() + ")";
    if (!m.is_unit()) out += "*" + render_monomial(*vars_, m);
  }
  return out;
}

VarSetPtr ts_vars(const std::vector<std::string>& index_vars) {
  std::vector<std::string> names;
  names.reserve(2 * index_vars.size());
  for (const std::string& v : index_vars) {
    names.push_back("T_" + v);
    names.push_back("S_" + v);
  }
  return VarSet::make(std::move(names));
}

namespace {

// Concrete values imposed on alpha + abar and alpha*abar by the template's
// parameter bindings; nullopt means the quantity stays generic.
struct ParamShape {
  std::optional<Rational> pc, qc;
};

ParamShape analyze_params(const IdentityTemplate& t) {
  ParamShape s;
  const RationalFunction& rp = t.is_horadam() ? t.horadam()->p0 : t.param_p();
  const RationalFunction& rq = t.is_horadam() ? t.horadam()->p1 : t.param_q();
  const char* msg =
      "symbolic verification needs parameter bindings that are constants or the "
      "parameter symbols themselves";
  if (!is_symbol(rp, 0)) {
    if (!rp.is_constant()) fail(errc::unsupported, msg);
    s.pc = rp.constant_value();
  }
  if (!is_symbol(rq, 1)) {
    if (!rq.is_constant()) fail(errc::unsupported, msg);
    Rational v = rq.constant_value();
    s.qc = t.is_horadam() ? Rational(-v) : v;
  }
  return s;
}

// A constant-bound parameter may not also appear as a symbol in coefficients;
// there is no Binet image for it then.
void guard_coefficients(const IdentityTemplate& t, const ParamShape& s) {
  auto uses = [](const RationalFunction& c, std::size_t v) {
    return c.num().degree(v) != 0 || c.num().low_degree(v) != 0 || c.den().degree(v) != 0 ||
           c.den().low_degree(v) != 0;
  };
  for (const Term& term : t.terms()) {
    if ((s.pc && uses(term.coeff.value, 0)) || (s.qc && uses(term.coeff.value, 1)))
      fail(errc::unsupported, "a coefficient mentions a parameter that is bound to a constant");
  }
}

// One U/V/W factor as a two-monomial polynomial over the T/S variables.
BinetPoly expand_factor(const SeqFactor& f, const VarSetPtr& tsv,
                        const std::vector<std::string>& ivs,
                        const std::optional<HoradamParams>& hp) {
  const VarSetPtr& bv = binet_vars();
  const RationalFunction alpha = RationalFunction::variable(bv, 0);
  const RationalFunction abar = RationalFunction::variable(bv, 1);
  const RationalFunction diff = alpha - abar;

  Monomial mt = Monomial::unit(tsv->size());
  Monomial ms = mt;
  for (const auto& [v, a] : f.index.coeffs) {
    auto slot = std::find(ivs.begin(), ivs.end(), v);
    if (slot == ivs.end()) fail(errc::internal, "index variable lookup failed");
    std::size_t i = static_cast<std::size_t>(slot - ivs.begin());
    mt.exp[2 * i] = static_cast<std::int32_t>(a);
    ms.exp[2 * i + 1] = static_cast<std::int32_t>(a);
  }
  const long long d = f.index.constant;

  BinetPoly r(tsv);
  switch (f.kind) {
    case SeqKind::U:
      r.add_term(mt, alpha.pow(d) / diff);
      r.add_term(ms, -(abar.pow(d)) / diff);
      break;
    case SeqKind::V:
      r.add_term(mt, alpha.pow(d));
      r.add_term(ms, abar.pow(d));
      break;
    case SeqKind::W: {
      // W_e = A*alpha^e + B*abar^e with A + B = a0, A*alpha + B*abar = a1.
      const RationalFunction a0 = RationalFunction::constant(bv, hp->a0);
      const RationalFunction a1 = RationalFunction::constant(bv, hp->a1);
      r.add_term(mt, (a1 - a0 * abar) / diff * alpha.pow(d));
      r.add_term(ms, (a0 * alpha - a1) / diff * abar.pow(d));
      break;
    }
  }
  return r;
}

// alpha^e == x + y*alpha modulo alpha^2 - p*alpha + q, with Laurent powers
// through alpha^{-1} = (p - alpha)/q.
class QuadPowers {
 public:
  QuadPowers(Rational p, Rational q) : p_(std::move(p)), q_(std::move(q)) {
    cache_[0] = {Rational(1), Rational(0)};
  }

  const std::pair<Rational, Rational>& get(long long e) {
    auto it = cache_.find(e);
    if (it != cache_.end()) return it->second;
    std::pair<Rational, Rational> r;
    if (e > 0) {
      const auto& [x, y] = get(e - 1);
      r = {-q_ * y, x + p_ * y};
    } else {
      const auto& [x, y] = get(e + 1);
      r = {x * p_ / q_ + y, -x / q_};
    }
    return cache_.emplace(e, std::move(r)).first->second;
  }

 private:
  Rational p_, q_;
  std::map<long long, std::pair<Rational, Rational>> cache_;
};

std::pair<Rational, Rational> linear_form(const LaurentPoly& p, QuadPowers& pw) {
  Rational a(0), b(0);
  for (const auto& [m, c] : p.terms()) {
    if (m.exp[1] != 0) fail(errc::internal, "abar power survived reduction");
    const auto& [x, y] = pw.get(m.exp[0]);
    a += c * x;
    b += c * y;
  }
  return {a, b};
}

// Reduces a coefficient (already free of abar) into the ring
// Q[alpha]/(alpha^2 - p*alpha + q). Denominators here are products of powers
// of alpha and 2*alpha - p, units whenever q != 0 and the discriminant is
// nonzero, so the coefficient vanishes iff its numerator reduces to zero.
RationalFunction quad_reduced(const RationalFunction& c, QuadPowers& pw) {
  const VarSetPtr& bv = binet_vars();
  auto [an, bn] = linear_form(c.num(), pw);
  if (an == 0 && bn == 0) return RationalFunction::zero(bv);
  auto [ad, bd] = linear_form(c.den(), pw);
  Monomial al = Monomial::unit(2);
  al.exp[0] = 1;
  LaurentPoly n(bv), d(bv);
  n.add_term(Monomial::unit(2), an);
  n.add_term(al, bn);
  d.add_term(Monomial::unit(2), ad);
  d.add_term(al, bd);
  if (d.is_zero()) fail(errc::internal, "denominator vanished in quadratic reduction");
  return RationalFunction(std::move(n), std::move(d));
}

template <typename F>
BinetPoly fold_pairs(const BinetPoly& e, F&& pairfold) {
  BinetPoly out(e.vars());
  for (const auto& [m, c] : e.terms()) {
    Monomial n = m;
    for (std::size_t i = 0; i + 1 < n.exp.size(); i += 2) pairfold(n.exp[i], n.exp[i + 1]);
    out.add_term(n, c);
  }
  return out;
}

BinetPoly map_coeffs(const BinetPoly& e,
                     const std::function<RationalFunction(const RationalFunction&)>& f) {
  BinetPoly out(e.vars());
  for (const auto& [m, c] : e.terms()) out.add_term(m, f(c));
  return out;
}

bool rational_roots(const Rational& p, const Rational& q, Rational& r0, Rational& r1) {
  const Rational disc = p * p - Rational(4) * q;
  if (disc <= 0) return false;
  const Integer n = rat_num(disc), d = rat_den(disc);
  const Integer sn = boost::multiprecision::sqrt(n);
  const Integer sd = boost::multiprecision::sqrt(d);
  if (sn * sn != n || sd * sd != d) return false;
  const Rational s(sn, sd);
  r0 = (p + s) / 2;
  r1 = (p - s) / 2;
  return true;
}

// With rational roots every monomial is the exponential function of its
// per-variable base values; distinct base tuples are linearly independent, so
// grouping by them is an exact zero test.
BinetPoly value_grouped(const BinetPoly& e, const Rational& r0, const Rational& r1) {
  std::map<std::vector<Rational>, std::pair<Monomial, Rational>> groups;
  for (const auto& [m, c] : e.terms()) {
    std::vector<Rational> key;
    key.reserve(m.exp.size() / 2);
    for (std::size_t i = 0; i + 1 < m.exp.size(); i += 2)
      key.push_back(rat_pow(r0, m.exp[i]) * rat_pow(r1, m.exp[i + 1]));
    Rational v;
    try {
      v = c.evaluate({r0, r1});
    } catch (const Error&) {
      fail(errc::internal, "coefficient singular at the parameter roots");
    }
    auto [it, fresh] = groups.emplace(std::move(key), std::make_pair(m, v));
    if (!fresh) {
      it->second.second += v;
      if (lex_less(m, it->second.first)) it->second.first = m;
    }
  }
  BinetPoly out(e.vars());
  for (auto& [k, mv] : groups) {
    (void)k;
    if (mv.second != 0)
      out.add_term(mv.first, RationalFunction::constant(binet_vars(), mv.second));
  }
  return out;
}

// Reduces the raw expansion modulo everything a constant parameter binding
// implies: monomial collisions first (exponent vectors that denote the same
// function of the indices), then the coefficient relations on alpha and abar.
BinetPoly reduce_expansion(BinetPoly e, const ParamShape& ps) {
  const VarSetPtr& bv = binet_vars();
  const RationalFunction alpha = RationalFunction::variable(bv, 0);

  if (ps.qc && *ps.qc == 1) {
    e = fold_pairs(e, [](std::int32_t& a, std::int32_t& b) {
      a -= b;
      b = 0;
    });
  } else if (ps.qc && *ps.qc == -1) {
    e = fold_pairs(e, [](std::int32_t& a, std::int32_t& b) {
      const int t = 2 * fdiv(std::min(a, b), 2);
      a -= t;
      b -= t;
    });
  }

  if (ps.pc && ps.qc) {
    Rational r0, r1;
    if (rational_roots(*ps.pc, *ps.qc, r0, r1)) return value_grouped(e, r0, r1);

    if (*ps.qc == 1 && (*ps.pc == 0 || *ps.pc == 1 || *ps.pc == -1)) {
      // alpha is a root of unity; after the pair fold only T exponents remain.
      const int order = *ps.pc == 0 ? 4 : (*ps.pc == 1 ? 6 : 3);
      e = fold_pairs(e, [order](std::int32_t& a, std::int32_t&) { a = fmod(a, order); });
    } else if (*ps.qc != 1 && *ps.qc != -1) {
      // alpha/abar can be a root of unity; its order is read off
      // (P^2 - 2Q)/Q = ratio + 1/ratio.
      const Rational v = (*ps.pc * *ps.pc - 2 * *ps.qc) / *ps.qc;
      int order = 0;
      if (v == -2)
        order = 2;
      else if (v == -1)
        order = 3;
      else if (v == 0)
        order = 4;
      else if (v == 1)
        order = 6;
      if (order != 0)
        e = fold_pairs(e, [order](std::int32_t& a, std::int32_t& b) {
          const int d = a - b;
          const int r = fmod(d, 2 * order);
          const int s = (d - r) / (2 * order);
          a -= order * s;
          b += order * s;
        });
    }

    const RationalFunction abar_image = RationalFunction::constant(bv, *ps.pc) - alpha;
    QuadPowers pw(*ps.pc, *ps.qc);
    return map_coeffs(e, [&](const RationalFunction& c) {
      return quad_reduced(c.substitute({alpha, abar_image}), pw);
    });
  }
  if (ps.pc) {
    if (*ps.pc == 0) {
      // abar = -alpha makes (alpha/abar)^2 = 1, so exponent pairs collide
      // along (2, -2) steps even with Q symbolic.
      e = fold_pairs(e, [](std::int32_t& a, std::int32_t& b) {
        const int d = a - b;
        const int r = fmod(d, 4);
        const int s = (d - r) / 4;
        a -= 2 * s;
        b += 2 * s;
      });
    }
    const RationalFunction abar_image = RationalFunction::constant(bv, *ps.pc) - alpha;
    return map_coeffs(e, [&](const RationalFunction& c) {
      return c.substitute({alpha, abar_image});
    });
  }
  if (ps.qc) {
    const RationalFunction abar_image =
        RationalFunction::constant(bv, *ps.qc) * alpha.inverse();
    return map_coeffs(e, [&](const RationalFunction& c) {
      return c.substitute({alpha, abar_image});
    });
  }
  return e;
}

}  // namespace

BinetPoly binet_expand(const IdentityTemplate& t) {
  if (t.has_unknowns())
    fail(errc::invalid, "cannot expand a template with unknown coefficients");
  const VarSetPtr tsv = ts_vars(t.index_vars());
  const VarSetPtr& bv = binet_vars();
  const RationalFunction alpha = RationalFunction::variable(bv, 0);
  const RationalFunction abar = RationalFunction::variable(bv, 1);

  std::vector<RationalFunction> image;
  if (t.is_horadam())
    image = {alpha + abar, -(alpha * abar)};  // p0, p1
  else
    image = {alpha + abar, alpha * abar};  // P, Q

  const std::vector<std::string>& ivs = t.index_vars();
  BinetPoly sum(tsv);
  for (const Term& term : t.terms()) {
    Monomial qm = Monomial::unit(tsv->size());
    for (const auto& [v, a] : term.q_exp.coeffs) {
      auto slot = std::find(ivs.begin(), ivs.end(), v);
      if (slot == ivs.end()) fail(errc::internal, "index variable lookup failed");
      const std::size_t i = static_cast<std::size_t>(slot - ivs.begin());
      qm.exp[2 * i] += static_cast<std::int32_t>(a);
      qm.exp[2 * i + 1] += static_cast<std::int32_t>(a);
    }

    BinetPoly acc = BinetPoly::monomial(tsv, qm, term.coeff.value.substitute(image));
    for (const SeqFactor& f : term.factors)
      acc = acc * expand_factor(f, tsv, ivs, t.horadam()).pow(static_cast<unsigned>(f.exp));
    sum = sum + acc;
  }
  return sum;
}

Verdict verify(const IdentityTemplate& t) {
  const ParamShape ps = analyze_params(t);
  guard_coefficients(t, ps);
  if (ps.qc && *ps.qc == 0) fail(errc::unsupported, "Q = 0 has no Binet form");
  if (ps.pc && ps.qc && *ps.pc * *ps.pc - Rational(4) * *ps.qc == 0)
    fail(errc::unsupported, "a zero discriminant has no Binet form");

  const BinetPoly reduced = reduce_expansion(binet_expand(t), ps);
  if (reduced.is_zero()) return Verdict{};

  auto best = reduced.terms().begin();
  for (auto it = std::next(best); it != reduced.terms().end(); ++it)
    if (lex_less(it->first, best->first)) best = it;

  Verdict v;
  v.status = VerdictStatus::refuted;
  v.witness = Witness{render_monomial(*reduced.vars(), best->first), best->second.render()};
  v.counterexample = numeric_check(t, 200, 0);
  return v;
}

std::optional<Counterexample> numeric_check(const IdentityTemplate& t, int trials,
                                            unsigned seed) {
  if (t.has_unknowns())
    fail(errc::invalid, "cannot check a template with unknown coefficients");
  std::mt19937 gen(seed);
  auto ri = [&](int lo, int hi) {
    return lo + static_cast<int>(gen() % static_cast<unsigned>(hi - lo + 1));
  };
  const RationalFunction& rp = t.is_horadam() ? t.horadam()->p0 : t.param_p();
  const RationalFunction& rq = t.is_horadam() ? t.horadam()->p1 : t.param_q();

  for (int i = 0; i < trials; ++i) {
    const Rational x0(ri(-9, 9), ri(1, 9));
    const Rational x1(ri(-9, 9), ri(1, 9));
    std::map<std::string, long long> ix;
    for (const std::string& v : t.index_vars()) ix[v] = ri(-6, 6);
    try {
      // Report the effective parameter values, which reproduce the evaluation
      // even when a binding pins them.
      const Rational pe = rp.evaluate({x0, x1});
      const Rational qraw = rq.evaluate({x0, x1});
      const Rational qe = t.is_horadam() ? -qraw : qraw;
      if (qe == 0 || pe * pe - Rational(4) * qe == 0) continue;
      Rational val = t.evaluate(ix, x0, x1);
      if (val != 0) return Counterexample{pe, qraw, std::move(ix), std::move(val)};
    } catch (const Error& e) {
      if (e.code() == errc::singular) continue;
      throw;
    }
  }
  return std::nullopt;
}

nlohmann::ordered_json Verdict::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["status"] = verified() ? "verified" : "refuted";
  if (witness) {
    nlohmann::ordered_json w = nlohmann::ordered_json::object();
    w["monomial"] = witness->monomial;
    w["coefficient"] = witness->coefficient;
    j["witness"] = std::move(w);
  }
  if (counterexample) {
    nlohmann::ordered_json c = nlohmann::ordered_json::object();
    c["P"] = to_string(counterexample->param_p);
    c["Q"] = to_string(counterexample->param_q);
    nlohmann::ordered_json ix = nlohmann::ordered_json::object();
    for (const auto& [v, k] : counterexample->indices) ix[v] = k;
    c["indices"] = std::move(ix);
    c["value"] = to_string(counterexample->value);
    j["counterexample"] = std::move(c);
  }
  return j;
}

}  // namespace lucid
