#include "model/identity.hpp"

#include <algorithm>
#include <set>

#include "model/parser.hpp"

namespace lucid {

namespace {

bool is_symbol(const RationalFunction& rf, std::size_t idx) {
  return rf == RationalFunction::variable(rf.vars(), idx);
}

// Rendering pulls a leading minus out of the numerator.
bool render_negative(const RationalFunction& rf) {
  return !rf.is_zero() && rf.num().leading().second < 0;
}

long long mod2(long long v) { return ((v % 2) + 2) % 2; }

std::string magnitude(long long v) {
  std::string s = std::to_string(v);
  if (!s.empty() && s[0] == '-') s.erase(0, 1);
  return s;
}

bool term_key_less(const Term& a, const Term& b) {
  if (a.factors != b.factors) return a.factors < b.factors;
  if (!(a.q_exp == b.q_exp)) return a.q_exp < b.q_exp;
  if (a.coeff.known != b.coeff.known) return a.coeff.known;
  return a.coeff.name < b.coeff.name;
}

bool term_key_equal(const Term& a, const Term& b) {
  return a.factors == b.factors && a.q_exp == b.q_exp && a.coeff.known == b.coeff.known &&
         a.coeff.name == b.coeff.name;
}

nlohmann::ordered_json index_to_json(const IndexExpr& e) {
  nlohmann::ordered_json coeffs = nlohmann::ordered_json::object();
  for (const auto& [v, c] : e.coeffs) coeffs[v] = c;
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["coeffs"] = std::move(coeffs);
  j["const"] = e.constant;
  return j;
}

IndexExpr index_from_json(const nlohmann::json& j) {
  IndexExpr e;
  if (j.contains("coeffs"))
    for (const auto& [v, c] : j.at("coeffs").items()) e.add_var(v, c.get<long long>());
  if (j.contains("const")) e.constant = j.at("const").get<long long>();
  return e;
}

}  // namespace

IndexExpr IndexExpr::of_var(const std::string& v, long long c) {
  IndexExpr e;
  e.add_var(v, c);
  return e;
}

void IndexExpr::add_var(const std::string& v, long long c) {
  if (c == 0) return;
  auto [it, inserted] = coeffs.emplace(v, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) coeffs.erase(it);
  }
}

IndexExpr IndexExpr::operator+(const IndexExpr& o) const {
  IndexExpr r = *this;
  r.constant += o.constant;
  for (const auto& [v, c] : o.coeffs) r.add_var(v, c);
  return r;
}

IndexExpr IndexExpr::operator-() const { return scaled(-1); }

IndexExpr IndexExpr::scaled(long long c) const {
  IndexExpr r;
  r.constant = constant * c;
  if (c != 0)
    for (const auto& [v, cc] : coeffs) r.coeffs.emplace(v, cc * c);
  return r;
}

long long IndexExpr::evaluate(const std::map<std::string, long long>& binding) const {
  long long r = constant;
  for (const auto& [v, c] : coeffs) {
    auto it = binding.find(v);
    if (it == binding.end()) fail(errc::invalid, "index variable '" + v + "' is unbound");
    r += c * it->second;
  }
  return r;
}

IndexExpr IndexExpr::substituted(const std::string& var, long long value) const {
  auto it = coeffs.find(var);
  if (it == coeffs.end()) return *this;
  IndexExpr r = *this;
  r.constant += it->second * value;
  r.coeffs.erase(var);
  return r;
}

std::string IndexExpr::render() const {
  if (is_zero()) return "0";
  std::string out;
  bool first = true;
  auto emit = [&](bool neg, const std::string& piece) {
    if (first) {
      out = neg ? "-" + piece : piece;
      first = false;
    } else {
      out += (neg ? " - " : " + ") + piece;
    }
  };
  for (const auto& [v, c] : coeffs) emit(c < 0, (c == 1 || c == -1) ? v : magnitude(c) + v);
  if (constant != 0) emit(constant < 0, magnitude(constant));
  return out;
}

IdentityTemplate::IdentityTemplate()
    : param_p_(RationalFunction::variable(pq_vars(), 0)),
      param_q_(RationalFunction::variable(pq_vars(), 1)) {}

IdentityTemplate IdentityTemplate::make(std::string name, std::vector<std::string> index_vars,
                                        std::vector<Term> terms, RationalFunction param_p,
                                        RationalFunction param_q,
                                        std::optional<HoradamParams> horadam, std::string source) {
  IdentityTemplate t;
  t.name_ = std::move(name);
  t.index_vars_ = std::move(index_vars);
  t.terms_ = std::move(terms);
  t.param_p_ = std::move(param_p);
  t.param_q_ = std::move(param_q);
  t.horadam_ = std::move(horadam);
  t.source_ = std::move(source);
  t.canonicalize();
  return t;
}

VarSetPtr IdentityTemplate::coeff_vars() const {
  return is_horadam() ? horadam_vars() : pq_vars();
}

bool IdentityTemplate::has_unknowns() const {
  for (const Term& t : terms_)
    if (!t.coeff.known) return true;
  return false;
}

std::vector<std::string> IdentityTemplate::unknown_names() const {
  std::set<std::string> names;
  for (const Term& t : terms_)
    if (!t.coeff.known) names.insert(t.coeff.name);
  return {names.begin(), names.end()};
}

RationalFunction IdentityTemplate::fold_factor(const SeqFactor& f) const {
  RationalFunction base;
  if (f.kind == SeqKind::W) {
    base = horadam_symbolic(f.index.constant, horadam_->a0, horadam_->a1, horadam_->p0,
                            horadam_->p1);
  } else {
    RationalFunction raw{lucas_symbolic(f.kind, f.index.constant)};
    base = (is_symbol(param_p_, 0) && is_symbol(param_q_, 1))
               ? std::move(raw)
               : raw.substitute({param_p_, param_q_});
  }
  return base.pow(f.exp);
}

void IdentityTemplate::canonicalize() {
  const VarSetPtr cv = coeff_vars();
  if (!same_vars(param_p_.vars(), pq_vars()) || !same_vars(param_q_.vars(), pq_vars()))
    fail(errc::invalid, "parameter bindings must live over (P, Q)");
  if (horadam_ &&
      (!same_vars(horadam_->p0.vars(), horadam_vars()) ||
       !same_vars(horadam_->p1.vars(), horadam_vars())))
    fail(errc::invalid, "recurrence parameters must live over (p0, p1)");

  {
    std::set<std::string> seen;
    for (const std::string& v : index_vars_) {
      if (v.empty()) fail(errc::invalid, "empty index variable name");
      if (!seen.insert(v).second) fail(errc::invalid, "duplicate index variable '" + v + "'");
    }
  }
  auto require_declared = [&](const std::string& v) {
    if (std::find(index_vars_.begin(), index_vars_.end(), v) == index_vars_.end())
      fail(errc::invalid, "undeclared index variable '" + v + "'");
  };

  const bool q_is_const = param_q_.is_constant();
  const Rational q_const = q_is_const ? param_q_.constant_value() : Rational(0);

  std::vector<Term> out;
  out.reserve(terms_.size());
  for (Term& term : terms_) {
    if (!same_vars(term.coeff.value.vars(), cv))
      fail(errc::invalid, "coefficient lives over the wrong variable set");
    if (!term.coeff.known && term.coeff.name.empty())
      fail(errc::invalid, "unknown coefficient without a name");

    RationalFunction c = term.coeff.value;
    IndexExpr q_exp = term.q_exp;
    std::vector<SeqFactor> kept;
    for (SeqFactor& f : term.factors) {
      if (f.exp < 1) fail(errc::invalid, "factor exponent must be positive");
      if ((f.kind == SeqKind::W) != is_horadam())
        fail(errc::invalid, is_horadam() ? "only W factors may appear alongside Horadam seeds"
                                         : "W factors need Horadam seeds");
      for (const auto& [v, cc] : f.index.coeffs) {
        (void)cc;
        require_declared(v);
      }
      if (f.index.is_constant())
        c *= fold_factor(f);
      else
        kept.push_back(f);
    }

    for (const auto& [v, cc] : q_exp.coeffs) {
      (void)cc;
      require_declared(v);
    }
    if (is_horadam() && !q_exp.is_zero())
      fail(errc::invalid, "Q powers are not available alongside Horadam seeds");
    if (q_is_const && q_const == 1) {
      q_exp = IndexExpr{};
    } else if (q_is_const && q_const == -1) {
      IndexExpr reduced;
      for (const auto& [v, cc] : q_exp.coeffs) reduced.add_var(v, mod2(cc));
      if (mod2(q_exp.constant) == 1) c = c.scaled(Rational(-1));
      q_exp = reduced;
    } else {
      if (q_is_const && q_const == 0 && !q_exp.coeffs.empty())
        fail(errc::invalid, "Q = 0 cannot carry a variable exponent");
      if (q_exp.constant != 0) {
        c *= param_q_.pow(q_exp.constant);
        q_exp.constant = 0;
      }
    }
    if (c.is_zero()) continue;

    std::sort(kept.begin(), kept.end());
    std::vector<SeqFactor> merged;
    for (SeqFactor& f : kept) {
      if (!merged.empty() && merged.back().kind == f.kind && merged.back().index == f.index)
        merged.back().exp += f.exp;
      else
        merged.push_back(std::move(f));
    }

    Term nt;
    nt.coeff = term.coeff.known ? Coeff::of_value(std::move(c))
                                : Coeff::of_unknown(term.coeff.name, std::move(c));
    nt.q_exp = std::move(q_exp);
    nt.factors = std::move(merged);
    out.push_back(std::move(nt));
  }

  std::sort(out.begin(), out.end(), term_key_less);
  std::vector<Term> merged_terms;
  for (Term& t : out) {
    if (!merged_terms.empty() && term_key_equal(merged_terms.back(), t)) {
      Term& prev = merged_terms.back();
      RationalFunction sum = prev.coeff.value + t.coeff.value;
      if (sum.is_zero())
        merged_terms.pop_back();
      else
        prev.coeff.value = std::move(sum);
    } else {
      merged_terms.push_back(std::move(t));
    }
  }
  terms_ = std::move(merged_terms);

  std::set<std::string> used;
  for (const Term& t : terms_) {
    for (const auto& [v, c] : t.q_exp.coeffs) {
      (void)c;
      used.insert(v);
    }
    for (const SeqFactor& f : t.factors)
      for (const auto& [v, c] : f.index.coeffs) {
        (void)c;
        used.insert(v);
      }
  }
  // Canonical order for index variables is alphabetical; every use was
  // checked against the declared list above.
  index_vars_.assign(used.begin(), used.end());

  for (const Term& t : terms_)
    if (!t.coeff.known) {
      const std::string& n = t.coeff.name;
      if (n == "P" || n == "Q" ||
          (is_horadam() && (n == "p0" || n == "p1" || n == "a0" || n == "a1")))
        fail(errc::invalid, "'" + n + "' is reserved and cannot name an unknown");
      if (std::find(index_vars_.begin(), index_vars_.end(), n) != index_vars_.end())
        fail(errc::invalid, "'" + n + "' is both an index variable and an unknown");
    }
}

IdentityTemplate IdentityTemplate::substitute(
    const std::map<std::string, long long>& index_bindings,
    const std::map<std::string, RationalFunction>& param_bindings,
    const std::map<std::string, RationalFunction>& unknown_bindings,
    std::string new_name) const {
  for (const auto& [v, val] : index_bindings) {
    (void)val;
    if (std::find(index_vars_.begin(), index_vars_.end(), v) == index_vars_.end())
      fail(errc::invalid, "no index variable named '" + v + "'");
  }
  {
    std::vector<std::string> known = unknown_names();
    for (const auto& [n, val] : unknown_bindings) {
      (void)val;
      if (std::find(known.begin(), known.end(), n) == known.end())
        fail(errc::invalid, "no unknown named '" + n + "'");
    }
  }

  const VarSetPtr cv = coeff_vars();
  const bool any_param = !param_bindings.empty();
  std::vector<RationalFunction> pvals;
  if (any_param) {
    for (std::size_t i = 0; i < cv->size(); ++i)
      pvals.push_back(RationalFunction::variable(cv, i));
    for (const auto& [k, v] : param_bindings) {
      std::size_t slot;
      if (!is_horadam() && k == "P")
        slot = 0;
      else if (!is_horadam() && k == "Q")
        slot = 1;
      else if (is_horadam() && k == "p0")
        slot = 0;
      else if (is_horadam() && k == "p1")
        slot = 1;
      else
        fail(errc::invalid, "no parameter named '" + k + "'");
      if (!same_vars(v.vars(), cv))
        fail(errc::invalid, "binding for '" + k + "' lives over the wrong variable set");
      pvals[slot] = v;
    }
  }

  std::vector<Term> nts;
  nts.reserve(terms_.size());
  bool variable_qexp = false;
  for (const Term& t : terms_) {
    Term n = t;
    for (const auto& [v, val] : index_bindings) {
      n.q_exp = n.q_exp.substituted(v, val);
      for (SeqFactor& f : n.factors) f.index = f.index.substituted(v, val);
    }
    if (!n.q_exp.is_constant()) variable_qexp = true;
    if (!n.coeff.known) {
      auto it = unknown_bindings.find(n.coeff.name);
      if (it != unknown_bindings.end()) {
        if (!same_vars(it->second.vars(), cv))
          fail(errc::invalid,
               "binding for '" + n.coeff.name + "' lives over the wrong variable set");
        n.coeff = Coeff::of_value(n.coeff.value * it->second);
      }
    }
    if (any_param) n.coeff.value = n.coeff.value.substitute(pvals);
    nts.push_back(std::move(n));
  }

  RationalFunction np = param_p_, nq = param_q_;
  std::optional<HoradamParams> nh = horadam_;
  if (any_param) {
    if (is_horadam()) {
      nh->p0 = horadam_->p0.substitute(pvals);
      nh->p1 = horadam_->p1.substitute(pvals);
    } else {
      np = param_p_.substitute(pvals);
      nq = param_q_.substitute(pvals);
    }
  }
  if (!is_horadam() && variable_qexp && !nq.is_constant() && !is_symbol(nq, 1))
    fail(errc::unsupported,
         "under a variable Q exponent, Q can only stay symbolic or become a constant");

  return make(std::move(new_name), index_vars_, std::move(nts), std::move(np), std::move(nq),
              std::move(nh), {});
}

Rational IdentityTemplate::evaluate(const std::map<std::string, long long>& indices,
                                    const Rational& x0, const Rational& x1) const {
  if (has_unknowns()) fail(errc::invalid, "cannot evaluate a template with unresolved unknowns");
  const std::vector<Rational> xs{x0, x1};
  Rational pe, qe, p0e, p1e;
  if (is_horadam()) {
    p0e = horadam_->p0.evaluate(xs);
    p1e = horadam_->p1.evaluate(xs);
  } else {
    pe = param_p_.evaluate(xs);
    qe = param_q_.evaluate(xs);
  }
  Rational sum(0);
  for (const Term& t : terms_) {
    Rational v = t.coeff.value.evaluate(xs);
    if (!t.q_exp.is_zero()) v *= rat_pow(qe, t.q_exp.evaluate(indices));
    for (const SeqFactor& f : t.factors) {
      long long idx = f.index.evaluate(indices);
      Rational s = f.kind == SeqKind::W
                       ? horadam_numeric(idx, horadam_->a0, horadam_->a1, p0e, p1e)
                       : lucas_numeric(f.kind, idx, pe, qe);
      v *= rat_pow(s, f.exp);
    }
    sum += v;
  }
  return sum;
}

std::string IdentityTemplate::render_text() const {
  return source_.empty() ? canonical_text() : source_;
}

std::string IdentityTemplate::canonical_text() const {
  std::string head;
  if (!(is_symbol(param_p_, 0) && is_symbol(param_q_, 1)))
    head = "@params P = " + param_p_.render() + ", Q = " + param_q_.render() + "\n";
  if (horadam_) {
    head = "@horadam a0 = " + to_string(horadam_->a0) + ", a1 = " + to_string(horadam_->a1);
    if (!(is_symbol(horadam_->p0, 0) && is_symbol(horadam_->p1, 1)))
      head += ", p0 = " + horadam_->p0.render() + ", p1 = " + horadam_->p1.render();
    head += "\n";
  }
  if (terms_.empty()) return head + "0";
  std::string out;
  bool first = true;
  for (const Term& t : terms_) {
    const bool neg = render_negative(t.coeff.value);
    const RationalFunction mag = neg ? -t.coeff.value : t.coeff.value;

    std::vector<std::string> pieces;
    const bool have_tail = !t.factors.empty() || !t.q_exp.is_zero() || !t.coeff.known;
    if (!mag.is_one() || !have_tail) {
      std::string cs = mag.render();
      if (cs.find(' ') != std::string::npos && cs.front() != '(') cs = "(" + cs + ")";
      pieces.push_back(std::move(cs));
    }
    if (!t.coeff.known) pieces.push_back(t.coeff.name);
    if (!t.q_exp.is_zero()) {
      const bool simple = t.q_exp.constant == 0 && t.q_exp.coeffs.size() == 1 &&
                          t.q_exp.coeffs.begin()->second == 1;
      std::string es = t.q_exp.render();
      pieces.push_back("Q^" + (simple ? es : "(" + es + ")"));
    }
    for (const SeqFactor& f : t.factors) {
      std::string fs = std::string(seq_kind_name(f.kind)) + "[" + f.index.render() + "]";
      if (f.exp != 1) fs += "^" + std::to_string(f.exp);
      pieces.push_back(std::move(fs));
    }

    std::string body = pieces[0];
    for (std::size_t i = 1; i < pieces.size(); ++i) body += "*" + pieces[i];
    if (first) {
      out = neg ? "-" + body : body;
      first = false;
    } else {
      out += (neg ? " - " : " + ") + body;
    }
  }
  return head + out;
}

nlohmann::ordered_json IdentityTemplate::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  if (!name_.empty()) j["name"] = name_;
  j["index_vars"] = index_vars_;
  if (!(is_symbol(param_p_, 0) && is_symbol(param_q_, 1))) {
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    p["P"] = param_p_.render();
    p["Q"] = param_q_.render();
    j["params"] = std::move(p);
  }
  if (horadam_) {
    nlohmann::ordered_json h = nlohmann::ordered_json::object();
    h["a0"] = to_string(horadam_->a0);
    h["a1"] = to_string(horadam_->a1);
    h["p0"] = horadam_->p0.render();
    h["p1"] = horadam_->p1.render();
    j["horadam"] = std::move(h);
  }
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const Term& t : terms_) {
    nlohmann::ordered_json tj = nlohmann::ordered_json::object();
    nlohmann::ordered_json cj = nlohmann::ordered_json::object();
    if (t.coeff.known) {
      cj["kind"] = "known";
      cj["value"] = t.coeff.value.render();
    } else {
      cj["kind"] = "unknown";
      cj["name"] = t.coeff.name;
      if (!t.coeff.value.is_one()) cj["scale"] = t.coeff.value.render();
    }
    tj["coeff"] = std::move(cj);
    if (!t.q_exp.is_zero()) tj["qexp"] = index_to_json(t.q_exp);
    nlohmann::ordered_json fj = nlohmann::ordered_json::array();
    for (const SeqFactor& f : t.factors) {
      nlohmann::ordered_json one = nlohmann::ordered_json::object();
      one["kind"] = seq_kind_name(f.kind);
      one["index"] = index_to_json(f.index);
      one["exp"] = f.exp;
      fj.push_back(std::move(one));
    }
    tj["factors"] = std::move(fj);
    terms.push_back(std::move(tj));
  }
  j["terms"] = std::move(terms);
  return j;
}

IdentityTemplate IdentityTemplate::from_json(const nlohmann::json& j) {
  try {
    std::string name = j.value("name", std::string{});
    std::vector<std::string> ivs = j.value("index_vars", std::vector<std::string>{});

    std::optional<HoradamParams> hp;
    if (j.contains("horadam")) {
      const auto& h = j.at("horadam");
      HoradamParams w;
      w.a0 = parse_rational(h.at("a0").get<std::string>());
      w.a1 = parse_rational(h.at("a1").get<std::string>());
      w.p0 = parse_ratfunc(h.at("p0").get<std::string>(), horadam_vars());
      w.p1 = parse_ratfunc(h.at("p1").get<std::string>(), horadam_vars());
      hp = std::move(w);
    }
    const VarSetPtr cv = hp ? horadam_vars() : pq_vars();

    RationalFunction pp = RationalFunction::variable(pq_vars(), 0);
    RationalFunction pq = RationalFunction::variable(pq_vars(), 1);
    if (j.contains("params")) {
      const auto& p = j.at("params");
      if (p.contains("P")) pp = parse_ratfunc(p.at("P").get<std::string>(), pq_vars());
      if (p.contains("Q")) pq = parse_ratfunc(p.at("Q").get<std::string>(), pq_vars());
    }

    std::vector<Term> ts;
    for (const auto& tj : j.at("terms")) {
      Term t;
      const auto& cj = tj.at("coeff");
      const std::string kind = cj.at("kind").get<std::string>();
      if (kind == "known") {
        t.coeff = Coeff::of_value(parse_ratfunc(cj.at("value").get<std::string>(), cv));
      } else if (kind == "unknown") {
        RationalFunction scale = cj.contains("scale")
                                     ? parse_ratfunc(cj.at("scale").get<std::string>(), cv)
                                     : RationalFunction::one(cv);
        t.coeff = Coeff::of_unknown(cj.at("name").get<std::string>(), std::move(scale));
      } else {
        fail(errc::parse, "coefficient kind must be 'known' or 'unknown'");
      }
      if (tj.contains("qexp")) t.q_exp = index_from_json(tj.at("qexp"));
      if (tj.contains("factors")) {
        for (const auto& fj : tj.at("factors")) {
          SeqFactor f;
          f.kind = seq_kind_from_name(fj.at("kind").get<std::string>());
          f.index = index_from_json(fj.at("index"));
          f.exp = fj.at("exp").get<int>();
          t.factors.push_back(std::move(f));
        }
      }
      ts.push_back(std::move(t));
    }
    return make(std::move(name), std::move(ivs), std::move(ts), std::move(pp), std::move(pq),
                std::move(hp), {});
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse, std::string("malformed template JSON: ") + e.what());
  }
}

bool IdentityTemplate::structurally_equal(const IdentityTemplate& o) const {
  if (index_vars_ != o.index_vars_) return false;
  if (param_p_ != o.param_p_ || param_q_ != o.param_q_) return false;
  if (horadam_.has_value() != o.horadam_.has_value()) return false;
  if (horadam_ && !(horadam_->a0 == o.horadam_->a0 && horadam_->a1 == o.horadam_->a1 &&
                    horadam_->p0 == o.horadam_->p0 && horadam_->p1 == o.horadam_->p1))
    return false;
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const Term& a = terms_[i];
    const Term& b = o.terms_[i];
    if (a.coeff.known != b.coeff.known || a.coeff.name != b.coeff.name ||
        a.coeff.value != b.coeff.value)
      return false;
    if (!(a.q_exp == b.q_exp) || a.factors != b.factors) return false;
  }
  return true;
}

}  // namespace lucid
