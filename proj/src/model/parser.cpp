#include "model/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <string>
#include <vector>

namespace lucid {

namespace {

enum class Tok {
  intlit,
  name,
  plus,
  minus,
  star,
  slash,
  caret,
  lparen,
  rparen,
  lbracket,
  rbracket,
  eq,
  comma,
  at,
  end
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto single = [&](Tok k, char c) {
    out.push_back({k, std::string(1, c), line, col});
    ++i;
    ++col;
  };
  while (i < text.size()) {
    char ch = text[i];
    if (ch == '\n') {
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      ++i;
      ++col;
      continue;
    }
    if (ch == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      int tc = col;
      std::size_t s = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        ++i;
        ++col;
      }
      out.push_back({Tok::intlit, text.substr(s, i - s), line, tc});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      int tc = col;
      std::size_t s = i;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        ++i;
        ++col;
      }
      out.push_back({Tok::name, text.substr(s, i - s), line, tc});
      continue;
    }
    switch (ch) {
      case '+': single(Tok::plus, ch); break;
      case '-': single(Tok::minus, ch); break;
      case '*': single(Tok::star, ch); break;
      case '/': single(Tok::slash, ch); break;
      case '^': single(Tok::caret, ch); break;
      case '(': single(Tok::lparen, ch); break;
      case ')': single(Tok::rparen, ch); break;
      case '[': single(Tok::lbracket, ch); break;
      case ']': single(Tok::rbracket, ch); break;
      case '=': single(Tok::eq, ch); break;
      case ',': single(Tok::comma, ch); break;
      case '@': single(Tok::at, ch); break;
      default:
        fail(errc::parse, std::string("unexpected character '") + ch + "' (line " +
                              std::to_string(line) + ", column " + std::to_string(col) + ")");
    }
  }
  out.push_back({Tok::end, "", line, col});
  return out;
}

bool is_reserved_index_name(const std::string& n) {
  return n == "P" || n == "Q" || n == "U" || n == "V" || n == "W" || n == "p0" || n == "p1" ||
         n == "a0" || n == "a1";
}

class Parser {
 public:
  explicit Parser(std::string text) : text_(std::move(text)), toks_(tokenize(text_)) {}

  IdentityTemplate parse_template(std::string name) {
    RationalFunction bp = RationalFunction::variable(pq_vars(), 0);
    RationalFunction bq = RationalFunction::variable(pq_vars(), 1);
    bool have_params = false;
    while (accept(Tok::at)) {
      const Token d = expect(Tok::name, "a directive name");
      line_limit_ = d.line;
      if (d.text == "params") {
        if (horadam_) err(d, "@params cannot be combined with @horadam");
        if (have_params) err(d, "duplicate @params");
        have_params = true;
        do {
          const Token key = expect(Tok::name, "a parameter name");
          expect(Tok::eq, "'='");
          RationalFunction v = parse_coeff_expr(pq_vars());
          if (key.text == "P")
            bp = std::move(v);
          else if (key.text == "Q")
            bq = std::move(v);
          else
            err(key, "only P and Q can be bound by @params");
        } while (accept(Tok::comma));
      } else if (d.text == "horadam") {
        if (have_params) err(d, "@horadam cannot be combined with @params");
        if (horadam_) err(d, "duplicate @horadam");
        HoradamParams w;
        w.p0 = RationalFunction::variable(horadam_vars(), 0);
        w.p1 = RationalFunction::variable(horadam_vars(), 1);
        bool a0set = false, a1set = false;
        do {
          const Token key = expect(Tok::name, "a parameter name");
          expect(Tok::eq, "'='");
          RationalFunction v = parse_coeff_expr(horadam_vars());
          if (key.text == "a0" || key.text == "a1") {
            if (!v.is_constant()) err(key, "seed '" + key.text + "' must be a rational constant");
            (key.text == "a0" ? w.a0 : w.a1) = v.constant_value();
            (key.text == "a0" ? a0set : a1set) = true;
          } else if (key.text == "p0") {
            w.p0 = std::move(v);
          } else if (key.text == "p1") {
            w.p1 = std::move(v);
          } else {
            err(key, "only a0, a1, p0, p1 can be bound by @horadam");
          }
        } while (accept(Tok::comma));
        if (!a0set || !a1set) err(d, "@horadam needs both seeds a0 and a1");
        horadam_ = std::move(w);
      } else {
        err(d, "unknown directive '@" + d.text + "'");
      }
      line_limit_ = 0;
    }

    coeff_mode_ = false;
    cv_ = horadam_ ? horadam_vars() : pq_vars();
    PExpr sum = parse_expr();
    if (accept(Tok::eq)) {
      PExpr rhs = parse_expr();
      sum = pe_add(std::move(sum), pe_neg(std::move(rhs)));
    }
    expect(Tok::end, "the end of the identity");

    std::vector<Term> terms;
    terms.reserve(sum.size());
    for (PTerm& t : sum) {
      // Under a binding directive the body's parameter symbols stand for
      // the bound values.
      if (have_params) t.coeff = t.coeff.substitute({bp, bq});
      if (horadam_) t.coeff = t.coeff.substitute({horadam_->p0, horadam_->p1});
      Term o;
      o.coeff = t.unknown.empty() ? Coeff::of_value(std::move(t.coeff))
                                  : Coeff::of_unknown(t.unknown, std::move(t.coeff));
      o.q_exp = std::move(t.q_exp);
      o.factors = std::move(t.factors);
      terms.push_back(std::move(o));
    }
    return IdentityTemplate::make(std::move(name), index_vars_, std::move(terms), std::move(bp),
                                  std::move(bq), std::move(horadam_), text_);
  }

  RationalFunction parse_coefficient(const VarSetPtr& vars) {
    RationalFunction r = parse_coeff_expr(vars);
    expect(Tok::end, "the end of the expression");
    return r;
  }

 private:
  // Sum of linear-in-unknowns products; the working form between grammar and
  // canonical template.
  struct PTerm {
    RationalFunction coeff;
    std::string unknown;  // empty when fully known
    IndexExpr q_exp;
    std::vector<SeqFactor> factors;
  };
  using PExpr = std::vector<PTerm>;

  [[noreturn]] void err(const Token& t, const std::string& msg) const {
    fail(errc::parse,
         msg + " (line " + std::to_string(t.line) + ", column " + std::to_string(t.col) + ")");
  }

  // Directive bindings stop at their own line; past it the stream reads as end.
  const Token& cur() const {
    const Token& t = toks_[pos_];
    if (line_limit_ == 0 || t.kind == Tok::end || t.line <= line_limit_) return t;
    eol_ = Token{Tok::end, "", t.line, t.col};
    return eol_;
  }
  const Token& peek() const { return cur(); }
  const Token& get() {
    const Token& t = cur();
    if (t.kind != Tok::end) ++pos_;
    return t;
  }
  bool accept(Tok k) {
    if (cur().kind != k) return false;
    if (k != Tok::end) ++pos_;
    return true;
  }
  Token expect(Tok k, const char* what) {
    if (cur().kind != k) err(cur(), std::string("expected ") + what);
    return get();
  }

  long long int_value(const Token& t) const {
    try {
      return std::stoll(t.text);
    } catch (...) {
      err(t, "integer literal out of range");
    }
  }

  void reg_index(const Token& t) {
    const std::string& n = t.text;
    if (coeff_mode_) err(t, "index variables are not allowed here");
    if (is_reserved_index_name(n)) err(t, "'" + n + "' cannot be used as an index variable");
    if (unknowns_.count(n))
      err(t, "'" + n + "' is used both as a coefficient and as an index variable");
    if (std::find(index_vars_.begin(), index_vars_.end(), n) == index_vars_.end())
      index_vars_.push_back(n);
  }

  static void normalize_factors(PTerm& t) {
    std::sort(t.factors.begin(), t.factors.end());
    std::vector<SeqFactor> merged;
    for (SeqFactor& f : t.factors) {
      if (!merged.empty() && merged.back().kind == f.kind && merged.back().index == f.index)
        merged.back().exp += f.exp;
      else
        merged.push_back(std::move(f));
    }
    t.factors = std::move(merged);
  }

  static PExpr pe_neg(PExpr e) {
    for (PTerm& t : e) t.coeff = -t.coeff;
    return e;
  }

  static PExpr pe_add(PExpr a, PExpr b) {
    for (PTerm& t : b) {
      bool merged = false;
      for (std::size_t i = 0; i < a.size(); ++i) {
        PTerm& x = a[i];
        if (x.unknown == t.unknown && x.q_exp == t.q_exp && x.factors == t.factors) {
          x.coeff += t.coeff;
          if (x.coeff.is_zero()) a.erase(a.begin() + i);
          merged = true;
          break;
        }
      }
      if (!merged) a.push_back(std::move(t));
    }
    return a;
  }

  PExpr pe_mul(const PExpr& a, const PExpr& b, const Token& op) const {
    PExpr r;
    for (const PTerm& x : a)
      for (const PTerm& y : b) {
        if (!x.unknown.empty() && !y.unknown.empty())
          err(op, "products of unknown coefficients are not linear");
        PTerm t;
        t.coeff = x.coeff * y.coeff;
        if (t.coeff.is_zero()) continue;
        t.unknown = x.unknown.empty() ? y.unknown : x.unknown;
        t.q_exp = x.q_exp + y.q_exp;
        t.factors = x.factors;
        t.factors.insert(t.factors.end(), y.factors.begin(), y.factors.end());
        normalize_factors(t);
        r = pe_add(std::move(r), PExpr{std::move(t)});
      }
    return r;
  }

  PExpr pe_div(PExpr a, const PExpr& b, const Token& op) const {
    if (b.size() != 1 || !b[0].unknown.empty() || !b[0].factors.empty())
      err(op, "the divisor must be a nonzero coefficient expression");
    if (b[0].coeff.is_zero()) err(op, "division by zero");
    PTerm inv;
    inv.coeff = b[0].coeff.inverse();
    inv.q_exp = -b[0].q_exp;
    return pe_mul(a, PExpr{std::move(inv)}, op);
  }

  PExpr pe_pow(PExpr base, long long e, const Token& op) const {
    if (e == 1) return base;
    if (e == 0) {
      PTerm unit;
      unit.coeff = RationalFunction::one(cv_);
      return PExpr{std::move(unit)};
    }
    if (base.size() == 1 && base[0].unknown.empty()) {
      PTerm t = std::move(base[0]);
      if (e < 0) {
        if (!t.factors.empty()) err(op, "sequence terms cannot carry negative exponents");
        if (t.coeff.is_zero()) err(op, "division by zero");
      }
      PTerm r;
      r.coeff = t.coeff.pow(e);
      r.q_exp = t.q_exp.scaled(e);
      r.factors = std::move(t.factors);
      for (SeqFactor& f : r.factors) {
        long long ne = static_cast<long long>(f.exp) * e;
        if (ne > 1000000) err(op, "exponent out of range");
        f.exp = static_cast<int>(ne);
      }
      return PExpr{std::move(r)};
    }
    if (e < 0) err(op, "sums cannot carry negative exponents");
    if (e > 16) err(op, "exponent too large for a sum");
    PTerm unit;
    unit.coeff = RationalFunction::one(cv_);
    PExpr r{std::move(unit)};
    for (long long i = 0; i < e; ++i) r = pe_mul(r, base, op);
    return r;
  }

  // indexexpr := ['-'] iterm (('+' | '-') iterm)*, iterm := int ['*'] name |
  // int | name. The caller consumes the closing bracket.
  IndexExpr parse_index_sum() {
    IndexExpr acc;
    bool neg = accept(Tok::minus);
    for (;;) {
      const Token t = get();
      if (t.kind == Tok::intlit) {
        long long v = int_value(t);
        if (neg) v = -v;
        if (peek().kind == Tok::name) {
          const Token n = get();
          reg_index(n);
          acc.add_var(n.text, v);
        } else if (peek().kind == Tok::star && toks_[pos_ + 1].kind == Tok::name) {
          get();
          const Token n = get();
          reg_index(n);
          acc.add_var(n.text, v);
        } else {
          acc.constant += v;
        }
      } else if (t.kind == Tok::name) {
        reg_index(t);
        acc.add_var(t.text, neg ? -1 : 1);
      } else {
        err(t, "expected an index term");
      }
      if (accept(Tok::plus))
        neg = false;
      else if (accept(Tok::minus))
        neg = true;
      else
        break;
    }
    return acc;
  }

  // Exponent after '^': a signed integer, an index variable, or a
  // parenthesized index expression.
  IndexExpr parse_exponent() {
    if (accept(Tok::lparen)) {
      IndexExpr e = parse_index_sum();
      expect(Tok::rparen, "')'");
      return e;
    }
    bool neg = accept(Tok::minus);
    const Token t = get();
    if (t.kind == Tok::intlit) {
      long long v = int_value(t);
      return IndexExpr::of_constant(neg ? -v : v);
    }
    if (t.kind == Tok::name && !neg) {
      reg_index(t);
      return IndexExpr::of_var(t.text);
    }
    err(t, "expected an exponent");
  }

  PExpr parse_primary(bool& q_atom) {
    q_atom = false;
    const Token t = get();
    if (t.kind == Tok::intlit) {
      PTerm r;
      r.coeff = RationalFunction::constant(cv_, Rational(Integer(t.text)));
      return PExpr{std::move(r)};
    }
    if (t.kind == Tok::lparen) {
      PExpr e = parse_expr();
      expect(Tok::rparen, "')'");
      return e;
    }
    if (t.kind != Tok::name) err(t, "expected a number, a name, a sequence term, or '('");

    const std::string& n = t.text;
    if (n == "U" || n == "V" || n == "W") {
      if (coeff_mode_) err(t, "sequence terms are not allowed here");
      expect(Tok::lbracket, "'['");
      IndexExpr ix = parse_index_sum();
      expect(Tok::rbracket, "']'");
      SeqKind kind = n == "U" ? SeqKind::U : n == "V" ? SeqKind::V : SeqKind::W;
      if ((kind == SeqKind::W) != horadam_.has_value())
        err(t, horadam_ ? "only W terms are available after @horadam"
                        : "W terms need an @horadam preamble");
      PTerm r;
      r.coeff = RationalFunction::one(cv_);
      r.factors = {SeqFactor{kind, std::move(ix), 1}};
      return PExpr{std::move(r)};
    }
    if (coeff_mode_) {
      auto idx = cv_->index(n);
      if (!idx) err(t, "unknown variable '" + n + "'");
      PTerm r;
      r.coeff = RationalFunction::variable(cv_, *idx);
      return PExpr{std::move(r)};
    }
    if (!horadam_) {
      if (n == "P" || n == "Q") {
        q_atom = n == "Q";
        PTerm r;
        r.coeff = RationalFunction::variable(cv_, n == "P" ? 0 : 1);
        return PExpr{std::move(r)};
      }
    } else {
      if (n == "p0" || n == "p1") {
        PTerm r;
        r.coeff = RationalFunction::variable(cv_, n == "p0" ? 0 : 1);
        return PExpr{std::move(r)};
      }
      if (n == "a0" || n == "a1") {
        PTerm r;
        r.coeff = RationalFunction::constant(cv_, n == "a0" ? horadam_->a0 : horadam_->a1);
        return PExpr{std::move(r)};
      }
      if (n == "P" || n == "Q") err(t, "'" + n + "' is not available after @horadam");
    }
    if (std::find(index_vars_.begin(), index_vars_.end(), n) != index_vars_.end())
      err(t, "index variable '" + n + "' used outside an index position");
    unknowns_.insert(n);
    PTerm r;
    r.coeff = RationalFunction::one(cv_);
    r.unknown = n;
    return PExpr{std::move(r)};
  }

  PExpr parse_factor() {
    bool q_atom = false;
    PExpr base = parse_primary(q_atom);
    while (peek().kind == Tok::caret) {
      const Token op = get();
      IndexExpr e = parse_exponent();
      if (e.is_constant()) {
        base = pe_pow(std::move(base), e.constant, op);
      } else {
        if (!q_atom) err(op, "only Q can take a variable exponent");
        PTerm t;
        t.coeff = RationalFunction::one(cv_);
        t.q_exp = std::move(e);
        base = PExpr{std::move(t)};
      }
      q_atom = false;
    }
    return base;
  }

  PExpr parse_term() {
    PExpr acc = parse_factor();
    while (peek().kind == Tok::star || peek().kind == Tok::slash) {
      const Token op = get();
      PExpr f = parse_factor();
      acc = op.kind == Tok::star ? pe_mul(acc, f, op) : pe_div(std::move(acc), f, op);
    }
    return acc;
  }

  PExpr parse_expr() {
    bool neg = false;
    if (accept(Tok::minus))
      neg = true;
    else
      accept(Tok::plus);
    PExpr acc = parse_term();
    if (neg) acc = pe_neg(std::move(acc));
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      bool minus = get().kind == Tok::minus;
      PExpr t = parse_term();
      acc = pe_add(std::move(acc), minus ? pe_neg(std::move(t)) : std::move(t));
    }
    return acc;
  }

  RationalFunction parse_coeff_expr(const VarSetPtr& vars) {
    bool saved_mode = coeff_mode_;
    VarSetPtr saved_cv = cv_;
    coeff_mode_ = true;
    cv_ = vars;
    PExpr e = parse_expr();
    coeff_mode_ = saved_mode;
    cv_ = std::move(saved_cv);
    if (e.empty()) return RationalFunction::zero(vars);
    if (e.size() != 1 || !e[0].unknown.empty() || !e[0].factors.empty() || !e[0].q_exp.is_zero())
      fail(errc::parse, "expected a plain coefficient expression");
    return std::move(e[0].coeff);
  }

  std::string text_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int line_limit_ = 0;
  mutable Token eol_{Tok::end, "", 0, 0};

  bool coeff_mode_ = false;
  VarSetPtr cv_ = pq_vars();
  std::optional<HoradamParams> horadam_;
  std::vector<std::string> index_vars_;
  std::set<std::string> unknowns_;
};

}  // namespace

IdentityTemplate parse_identity(const std::string& text, const std::string& name) {
  Parser p(text);
  return p.parse_template(name);
}

RationalFunction parse_ratfunc(const std::string& text, const VarSetPtr& vars) {
  Parser p(text);
  return p.parse_coefficient(vars);
}

}  // namespace lucid
