#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "algebra/numbers.hpp"
#include "algebra/varset.hpp"

namespace lucid {

// Exponent vector aligned to a VarSet. Entries may be negative (Laurent
// monomials); the all-zero vector is the unit monomial.
struct Monomial {
  std::vector<std::int32_t> exp;

  static Monomial unit(std::size_t nvars) { return Monomial{std::vector<std::int32_t>(nvars, 0)}; }

  std::int64_t total_degree() const {
    std::int64_t d = 0;
    for (auto e : exp) d += e;
    return d;
  }
  bool is_unit() const {
    for (auto e : exp)
      if (e != 0) return false;
    return true;
  }
  bool nonnegative() const {
    for (auto e : exp)
      if (e < 0) return false;
    return true;
  }
  bool divides(const Monomial& m) const {
    for (std::size_t i = 0; i < exp.size(); ++i)
      if (exp[i] > m.exp[i]) return false;
    return true;
  }
  Monomial operator*(const Monomial& o) const {
    Monomial r = *this;
    for (std::size_t i = 0; i < exp.size(); ++i) r.exp[i] += o.exp[i];
    return r;
  }
  Monomial div(const Monomial& o) const {
    Monomial r = *this;
    for (std::size_t i = 0; i < exp.size(); ++i) r.exp[i] -= o.exp[i];
    return r;
  }
  Monomial pow(int k) const {
    Monomial r = *this;
    for (auto& e : r.exp) e *= k;
    return r;
  }
  bool operator==(const Monomial& o) const { return exp == o.exp; }
  bool operator!=(const Monomial& o) const { return exp != o.exp; }
};

// Graded lexicographic order: total degree first, ties broken
// lexicographically with the first variable most significant.
struct GradedLex {
  bool operator()(const Monomial& a, const Monomial& b) const {
    std::int64_t da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    return a.exp < b.exp;
  }
};

// Sparse multivariate Laurent polynomial with exact rational coefficients.
// Canonical form: no zero coefficients stored, terms ordered by GradedLex.
class LaurentPoly {
 public:
  using TermMap = std::map<Monomial, Rational, GradedLex>;

  LaurentPoly() : vars_(empty_vars()) {}
  explicit LaurentPoly(VarSetPtr vars) : vars_(std::move(vars)) {}

  static LaurentPoly constant(VarSetPtr vars, Rational c);
  static LaurentPoly variable(VarSetPtr vars, std::size_t index, int exponent = 1);
  static LaurentPoly monomial(VarSetPtr vars, Monomial m, Rational c);
  static LaurentPoly one(VarSetPtr vars) { return constant(std::move(vars), Rational(1)); }

  const VarSetPtr& vars() const { return vars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_one() const;
  bool is_single_term() const { return terms_.size() == 1; }
  bool nonnegative() const;
  // Constant term value; is_constant() must hold (zero counts as constant).
  Rational constant_value() const;

  // Graded-lex greatest term. Polynomial must be nonzero.
  const std::pair<const Monomial, Rational>& leading() const;

  int degree(std::size_t var) const;      // max exponent of var, 0 for zero poly
  int low_degree(std::size_t var) const;  // min exponent of var, 0 for zero poly

  LaurentPoly operator-() const;
  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

  LaurentPoly scaled(const Rational& c) const;
  LaurentPoly mul_monomial(const Monomial& m, const Rational& c = Rational(1)) const;
  LaurentPoly pow(unsigned n) const;

  // Terms grouped by the exponent of `var`, with that exponent zeroed out:
  // the coefficient of var^d as a polynomial in the remaining variables.
  LaurentPoly coeff_at(std::size_t var, int d) const;

  // Exact evaluation. A negative exponent on a variable bound to zero raises
  // a singularity error that names the variable.
  Rational evaluate(const std::vector<Rational>& values) const;

  // Deterministic text form, graded-lex descending: "P^5 - 4*P^3*Q + 3*P*Q^2".
  std::string render() const;

  bool operator==(const LaurentPoly& o) const;
  bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

  void add_term(const Monomial& m, const Rational& c);  // merges, drops zeros

 private:
  VarSetPtr vars_;
  TermMap terms_;
};

// Positive rational c with f = c * (integer-coefficient poly of content 1).
// f must be nonzero.
Rational rat_content(const LaurentPoly& f);

// f scaled to integer coprime coefficients with positive graded-lex leading
// coefficient. `scale_out`, when given, receives s with f = s * result.
LaurentPoly normalize_primitive(const LaurentPoly& f, Rational* scale_out = nullptr);

// Exact multivariate division; both operands must have nonnegative exponents.
bool try_divide_exact(const LaurentPoly& a, const LaurentPoly& b, LaurentPoly& quotient);
LaurentPoly divide_exact(const LaurentPoly& a, const LaurentPoly& b);

// Primitive Euclidean gcd, canonicalized primitive with positive leading
// coefficient (so gcd of nonzero constants is 1). Operands must be ordinary
// polynomials: negative exponents raise errc::invalid.
LaurentPoly poly_gcd(const LaurentPoly& a, const LaurentPoly& b);

}  // namespace lucid
