#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "algebra/ratfunc.hpp"
#include "model/identity.hpp"

namespace lucid {

// Laurent polynomial in the per-index monomial variables T_v ~ alpha^v and
// S_v ~ abar^v, with coefficients in Q(alpha, abar). No zero coefficients are
// stored; the zero polynomial has an empty term map.
class BinetPoly {
 public:
  using TermMap = std::map<Monomial, RationalFunction, GradedLex>;

  BinetPoly() : vars_(empty_vars()) {}
  explicit BinetPoly(VarSetPtr vars) : vars_(std::move(vars)) {}

  static BinetPoly constant(VarSetPtr vars, RationalFunction c);
  static BinetPoly monomial(VarSetPtr vars, Monomial m, RationalFunction c);

  const VarSetPtr& vars() const { return vars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  BinetPoly operator+(const BinetPoly& o) const;
  BinetPoly operator-(const BinetPoly& o) const;
  BinetPoly operator*(const BinetPoly& o) const;
  BinetPoly pow(unsigned e) const;
  BinetPoly scaled(const RationalFunction& c) const;

  void add_term(const Monomial& m, const RationalFunction& c);

  bool operator==(const BinetPoly& o) const {
    return same_vars(vars_, o.vars_) && terms_ == o.terms_;
  }

  std::string render() const;

 private:
  VarSetPtr vars_;
  TermMap terms_;
};

// The monomial variable set for a template's index variables, one (T_v, S_v)
// pair per variable in declaration order.
VarSetPtr ts_vars(const std::vector<std::string>& index_vars);

struct Witness {
  std::string monomial;
  std::string coefficient;
};

struct Counterexample {
  Rational param_p;  // p0 for Horadam templates
  Rational param_q;  // p1 for Horadam templates
  std::map<std::string, long long> indices;
  Rational value;  // the nonzero value of the template sum
};

enum class VerdictStatus { verified, refuted };

// A refuted verdict always carries a witness; the counterexample is attached
// when random search finds one.
struct Verdict {
  VerdictStatus status = VerdictStatus::verified;
  std::optional<Witness> witness;
  std::optional<Counterexample> counterexample;

  bool verified() const { return status == VerdictStatus::verified; }
  nlohmann::ordered_json to_json() const;
};

// Expands a fully known template over generic alpha, abar via
// P = alpha + abar, Q = alpha*abar. A factor U[sum a_i k_i + d] becomes
// (alpha^d prod T_i^{a_i} - abar^d prod S_i^{a_i}) / (alpha - abar), V the
// corresponding sum, Q^(sum a_i k_i) becomes prod (T_i S_i)^{a_i}, and W is
// first rewritten through W_e = a1*U_e + a0*p1*U_{e-1} over (p0, -p1).
BinetPoly binet_expand(const IdentityTemplate& t);

// Decides whether the template holds for every integer index assignment.
// Constant parameter bindings are honoured by reducing the expansion modulo
// the relations they impose on alpha and abar (and on the monomials, for
// parameters where distinct exponent vectors describe one function of the
// indices). Requires Q != 0 and a nonzero discriminant.
Verdict verify(const IdentityTemplate& t);

// Random search for a falsifying assignment: parameters with numerators and
// denominators in [-9, 9] (Q != 0, discriminant != 0, constant bindings kept
// fixed), indices in [-6, 6]; trials hitting a coefficient singularity are
// skipped. Deterministic for a fixed seed.
std::optional<Counterexample> numeric_check(const IdentityTemplate& t, int trials, unsigned seed);

}  // namespace lucid
