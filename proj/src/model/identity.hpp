#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "algebra/ratfunc.hpp"
#include "lucas/lucas.hpp"

namespace lucid {

// Integer-affine combination of index variables, sum(coeffs[v] * v) + constant.
struct IndexExpr {
  std::map<std::string, long long> coeffs;  // no zero coefficients stored
  long long constant = 0;

  static IndexExpr of_constant(long long c) { return IndexExpr{{}, c}; }
  static IndexExpr of_var(const std::string& v, long long c = 1);

  bool is_constant() const { return coeffs.empty(); }
  bool is_zero() const { return coeffs.empty() && constant == 0; }

  void add_var(const std::string& v, long long c);
  IndexExpr operator+(const IndexExpr& o) const;
  IndexExpr operator-() const;
  IndexExpr scaled(long long c) const;

  long long evaluate(const std::map<std::string, long long>& binding) const;
  IndexExpr substituted(const std::string& var, long long value) const;

  // "2k + j - 1"; integer coefficients juxtaposed to the variable name.
  std::string render() const;

  bool operator==(const IndexExpr& o) const {
    return coeffs == o.coeffs && constant == o.constant;
  }
  bool operator<(const IndexExpr& o) const {
    if (coeffs != o.coeffs) return coeffs < o.coeffs;
    return constant < o.constant;
  }
};

struct SeqFactor {
  SeqKind kind = SeqKind::U;
  IndexExpr index;
  int exp = 1;  // always >= 1

  bool operator==(const SeqFactor& o) const {
    return kind == o.kind && index == o.index && exp == o.exp;
  }
  bool operator<(const SeqFactor& o) const {
    if (kind != o.kind) return static_cast<int>(kind) < static_cast<int>(o.kind);
    if (!(index == o.index)) return index < o.index;
    return exp < o.exp;
  }
};

// Known value, or a named unknown times a known scale.
struct Coeff {
  bool known = true;
  RationalFunction value;  // the value itself, or the unknown's scale
  std::string name;        // set iff !known

  static Coeff of_value(RationalFunction v) { return Coeff{true, std::move(v), {}}; }
  static Coeff of_unknown(std::string n, RationalFunction scale) {
    return Coeff{false, std::move(scale), std::move(n)};
  }
};

struct Term {
  Coeff coeff;
  IndexExpr q_exp;  // the factor Q^(q_exp); zero when absent
  std::vector<SeqFactor> factors;
};

// Seeds and recurrence parameters for W sequences. p0, p1 default to the
// symbolic variables of the same name.
struct HoradamParams {
  Rational a0, a1;
  RationalFunction p0, p1;
};

// A formal sum of terms asserted to vanish for every integer assignment of
// the index variables. Stored in canonical form: constant-index factors and
// constant Q-exponents folded into coefficients, like terms collected, terms
// sorted, zero terms dropped.
class IdentityTemplate {
 public:
  IdentityTemplate();

  // Canonicalizes the raw term list. param_p/param_q are the values bound to
  // the symbols P and Q (the symbols themselves when unspecialized).
  static IdentityTemplate make(std::string name, std::vector<std::string> index_vars,
                               std::vector<Term> terms, RationalFunction param_p,
                               RationalFunction param_q, std::optional<HoradamParams> horadam,
                               std::string source);

  const std::string& name() const { return name_; }
  const std::string& source() const { return source_; }
  const std::vector<std::string>& index_vars() const { return index_vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  const RationalFunction& param_p() const { return param_p_; }
  const RationalFunction& param_q() const { return param_q_; }
  const std::optional<HoradamParams>& horadam() const { return horadam_; }
  bool is_horadam() const { return horadam_.has_value(); }

  // Variable set of the coefficient field: (P, Q) or (p0, p1).
  VarSetPtr coeff_vars() const;

  bool is_zero() const { return terms_.empty(); }
  bool has_unknowns() const;
  // Unknown names, sorted and deduplicated.
  std::vector<std::string> unknown_names() const;

  void set_name(std::string name) { name_ = std::move(name); }

  // Applies any combination of index, parameter, and unknown bindings and
  // re-canonicalizes. Absent entries stay untouched. Index values must be
  // integers; parameter keys are P/Q (or p0/p1/a0/a1 for Horadam templates).
  IdentityTemplate substitute(const std::map<std::string, long long>& index_bindings,
                              const std::map<std::string, RationalFunction>& param_bindings = {},
                              const std::map<std::string, RationalFunction>& unknown_bindings = {},
                              std::string new_name = {}) const;

  // Exact value of the sum at one integer index assignment. x0, x1 supply
  // (P, Q), or (p0, p1) for Horadam templates; bound parameters override.
  Rational evaluate(const std::map<std::string, long long>& indices, const Rational& x0,
                    const Rational& x1) const;

  // Source text when the template came from text, canonical form otherwise.
  std::string render_text() const;
  // Deterministic canonical form, always re-parseable.
  std::string canonical_text() const;

  nlohmann::ordered_json to_json() const;
  static IdentityTemplate from_json(const nlohmann::json& j);

  // Equality of mathematical content: everything except name and source.
  bool structurally_equal(const IdentityTemplate& o) const;

 private:
  void canonicalize();
  RationalFunction fold_factor(const SeqFactor& f) const;

  std::string name_;
  std::string source_;
  std::vector<std::string> index_vars_;
  std::vector<Term> terms_;
  RationalFunction param_p_, param_q_;
  std::optional<HoradamParams> horadam_;
};

}  // namespace lucid
