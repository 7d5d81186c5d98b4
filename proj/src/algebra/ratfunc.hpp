#pragma once

#include <string>
#include <vector>

#include "algebra/poly.hpp"

namespace lucid {

// Quotient of two ordinary polynomials in canonical form: gcd(num, den) = 1,
// den primitive with positive graded-lex leading coefficient, zero is 0/1.
// Laurent inputs are accepted and cleared into the fraction.
class RationalFunction {
 public:
  RationalFunction() : num_(empty_vars()), den_(LaurentPoly::one(empty_vars())) {}
  explicit RationalFunction(LaurentPoly num);
  RationalFunction(LaurentPoly num, LaurentPoly den);

  static RationalFunction constant(VarSetPtr vars, Rational c) {
    return RationalFunction(LaurentPoly::constant(std::move(vars), std::move(c)));
  }
  static RationalFunction variable(VarSetPtr vars, std::size_t index, int exponent = 1) {
    return RationalFunction(LaurentPoly::variable(std::move(vars), index, exponent));
  }
  static RationalFunction zero(VarSetPtr vars) {
    return RationalFunction(LaurentPoly(std::move(vars)));
  }
  static RationalFunction one(VarSetPtr vars) {
    return RationalFunction(LaurentPoly::one(std::move(vars)));
  }

  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }
  const VarSetPtr& vars() const { return num_.vars(); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_constant() const { return num_.is_constant() && den_.is_one(); }
  Rational constant_value() const;  // requires is_constant()

  // Combined size measure used for pivot selection: total degree of num
  // plus total degree of den.
  std::int64_t degree_weight() const;

  RationalFunction operator-() const;
  RationalFunction operator+(const RationalFunction& o) const;
  RationalFunction operator-(const RationalFunction& o) const;
  RationalFunction operator*(const RationalFunction& o) const;
  RationalFunction operator/(const RationalFunction& o) const;  // o must be nonzero
  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
  RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

  RationalFunction inverse() const;  // must be nonzero
  RationalFunction pow(long long e) const;
  RationalFunction scaled(const Rational& c) const;

  // Exact evaluation; a vanishing denominator raises a singularity error that
  // names the vanishing factor.
  Rational evaluate(const std::vector<Rational>& values) const;

  // Composition: every variable replaced by the given rational function (all
  // over one common target variable set).
  RationalFunction substitute(const std::vector<RationalFunction>& values) const;

  // "P^2 - Q", "(P^2-Q)/Q^3", "Q^2/P^2".
  std::string render() const;

  bool operator==(const RationalFunction& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RationalFunction& o) const { return !(*this == o); }

 private:
  void canonicalize();
  RationalFunction add_scaled(const RationalFunction& o, int sign) const;

  LaurentPoly num_, den_;
};

// Composition for bare polynomials (shares the substitute machinery).
RationalFunction substitute(const LaurentPoly& p, const std::vector<RationalFunction>& values);

}  // namespace lucid
