#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "algebra/ratfunc.hpp"

namespace lucid {

// A linear system sampled from a template with unknown coefficients. Rows
// follow `samples`, columns follow `unknowns`; every entry lives over the
// template's coefficient field.
struct AnsatzSystem {
  std::vector<std::vector<RationalFunction>> matrix;
  std::vector<RationalFunction> rhs;
  std::vector<std::string> unknowns;
  std::vector<std::map<std::string, long long>> samples;
};

struct SolutionReport {
  int rank = 0;
  int nullity = 0;  // rank + nullity = columns
  // Square systems only, rows and columns in system order.
  std::optional<RationalFunction> determinant;
  // Present when the system is inhomogeneous and consistent; free unknowns
  // are set to zero.
  std::optional<std::vector<RationalFunction>> particular;
  std::vector<std::vector<RationalFunction>> nullspace;
  // Distinct polynomial factors whose vanishing can change the rank.
  std::vector<LaurentPoly> parameter_conditions;

  nlohmann::ordered_json to_json() const;
};

// Exact reduced row echelon elimination over the rational-function field.
// Pivots take the smallest degree_weight candidate in each column, which
// keeps entries small but never changes the (exact) answer. A nullspace of
// dimension one is scaled so the last unknown with a nonzero coordinate
// reads -1.
SolutionReport solve(const AnsatzSystem& system);

// Determinant of a square matrix by elimination; empty matrices have
// determinant one.
RationalFunction determinant(std::vector<std::vector<RationalFunction>> m);

// The distinct non-constant polynomial factors of f's numerator: monomial
// variable factors, then factors split off a weighted-homogeneous structure
// by rational-root extraction; whatever resists splitting is listed whole.
std::vector<LaurentPoly> degeneracy_factors(const RationalFunction& f);

}  // namespace lucid
