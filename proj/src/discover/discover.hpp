#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "discover/solve.hpp"
#include "model/identity.hpp"
#include "verify/binet.hpp"

namespace lucid {

using IndexAssignment = std::map<std::string, long long>;

// One sample per unknown, chosen so no row degenerates to 0 = 0. Templates
// shaped like a power of U expanded over U_k, U_{k+1} get the contiguous index
// block centred below zero; anything else takes the nonsingular assignments
// closest to zero, secondary index variables pinned at small constants.
std::vector<IndexAssignment> default_samples(const IdentityTemplate& t);

// Instantiates the template at each sample. Binding every index variable
// folds all sequence factors into the coefficient field, so each unknown
// contributes one entry per row and the fully known part, negated, forms the
// right-hand side.
AnsatzSystem build_system(const IdentityTemplate& t, const std::vector<IndexAssignment>& samples);

struct DiscoverOptions {
  // Overrides default_samples when present.
  std::optional<std::vector<IndexAssignment>> samples;
  // Rescaling applied to each nullspace generator before instantiation: the
  // first entry naming an unknown with a nonzero coordinate pins that
  // coordinate to the given value.
  std::map<std::string, RationalFunction> normalize;
};

struct DiscoverResult {
  SolutionReport report;
  // One instantiated template per solution of the sampled system, each with
  // its verdict at the same position. Candidates the verifier refutes stay
  // in the list; only the verdict tells them apart.
  std::vector<IdentityTemplate> solutions;
  std::vector<Verdict> verdicts;

  bool any_verified() const;
  nlohmann::ordered_json to_json() const;
};

// Solves for the template's unknown coefficients and verifies every candidate
// solution. The sampled system is necessary but not sufficient, so a solved
// system with a refuted verdict is a normal outcome, not an error.
DiscoverResult discover(const IdentityTemplate& t, const DiscoverOptions& options = {});

// U_{m*k} or V_{m*k} written as a polynomial in U_k and U_{k+1} with
// coefficients built from binomials and the sequence values at 0..m. The
// result is verified before it is returned.
IdentityTemplate power_representation(int m, SeqKind kind);

enum class InterpVariant {
  u_power,   // U_{k+x}^n from the n-th powers at the nodes
  q_scaled,  // U_k^n with the node terms scaled by Q powers
  horadam,   // W_{k+x}^n, coefficients from W values shifted to a zero of W
};

struct InterpOptions {
  // Concrete offset; the offset stays a free index variable "x" when absent.
  std::optional<long long> x;
  // Required for the horadam variant, ignored otherwise.
  std::optional<HoradamParams> horadam;
  // Shift s with W_s = 0 for the horadam variant.
  long long s = 0;
};

// The degree-n interpolation identity through the given distinct nodes (one
// more node than the degree). Coefficient denominators that vanish
// identically raise errc::singular; the result is verified before it is
// returned.
IdentityTemplate interpolation_identity(int n, const std::vector<long long>& nodes,
                                        InterpVariant variant, const InterpOptions& options = {});

}  // namespace lucid
