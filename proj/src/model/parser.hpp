#pragma once

#include <string>

#include "algebra/ratfunc.hpp"
#include "model/identity.hpp"

namespace lucid {

// Parses identity text into a canonical template. The text is an optional
// preamble (@params P = ..., Q = ... or @horadam a0 = ..., a1 = ..., p0 = ...,
// p1 = ...) followed by a sum of terms or an equation between two sums.
// Unknown coefficients are any names not bound as parameters; '#' starts a
// comment. `name` tags the result and is not part of the grammar.
IdentityTemplate parse_identity(const std::string& text, const std::string& name = {});

// Parses a coefficient expression over the given variables: integers, the
// variable names, +, -, *, /, integer powers, and parentheses.
RationalFunction parse_ratfunc(const std::string& text, const VarSetPtr& vars);

}  // namespace lucid
