#pragma once

#include <string>
#include <vector>

#include "model/identity.hpp"

namespace lucid {

// Built-in identities. F.* are Fibonacci instances (P = 1, Q = -1) of the
// general GF.* family; EQ.* are Fibonacci power-sum identities; ADD is the
// addition formula; CAT.n are the n = 1..6 instances of GF.2.
const std::vector<std::string>& catalog_names();
bool catalog_has(const std::string& name);
const IdentityTemplate& catalog_get(const std::string& name);

}  // namespace lucid
