#include "algebra/varset.hpp"

namespace lucid {

const VarSetPtr& pq_vars() {
  static const VarSetPtr v = VarSet::make({"P", "Q"});
  return v;
}

const VarSetPtr& horadam_vars() {
  static const VarSetPtr v = VarSet::make({"p0", "p1"});
  return v;
}

const VarSetPtr& horadam_full_vars() {
  static const VarSetPtr v = VarSet::make({"a0", "a1", "p0", "p1"});
  return v;
}

const VarSetPtr& binet_vars() {
  static const VarSetPtr v = VarSet::make({"alpha", "abar"});
  return v;
}

const VarSetPtr& empty_vars() {
  static const VarSetPtr v = VarSet::make({});
  return v;
}

}  // namespace lucid
