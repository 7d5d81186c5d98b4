#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lucid {

// Ordered set of variable names. Every polynomial carries a shared pointer to
// one of these; the order fixes monomial comparison, rendering, and the
// meaning of exponent vectors, so two polynomials only interoperate when
// their VarSets compare equal (by content, not by pointer).
class VarSet {
 public:
  explicit VarSet(std::vector<std::string> names) : names_(std::move(names)) {}

  static std::shared_ptr<const VarSet> make(std::vector<std::string> names) {
    return std::make_shared<const VarSet>(std::move(names));
  }

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<std::size_t> index(std::string_view n) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == n) return i;
    return std::nullopt;
  }

  bool operator==(const VarSet& o) const { return names_ == o.names_; }
  bool operator!=(const VarSet& o) const { return names_ != o.names_; }

 private:
  std::vector<std::string> names_;
};

using VarSetPtr = std::shared_ptr<const VarSet>;

// Shared singletons for the rings the engine works over.
const VarSetPtr& pq_vars();        // (P, Q)
const VarSetPtr& horadam_vars();   // (p0, p1)
const VarSetPtr& horadam_full_vars();  // (a0, a1, p0, p1)
const VarSetPtr& binet_vars();     // (alpha, abar)
const VarSetPtr& empty_vars();

inline bool same_vars(const VarSetPtr& a, const VarSetPtr& b) {
  return a == b || (a && b && *a == *b);
}

}  // namespace lucid
