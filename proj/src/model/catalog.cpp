#include "model/catalog.hpp"

#include <map>
#include <utility>

#include "model/parser.hpp"

namespace lucid {

namespace {

struct Entry {
  const char* name;
  const char* source;
};

// Sources are written the way the identities are usually stated; the parser
// folds constant-index terms like U[3] and the @params preambles specialize
// (P, Q). F.8 and F.11 drop the GF terms whose coefficients vanish at
// (1, -1). GF.14, GF.15, and F.14 are stored multiplied through by their
// denominators, so they hold for all integer nodes, degenerate ones included.
constexpr Entry kEntries[] = {
    {"F.1",
     "@params P = 1, Q = -1\n"
     "2*(U[k]^4 + U[k+1]^4 + U[k+2]^4) = (U[k]^2 + U[k+1]^2 + U[k+2]^2)^2"},
    {"F.2",
     "@params P = 1, Q = -1\n"
     "U[k]^2 - U[k+n]*U[k-n] = Q^(k-n)*U[n]^2"},
    {"F.3",
     "@params P = 1, Q = -1\n"
     "U[2k+1] = U[k+1]^2 + U[k]^2"},
    {"F.4",
     "@params P = 1, Q = -1\n"
     "U[2k] = U[k]*(2*U[k+1] - U[k])"},
    {"F.5",
     "@params P = 1, Q = -1\n"
     "U[3k] = U[k+1]^3 + U[k]^3 - U[k-1]^3"},
    {"F.6",
     "@params P = 1, Q = -1\n"
     "U[4k] = U[k+1]^4 + 2*U[k]^4 - U[k-1]^4 + 4*U[k]^3*U[k-1]"},
    {"F.7",
     "@params P = 1, Q = -1\n"
     "U[5k] = U[k+1]^5 + 4*U[k]^5 - U[k-1]^5 + 10*U[k+1]*U[k]^3*U[k-1]"},
    {"F.8",
     "@params P = 1, Q = -1\n"
     "(U[k-1]*U[k+2])^2 + (2*U[k]*U[k+1])^2 = U[2k+1]^2"},
    {"F.9",
     "@params P = 1, Q = -1\n"
     "U[k+1]^2 + U[k-2]^2 = 2*(U[k]^2 + U[k-1]^2)"},
    {"F.10",
     "@params P = 1, Q = -1\n"
     "U[2k] = U[k+1]^2 - U[k-1]^2"},
    {"F.11",
     "@params P = 1, Q = -1\n"
     "U[k+1]^2 = 4*U[k]*U[k-1] + U[k-2]^2"},
    {"F.12",
     "@params P = 1, Q = -1\n"
     "U[k+2]^2 - U[k-2]^2 = 3*(U[k+1]^2 - U[k-1]^2)"},
    {"F.13",
     "@params P = 1, Q = -1\n"
     "U[2l]*(U[k+m]^2 - U[k-m]^2) = U[2m]*(U[k+l]^2 - U[k-l]^2)"},
    {"F.14",
     "@params P = 1, Q = -1\n"
     "U[k]^2*U[l-m]*U[s-m]*U[s-l]*U[m-l]*U[m-s]*U[l-s]"
     " = U[k+m]^2*U[l]*U[s]*U[s-l]*U[m-l]*U[m-s]*U[l-s]"
     " + U[k+l]^2*U[s]*U[m]*U[l-m]*U[s-m]*U[m-s]*U[l-s]"
     " + U[k+s]^2*U[m]*U[l]*U[l-m]*U[s-m]*U[s-l]*U[m-l]"},
    {"GF.1", "2*(Q^4*U[k]^4 + P^4*U[k+1]^4 + U[k+2]^4) = (Q^2*U[k]^2 + P^2*U[k+1]^2 + U[k+2]^2)^2"},
    {"GF.2", "U[k]^2 - U[k+n]*U[k-n] = Q^(k-n)*U[n]^2"},
    {"GF.3", "U[2k+1] = U[k+1]^2 - Q*U[k]^2"},
    {"GF.4", "U[2k] = U[k]*(2*U[k+1] - P*U[k])"},
    {"GF.5", "U[3k] = U[k+1]^3/P + (U[3] - P^2)*U[k]^3 + Q^3*U[k-1]^3/P"},
    {"GF.6", "U[4k] = U[k+1]^4/P + (U[4] - P^3)*U[k]^4 - Q^4*U[k-1]^4/P + 4*Q^2*U[k]^3*U[k-1]"},
    {"GF.7",
     "U[5k] = U[k+1]^5/P + (U[5] - P^4)*U[k]^5 + Q^5*U[k-1]^5/P"
     " + 10*Q^2*U[k+1]*U[k]^3*U[k-1]"},
    {"GF.8",
     "(Q*U[k-1]*U[k+2])^2 + ((P^2 - Q)*U[k]*U[k+1])^2"
     " = (P*U[2k+1])^2 + 2*Q*(P^2 + Q)*U[k-1]*U[k]*U[k+1]*U[k+2]"},
    {"GF.9", "U[k+1]^2 - Q^3*U[k-2]^2 = (P^2 - Q)*(U[k]^2 - Q*U[k-1]^2)"},
    {"GF.10", "P*U[2k] = U[k+1]^2 - Q^2*U[k-1]^2"},
    {"GF.11", "U[k+1]^2 = 2*P*(P^2 - Q)*U[k]*U[k-1] + (Q^2 - P^4)*U[k-1]^2 + P^2*Q^2*U[k-2]^2"},
    {"GF.12", "U[k+2]^2 - Q^4*U[k-2]^2 = (P^2 - 2*Q)*(U[k+1]^2 - Q^2*U[k-1]^2)"},
    {"GF.13", "U[2l]*(U[k+m]^2 - Q^(2m)*U[k-m]^2) = U[2m]*(U[k+l]^2 - Q^(2l)*U[k-l]^2)"},
    {"GF.14",
     "Q^(2m + 2l + 2s)*U[k]^2*U[l-m]*U[s-m]*U[s-l]*U[m-l]*U[m-s]*U[l-s]"
     " = Q^(2l + 2s)*U[k+m]^2*U[l]*U[s]*U[s-l]*U[m-l]*U[m-s]*U[l-s]"
     " + Q^(2m + 2s)*U[k+l]^2*U[s]*U[m]*U[l-m]*U[s-m]*U[m-s]*U[l-s]"
     " + Q^(2m + 2l)*U[k+s]^2*U[m]*U[l]*U[l-m]*U[s-m]*U[s-l]*U[m-l]"},
    {"GF.15",
     "Q^(3m + 3l + 3p + 3s)*U[k]^3"
     "*U[l-m]*U[p-m]*U[s-m]*U[m-l]*U[p-l]*U[s-l]*U[m-p]*U[l-p]*U[s-p]*U[m-s]*U[l-s]*U[p-s]"
     " = Q^(3l + 3p + 3s)*U[k+m]^3*U[l]*U[p]*U[s]"
     "*U[m-l]*U[p-l]*U[s-l]*U[m-p]*U[l-p]*U[s-p]*U[m-s]*U[l-s]*U[p-s]"
     " + Q^(3m + 3p + 3s)*U[k+l]^3*U[m]*U[p]*U[s]"
     "*U[l-m]*U[p-m]*U[s-m]*U[m-p]*U[l-p]*U[s-p]*U[m-s]*U[l-s]*U[p-s]"
     " + Q^(3m + 3l + 3s)*U[k+p]^3*U[m]*U[l]*U[s]"
     "*U[l-m]*U[p-m]*U[s-m]*U[m-l]*U[p-l]*U[s-l]*U[m-s]*U[l-s]*U[p-s]"
     " + Q^(3m + 3l + 3p)*U[k+s]^3*U[m]*U[l]*U[p]"
     "*U[l-m]*U[p-m]*U[s-m]*U[m-l]*U[p-l]*U[s-l]*U[m-p]*U[l-p]*U[s-p]"},
    {"EQ.20",
     "@params P = 1, Q = -1\n"
     "U[k+2]^3 + U[k-2]^3 = 3*(U[k+1]^3 - U[k-1]^3) + 6*U[k]^3"},
    {"EQ.21",
     "@params P = 1, Q = -1\n"
     "U[k+3]^4 - U[k-3]^4 = 4*(U[k+2]^4 - U[k-2]^4) + 20*(U[k+1]^4 - U[k-1]^4)"},
    {"EQ.22",
     "@params P = 1, Q = -1\n"
     "U[k+3]^5 - U[k-3]^5 = 8*(U[k+2]^5 + U[k-2]^5) + 40*(U[k+1]^5 - U[k-1]^5) - 60*U[k]^5"},
    {"ADD", "U[n+m] = U[n]*U[m+1] - Q*U[m]*U[n-1]"},
};

struct CatalogData {
  std::vector<std::string> names;
  std::map<std::string, IdentityTemplate> by_name;
};

const CatalogData& catalog_data() {
  static const CatalogData data = [] {
    CatalogData d;
    for (const Entry& e : kEntries) {
      d.names.emplace_back(e.name);
      d.by_name.emplace(e.name, parse_identity(e.source, e.name));
    }
    const IdentityTemplate& gf2 = d.by_name.at("GF.2");
    for (long long n = 1; n <= 6; ++n) {
      std::string name = "CAT." + std::to_string(n);
      d.names.push_back(name);
      d.by_name.emplace(name, gf2.substitute({{"n", n}}, {}, {}, name));
    }
    return d;
  }();
  return data;
}

}  // namespace

const std::vector<std::string>& catalog_names() { return catalog_data().names; }

bool catalog_has(const std::string& name) { return catalog_data().by_name.count(name) != 0; }

const IdentityTemplate& catalog_get(const std::string& name) {
  const CatalogData& d = catalog_data();
  auto it = d.by_name.find(name);
  if (it != d.by_name.end()) return it->second;
  std::string msg = "no catalog identity named '" + name + "'; available:";
  for (const std::string& n : d.names) msg += " " + n;
  fail(errc::unknown_name, msg);
}

}  // namespace lucid
