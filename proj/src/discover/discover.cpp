#include "discover/discover.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "algebra/varset.hpp"
#include "error.hpp"

namespace lucid {

namespace {

struct SampleRow {
  std::vector<RationalFunction> entries;
  RationalFunction rhs;
  bool degenerate = false;  // every entry and the right-hand side vanish
};

// Binds the sample and reads one row off the folded template. Each unknown
// appears in at most one folded term, so its coefficient is the row entry;
// the known remainder moves to the right-hand side with its sign flipped.
SampleRow extract_row(const IdentityTemplate& t, const std::vector<std::string>& unknowns,
                      const IndexAssignment& sample) {
  for (const std::string& v : t.index_vars())
    if (sample.find(v) == sample.end())
      fail(errc::invalid, "sample does not bind index variable '" + v + "'");
  const VarSetPtr cv = t.coeff_vars();
  SampleRow row;
  row.entries.assign(unknowns.size(), RationalFunction::zero(cv));
  row.rhs = RationalFunction::zero(cv);
  const IdentityTemplate bound = t.substitute(sample);
  for (const Term& term : bound.terms()) {
    if (!term.factors.empty() || !term.q_exp.is_zero())
      fail(errc::internal, "a fully bound sample left sequence factors unfolded");
    if (term.coeff.known) {
      row.rhs = row.rhs - term.coeff.value;
      continue;
    }
    const auto it = std::find(unknowns.begin(), unknowns.end(), term.coeff.name);
    if (it == unknowns.end()) fail(errc::internal, "unknown name missing from the column list");
    row.entries[static_cast<std::size_t>(it - unknowns.begin())] = term.coeff.value;
  }
  row.degenerate = row.rhs.is_zero() &&
                   std::all_of(row.entries.begin(), row.entries.end(),
                               [](const RationalFunction& e) { return e.is_zero(); });
  return row;
}

// Matches templates whose unknown terms are exactly c_i * U_v^i * U_{v+1}^(m-i)
// with the exponent i running through 0..m, one unknown per value. For these
// the contiguous index block starting at -floor((m-1)/2) is known to give an
// invertible system, so sampling needs no search.
bool is_power_block(const IdentityTemplate& t, std::size_t unknown_count, long long& m_out) {
  const IndexExpr kv = IndexExpr::of_var(t.index_vars().front());
  const IndexExpr kv1 = kv + IndexExpr::of_constant(1);
  long long m = -1;
  std::set<long long> seen;
  for (const Term& term : t.terms()) {
    if (term.coeff.known) continue;
    if (!term.q_exp.is_zero()) return false;
    long long a = 0, b = 0;
    for (const SeqFactor& f : term.factors) {
      if (f.kind != SeqKind::U) return false;
      if (f.index == kv)
        a = f.exp;
      else if (f.index == kv1)
        b = f.exp;
      else
        return false;
    }
    if (m < 0)
      m = a + b;
    else if (a + b != m)
      return false;
    if (!seen.insert(a).second) return false;
  }
  if (m < 1) return false;
  if (static_cast<long long>(unknown_count) != m + 1) return false;
  if (static_cast<long long>(seen.size()) != m + 1) return false;
  if (*seen.begin() != 0 || *seen.rbegin() != m) return false;
  m_out = m;
  return true;
}

Integer binomial(int m, int i) {
  Integer r = 1;
  for (int j = 1; j <= i; ++j) r = r * (m - j + 1) / j;
  return r;
}

const char* variant_tag(InterpVariant v) {
  switch (v) {
    case InterpVariant::u_power:
      return "power";
    case InterpVariant::q_scaled:
      return "qscaled";
    case InterpVariant::horadam:
      return "horadam";
  }
  fail(errc::internal, "unhandled interpolation variant");
}

}  // namespace

std::vector<IndexAssignment> default_samples(const IdentityTemplate& t) {
  const std::vector<std::string> unknowns = t.unknown_names();
  if (unknowns.empty()) fail(errc::invalid, "the template has no unknown coefficients");
  const std::vector<std::string>& ivs = t.index_vars();
  if (ivs.empty()) fail(errc::invalid, "the template has no index variables to sample");
  const std::size_t n = unknowns.size();

  long long m = 0;
  if (ivs.size() == 1 && is_power_block(t, n, m)) {
    const long long lo = -((m - 1) / 2);
    std::vector<IndexAssignment> samples;
    for (std::size_t i = 0; i < n; ++i)
      samples.push_back({{ivs.front(), lo + static_cast<long long>(i)}});
    return samples;
  }

  // The variable appearing in the most distinct factor indices separates rows
  // fastest; the others stay pinned at small constants.
  std::string primary = ivs.front();
  std::size_t best_count = 0;
  for (const std::string& v : ivs) {
    std::set<IndexExpr> exprs;
    for (const Term& term : t.terms())
      for (const SeqFactor& f : term.factors)
        if (f.index.coeffs.count(v) != 0) exprs.insert(f.index);
    if (exprs.size() > best_count) {
      best_count = exprs.size();
      primary = v;
    }
  }
  IndexAssignment base;
  long long pin = 1;
  for (const std::string& v : ivs)
    if (v != primary) base[v] = pin++;

  // Walk outward from zero, keeping assignments whose row carries any
  // information. The bound leaves room for a handful of degenerate indices.
  const long long bound = static_cast<long long>(n) + 4;
  std::vector<long long> order{0};
  for (long long mag = 1; mag <= bound; ++mag) {
    order.push_back(mag);
    order.push_back(-mag);
  }
  std::vector<long long> chosen;
  for (const long long k : order) {
    if (chosen.size() == n) break;
    IndexAssignment sample = base;
    sample[primary] = k;
    if (extract_row(t, unknowns, sample).degenerate) continue;
    chosen.push_back(k);
  }
  if (chosen.size() < n)
    fail(errc::singular, "no nondegenerate sample set within the search bound");
  std::sort(chosen.begin(), chosen.end());

  std::vector<IndexAssignment> samples;
  for (const long long k : chosen) {
    IndexAssignment sample = base;
    sample[primary] = k;
    samples.push_back(std::move(sample));
  }
  return samples;
}

AnsatzSystem build_system(const IdentityTemplate& t, const std::vector<IndexAssignment>& samples) {
  if (!t.has_unknowns()) fail(errc::invalid, "the template has no unknown coefficients");
  if (samples.empty()) fail(errc::invalid, "at least one sample row is required");
  AnsatzSystem system;
  system.unknowns = t.unknown_names();
  for (const IndexAssignment& sample : samples) {
    SampleRow row = extract_row(t, system.unknowns, sample);
    system.matrix.push_back(std::move(row.entries));
    system.rhs.push_back(std::move(row.rhs));
    system.samples.push_back(sample);
  }
  return system;
}

DiscoverResult discover(const IdentityTemplate& t, const DiscoverOptions& options) {
  if (!t.has_unknowns()) fail(errc::invalid, "the template has no unknown coefficients");
  const std::vector<IndexAssignment> samples =
      options.samples ? *options.samples : default_samples(t);
  const AnsatzSystem system = build_system(t, samples);

  DiscoverResult result;
  result.report = solve(system);

  bool homogeneous = true;
  for (const RationalFunction& e : system.rhs) homogeneous = homogeneous && e.is_zero();

  std::vector<std::vector<RationalFunction>> candidates;
  if (result.report.particular) {
    bool nonzero = false;
    for (const RationalFunction& e : *result.report.particular) nonzero = nonzero || !e.is_zero();
    if (nonzero) candidates.push_back(*result.report.particular);
  }
  for (std::vector<RationalFunction> gen : result.report.nullspace) {
    for (const auto& [name, value] : options.normalize) {
      const auto it = std::find(system.unknowns.begin(), system.unknowns.end(), name);
      if (it == system.unknowns.end())
        fail(errc::invalid, "normalization names an absent unknown '" + name + "'");
      const std::size_t idx = static_cast<std::size_t>(it - system.unknowns.begin());
      if (gen[idx].is_zero()) continue;
      const RationalFunction scale = value / gen[idx];
      for (RationalFunction& e : gen) e = e * scale;
      break;
    }
    if (result.report.particular) {
      std::vector<RationalFunction> shifted = *result.report.particular;
      for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] = shifted[i] + gen[i];
      candidates.push_back(std::move(shifted));
    } else if (homogeneous) {
      candidates.push_back(std::move(gen));
    }
  }

  const std::string base = t.name().empty() ? std::string("ansatz") : t.name();
  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    std::map<std::string, RationalFunction> bindings;
    for (std::size_t i = 0; i < system.unknowns.size(); ++i)
      bindings[system.unknowns[i]] = candidates[ci][i];
    IdentityTemplate candidate =
        t.substitute({}, {}, bindings, base + ".sol" + std::to_string(ci + 1));
    result.verdicts.push_back(verify(candidate));
    result.solutions.push_back(std::move(candidate));
  }
  return result;
}

bool DiscoverResult::any_verified() const {
  for (const Verdict& v : verdicts)
    if (v.verified()) return true;
  return false;
}

nlohmann::ordered_json DiscoverResult::to_json() const {
  nlohmann::ordered_json j;
  j["report"] = report.to_json();
  nlohmann::ordered_json cs = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    nlohmann::ordered_json c;
    c["identity"] = solutions[i].to_json();
    c["verdict"] = verdicts[i].to_json();
    cs.push_back(std::move(c));
  }
  j["candidates"] = std::move(cs);
  return j;
}

IdentityTemplate power_representation(int m, SeqKind kind) {
  if (m < 1) fail(errc::invalid, "the power representation needs a positive multiplier");
  if (kind == SeqKind::W)
    fail(errc::invalid, "seeded sequences have no closed power representation");
  const VarSetPtr pq = pq_vars();
  std::vector<Term> terms;
  Term lead;
  lead.coeff = Coeff::of_value(RationalFunction::constant(pq, Rational(-1)));
  lead.factors.push_back(SeqFactor{kind, IndexExpr::of_var("k", m), 1});
  terms.push_back(std::move(lead));
  for (int i = 0; i <= m; ++i) {
    const LaurentPoly mult = lucas_symbolic(kind, i);
    if (mult.is_zero()) continue;
    Rational c(binomial(m, i));
    const int flips = kind == SeqKind::U ? i + 1 : i;
    if (flips % 2 != 0) c = -c;
    Term term;
    term.coeff = Coeff::of_value(RationalFunction(mult.scaled(c)));
    if (i > 0) term.factors.push_back(SeqFactor{SeqKind::U, IndexExpr::of_var("k"), i});
    if (i < m)
      term.factors.push_back(
          SeqFactor{SeqKind::U, IndexExpr::of_var("k") + IndexExpr::of_constant(1), m - i});
    terms.push_back(std::move(term));
  }
  IdentityTemplate t = IdentityTemplate::make(
      std::string("powrep.") + seq_kind_name(kind) + "." + std::to_string(m), {"k"},
      std::move(terms), RationalFunction::variable(pq, 0), RationalFunction::variable(pq, 1),
      std::nullopt, {});
  if (!verify(t).verified()) fail(errc::internal, "derived representation failed verification");
  return t;
}

IdentityTemplate interpolation_identity(int n, const std::vector<long long>& nodes,
                                        InterpVariant variant, const InterpOptions& options) {
  if (n < 1) fail(errc::invalid, "the interpolation needs a positive power");
  if (nodes.size() != static_cast<std::size_t>(n) + 1)
    fail(errc::invalid, "a power-n interpolation needs exactly n+1 nodes");
  if (std::set<long long>(nodes.begin(), nodes.end()).size() != nodes.size())
    fail(errc::invalid, "interpolation nodes must be distinct");
  if (variant == InterpVariant::q_scaled && options.x)
    fail(errc::invalid, "the Q-scaled form fixes the offset at zero");

  std::vector<std::string> ivs{"k"};
  IndexExpr xe = IndexExpr::of_constant(0);
  if (variant != InterpVariant::q_scaled) {
    if (options.x) {
      xe = IndexExpr::of_constant(*options.x);
    } else {
      ivs.push_back("x");
      xe = IndexExpr::of_var("x");
    }
  }
  const std::string name =
      std::string("interp.") + variant_tag(variant) + "." + std::to_string(n);
  const VarSetPtr pq = pq_vars();
  const RationalFunction sym_p = RationalFunction::variable(pq, 0);
  const RationalFunction sym_q = RationalFunction::variable(pq, 1);

  if (variant == InterpVariant::horadam) {
    if (!options.horadam) fail(errc::invalid, "the seeded form needs sequence parameters");
    const HoradamParams& hp = *options.horadam;
    const long long s = options.s;
    if (!horadam_symbolic(s, hp.a0, hp.a1, hp.p0, hp.p1).is_zero())
      fail(errc::invalid, "the shift must land on a vanishing term of the sequence");
    const VarSetPtr hv = horadam_vars();
    std::vector<Term> terms;
    Term lead;
    lead.coeff = Coeff::of_value(RationalFunction::constant(hv, Rational(-1)));
    lead.factors.push_back(SeqFactor{SeqKind::W, IndexExpr::of_var("k") + xe, n});
    terms.push_back(std::move(lead));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      RationalFunction c = RationalFunction::one(hv);
      Term term;
      term.factors.push_back(
          SeqFactor{SeqKind::W, IndexExpr::of_var("k") + IndexExpr::of_constant(nodes[i]), n});
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (j == i) continue;
        const RationalFunction d =
            horadam_symbolic(nodes[i] - nodes[j] + s, hp.a0, hp.a1, hp.p0, hp.p1);
        if (d.is_zero()) fail(errc::singular, "a coefficient denominator vanishes identically");
        c = c / d;
        term.factors.push_back(
            SeqFactor{SeqKind::W, xe + IndexExpr::of_constant(s - nodes[j]), 1});
      }
      term.coeff = Coeff::of_value(std::move(c));
      terms.push_back(std::move(term));
    }
    IdentityTemplate t = IdentityTemplate::make(name, ivs, std::move(terms), sym_p, sym_q,
                                                *options.horadam, {});
    if (!verify(t).verified()) fail(errc::internal, "derived identity failed verification");
    return t;
  }

  std::vector<Term> terms;
  Term lead;
  lead.coeff = Coeff::of_value(RationalFunction::constant(pq, Rational(-1)));
  lead.factors.push_back(SeqFactor{SeqKind::U, IndexExpr::of_var("k") + xe, n});
  terms.push_back(std::move(lead));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    RationalFunction c = RationalFunction::one(pq);
    Term term;
    term.factors.push_back(
        SeqFactor{SeqKind::U, IndexExpr::of_var("k") + IndexExpr::of_constant(nodes[i]), n});
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (j == i) continue;
      if (variant == InterpVariant::u_power) {
        c = c / RationalFunction(lucas_symbolic(SeqKind::U, nodes[i] - nodes[j]));
        term.factors.push_back(
            SeqFactor{SeqKind::U, xe + IndexExpr::of_constant(-nodes[j]), 1});
      } else {
        c = c * RationalFunction(lucas_symbolic(SeqKind::U, nodes[j]));
        c = c / RationalFunction(lucas_symbolic(SeqKind::U, nodes[j] - nodes[i]));
      }
    }
    if (variant == InterpVariant::q_scaled)
      term.q_exp = IndexExpr::of_constant(-static_cast<long long>(n) * nodes[i]);
    term.coeff = Coeff::of_value(std::move(c));
    terms.push_back(std::move(term));
  }
  IdentityTemplate t =
      IdentityTemplate::make(name, ivs, std::move(terms), sym_p, sym_q, std::nullopt, {});
  if (!verify(t).verified()) fail(errc::internal, "derived identity failed verification");
  return t;
}

}  // namespace lucid
