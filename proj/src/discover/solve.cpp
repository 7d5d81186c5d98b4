#include "discover/solve.hpp"

#include <algorithm>
#include <cstddef>
#include <utility>

#include "error.hpp"

namespace lucid {

namespace {

// Best pivot at `col` among rows start..end: the smallest nonzero entry by
// degree_weight, earliest row on ties.
int pick_pivot(const std::vector<std::vector<RationalFunction>>& m, std::size_t start,
               std::size_t col) {
  int best = -1;
  std::int64_t best_weight = 0;
  for (std::size_t r = start; r < m.size(); ++r) {
    if (m[r][col].is_zero()) continue;
    const std::int64_t w = m[r][col].degree_weight();
    if (best < 0 || w < best_weight) {
      best = static_cast<int>(r);
      best_weight = w;
    }
  }
  return best;
}

// Positive divisors, ascending. Sized for determinant coefficients; anything
// past the bound reports failure instead of stalling in trial division.
bool small_divisors(const Integer& n, std::vector<Integer>& out) {
  if (n <= 0 || n > Integer(1000000000000LL)) return false;
  std::vector<Integer> high;
  for (Integer d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    if (d * d != n) high.push_back(n / d);
  }
  out.insert(out.end(), high.rbegin(), high.rend());
  return true;
}

Rational eval_poly(const std::vector<Rational>& c, const Rational& z) {
  Rational acc(0);
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
  return acc;
}

// Divides c by (z - r) in place; call only when r is a root.
void deflate(std::vector<Rational>& c, const Rational& r) {
  Rational carry(0);
  for (std::size_t i = c.size(); i-- > 1;) {
    Rational next = c[i];
    c[i] = carry;
    carry = next + carry * r;
  }
  c[0] = carry;
  c.pop_back();
}

// Strips every rational root out of c, recorded once each; c keeps whatever
// remains (possibly a constant).
std::vector<Rational> extract_rational_roots(std::vector<Rational>& c) {
  std::vector<Rational> roots;
  bool progress = true;
  while (progress && c.size() > 1) {
    progress = false;
    std::vector<Integer> ps, qs;
    if (!small_divisors(abs(rat_num(c.front()) * rat_den(c.back())), ps)) break;
    if (!small_divisors(abs(rat_num(c.back()) * rat_den(c.front())), qs)) break;
    for (const Integer& p : ps) {
      for (const Integer& q : qs) {
        if (gcd(p, q) != 1) continue;
        for (int sign : {1, -1}) {
          const Rational r = Rational(sign * p, q);
          if (eval_poly(c, r) != 0) continue;
          roots.push_back(r);
          while (c.size() > 1 && eval_poly(c, r) == 0) deflate(c, r);
          progress = true;
        }
        if (c.size() <= 1) break;
      }
      if (c.size() <= 1) break;
    }
  }
  return roots;
}

struct FactorBuilder {
  VarSetPtr vars;
  std::vector<LaurentPoly> out;

  void push(LaurentPoly f) {
    if (f.is_zero() || f.is_constant()) return;
    f = normalize_primitive(f);
    for (const LaurentPoly& seen : out)
      if (seen == f) return;
    out.push_back(std::move(f));
  }

  void push_variable(std::size_t v) { push(LaurentPoly::variable(vars, v)); }

  // q*x_hi - p*x_lo^w for a root p/q of the dehomogenized polynomial.
  void push_root(std::size_t lo, std::size_t hi, std::int64_t w, const Rational& root) {
    LaurentPoly f = LaurentPoly::variable(vars, hi).scaled(Rational(rat_den(root)));
    Monomial m = Monomial::unit(vars->size());
    m.exp[lo] = static_cast<std::int32_t>(w);
    f.add_term(m, -Rational(rat_num(root)));
    push(std::move(f));
  }
};

// Splits a primitive two-variable polynomial that is homogeneous under some
// positive integer weights: dehomogenizing turns it into a univariate
// polynomial whose rational roots each give one factor. Anything without
// that structure, or left after root extraction, is kept whole.
void split_weighted(const LaurentPoly& n, FactorBuilder& fb) {
  std::vector<std::int64_t> ea, eb;
  std::vector<Rational> cs;
  for (const auto& [m, c] : n.terms()) {
    ea.push_back(m.exp[0]);
    eb.push_back(m.exp[1]);
    cs.push_back(c);
  }
  const std::int64_t da = ea[0] - ea[1], db = eb[1] - eb[0];
  if (da == 0 || db == 0 || (da < 0) != (db < 0)) {
    fb.push(n);
    return;
  }
  const std::int64_t ada = da < 0 ? -da : da;
  const std::int64_t adb = db < 0 ? -db : db;
  const std::int64_t g = static_cast<std::int64_t>(gcd(Integer(ada), Integer(adb)));
  const std::int64_t wa = adb / g, wb = ada / g;
  const std::int64_t d = wa * ea[0] + wb * eb[0];
  for (std::size_t i = 0; i < ea.size(); ++i)
    if (wa * ea[i] + wb * eb[i] != d) {
      fb.push(n);
      return;
    }
  if (wa != 1 && wb != 1) {
    fb.push(n);
    return;
  }

  // With weight one on `lo`, the exponent of `hi` indexes the dehomogenized
  // coefficients.
  const std::size_t lo = wa == 1 ? 0 : 1;
  const std::size_t hi = 1 - lo;
  const std::int64_t w = wa == 1 ? wb : wa;
  const std::vector<std::int64_t>& he = lo == 0 ? eb : ea;
  std::vector<Rational> uni(1 + static_cast<std::size_t>(*std::max_element(he.begin(), he.end())),
                            Rational(0));
  for (std::size_t i = 0; i < he.size(); ++i) uni[static_cast<std::size_t>(he[i])] = cs[i];

  for (const Rational& r : extract_rational_roots(uni)) fb.push_root(lo, hi, w, r);
  if (uni.size() > 1) {
    LaurentPoly rest(fb.vars);
    for (std::size_t j = 0; j < uni.size(); ++j) {
      if (uni[j] == 0) continue;
      Monomial m = Monomial::unit(fb.vars->size());
      m.exp[hi] = static_cast<std::int32_t>(j);
      m.exp[lo] = static_cast<std::int32_t>(w * (static_cast<std::int64_t>(uni.size()) - 1 -
                                                 static_cast<std::int64_t>(j)));
      rest.add_term(m, uni[j]);
    }
    fb.push(std::move(rest));
  }
}

void collect_factors(const RationalFunction& f, FactorBuilder& fb) {
  if (f.is_zero()) return;
  LaurentPoly n = f.num();
  Monomial shift = Monomial::unit(fb.vars->size());
  bool stripped = false;
  for (std::size_t v = 0; v < fb.vars->size(); ++v) {
    const int ld = n.low_degree(v);
    if (ld <= 0) continue;
    fb.push_variable(v);
    shift.exp[v] = -ld;
    stripped = true;
  }
  if (stripped) n = n.mul_monomial(shift);
  n = normalize_primitive(n);
  if (n.is_constant()) return;
  if (fb.vars->size() == 2)
    split_weighted(n, fb);
  else
    fb.push(std::move(n));
}

void sort_factors(std::vector<LaurentPoly>& fs) {
  std::sort(fs.begin(), fs.end(), [](const LaurentPoly& a, const LaurentPoly& b) {
    const std::int64_t da = a.leading().first.total_degree();
    const std::int64_t db = b.leading().first.total_degree();
    if (da != db) return da < db;
    return a.render() < b.render();
  });
}

}  // namespace

RationalFunction determinant(std::vector<std::vector<RationalFunction>> m) {
  if (m.empty()) return RationalFunction::one(empty_vars());
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) fail(errc::invalid, "determinant needs a square matrix");
  const VarSetPtr fv = m[0][0].vars();
  bool flip = false;
  for (std::size_t c = 0; c < n; ++c) {
    const int p = pick_pivot(m, c, c);
    if (p < 0) return RationalFunction::zero(fv);
    if (static_cast<std::size_t>(p) != c) {
      std::swap(m[p], m[c]);
      flip = !flip;
    }
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i][c].is_zero()) continue;
      const RationalFunction f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] = m[i][j] - f * m[c][j];
    }
  }
  RationalFunction det = RationalFunction::one(fv);
  for (std::size_t i = 0; i < n; ++i) det = det * m[i][i];
  return flip ? -det : det;
}

std::vector<LaurentPoly> degeneracy_factors(const RationalFunction& f) {
  FactorBuilder fb{f.vars(), {}};
  collect_factors(f, fb);
  sort_factors(fb.out);
  return fb.out;
}

SolutionReport solve(const AnsatzSystem& system) {
  const std::size_t rows = system.matrix.size();
  const std::size_t cols = system.unknowns.size();
  if (rows == 0 || cols == 0) fail(errc::invalid, "cannot solve an empty system");
  if (system.rhs.size() != rows || system.samples.size() != rows)
    fail(errc::invalid, "system rows, right-hand side, and samples disagree");
  const VarSetPtr fv = system.matrix[0][0].vars();
  for (std::size_t r = 0; r < rows; ++r) {
    if (system.matrix[r].size() != cols) fail(errc::invalid, "ragged system matrix");
    for (const RationalFunction& e : system.matrix[r])
      if (!same_vars(e.vars(), fv)) fail(errc::invalid, "system entries mix variable sets");
    if (!same_vars(system.rhs[r].vars(), fv))
      fail(errc::invalid, "system entries mix variable sets");
  }

  std::vector<std::vector<RationalFunction>> a = system.matrix;
  std::vector<RationalFunction> b = system.rhs;
  std::vector<std::size_t> pivot_cols;
  std::vector<RationalFunction> pivot_values;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    const int p = pick_pivot(a, r, c);
    if (p < 0) continue;
    std::swap(a[p], a[r]);
    std::swap(b[p], b[r]);
    pivot_values.push_back(a[r][c]);
    const RationalFunction inv = a[r][c].inverse();
    for (std::size_t j = c; j < cols; ++j) a[r][j] = a[r][j] * inv;
    b[r] = b[r] * inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      const RationalFunction f = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] = a[i][j] - f * a[r][j];
      b[i] = b[i] - f * b[r];
    }
    pivot_cols.push_back(c);
    ++r;
  }

  SolutionReport report;
  report.rank = static_cast<int>(r);
  report.nullity = static_cast<int>(cols - r);

  bool homogeneous = true;
  for (const RationalFunction& e : system.rhs) homogeneous = homogeneous && e.is_zero();
  bool consistent = true;
  for (std::size_t i = r; i < rows; ++i) consistent = consistent && b[i].is_zero();

  const RationalFunction zero = RationalFunction::zero(fv);
  if (!homogeneous && consistent) {
    std::vector<RationalFunction> x(cols, zero);
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) x[pivot_cols[i]] = b[i];
    report.particular = std::move(x);
  }

  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivot_cols) is_pivot[c] = true;
  for (std::size_t fcol = 0; fcol < cols; ++fcol) {
    if (is_pivot[fcol]) continue;
    std::vector<RationalFunction> v(cols, zero);
    v[fcol] = RationalFunction::one(fv);
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = -a[i][fcol];
    report.nullspace.push_back(std::move(v));
  }
  if (report.nullspace.size() == 1) {
    std::vector<RationalFunction>& g = report.nullspace.front();
    for (std::size_t i = cols; i-- > 0;) {
      if (g[i].is_zero()) continue;
      const RationalFunction s = RationalFunction::constant(fv, Rational(-1)) / g[i];
      for (RationalFunction& e : g) e = e * s;
      break;
    }
  }

  if (rows == cols) report.determinant = determinant(system.matrix);

  FactorBuilder fb{fv, {}};
  if (report.determinant && !report.determinant->is_zero()) {
    collect_factors(*report.determinant, fb);
  } else {
    for (const RationalFunction& p : pivot_values) collect_factors(p, fb);
  }
  sort_factors(fb.out);
  report.parameter_conditions = std::move(fb.out);
  return report;
}

nlohmann::ordered_json SolutionReport::to_json() const {
  nlohmann::ordered_json j;
  j["rank"] = rank;
  j["nullity"] = nullity;
  if (determinant) j["determinant"] = determinant->render();
  if (particular) {
    nlohmann::ordered_json p = nlohmann::ordered_json::array();
    for (const RationalFunction& e : *particular) p.push_back(e.render());
    j["particular"] = std::move(p);
  }
  nlohmann::ordered_json ns = nlohmann::ordered_json::array();
  for (const std::vector<RationalFunction>& gen : nullspace) {
    nlohmann::ordered_json g = nlohmann::ordered_json::array();
    for (const RationalFunction& e : gen) g.push_back(e.render());
    ns.push_back(std::move(g));
  }
  j["nullspace"] = std::move(ns);
  nlohmann::ordered_json pc = nlohmann::ordered_json::array();
  for (const LaurentPoly& f : parameter_conditions) pc.push_back(f.render());
  j["parameter_conditions"] = std::move(pc);
  return j;
}

}  // namespace lucid
