#include "lucas/lucas.hpp"

#include <mutex>
#include <vector>

namespace lucid {

namespace {

constexpr long long kSymbolicIndexCap = 1000;

std::mutex g_cache_mutex;
std::vector<LaurentPoly> g_u_cache;  // g_u_cache[k] = U_k
std::vector<LaurentPoly> g_v_cache;  // g_v_cache[k] = V_k

// Extends cache up to index k inclusive. Caller holds the lock.
void extend_cache(std::vector<LaurentPoly>& cache, long long k, bool is_v) {
  if (cache.empty()) {
    LaurentPoly p = LaurentPoly::variable(pq_vars(), 0);
    if (is_v) {
      cache.push_back(LaurentPoly::constant(pq_vars(), Rational(2)));
      cache.push_back(p);
    } else {
      cache.push_back(LaurentPoly(pq_vars()));
      cache.push_back(LaurentPoly::one(pq_vars()));
    }
  }
  LaurentPoly p = LaurentPoly::variable(pq_vars(), 0);
  LaurentPoly q = LaurentPoly::variable(pq_vars(), 1);
  while (static_cast<long long>(cache.size()) <= k) {
    std::size_t n = cache.size();
    cache.push_back(p * cache[n - 1] - q * cache[n - 2]);
  }
}

LucasPair u_pair_iterative(long long k, const Rational& P, const Rational& Q) {
  Rational a = 0, b = 1;
  for (long long i = 0; i < k; ++i) {
    Rational next = P * b - Q * a;
    a = b;
    b = next;
  }
  return {a, b};
}

LucasPair u_pair_doubling(long long k, const Rational& P, const Rational& Q) {
  if (k == 0) return {0, 1};
  int top = 62;
  while (!((k >> top) & 1)) --top;
  // Invariant walking the bits of k from high to low: (a, b) = (U_m, U_{m+1})
  // where m is the prefix of k consumed so far.
  Rational a = 0, b = 1;
  for (int bit = top; bit >= 0; --bit) {
    Rational a2 = a * (b * 2 - P * a);  // U_{2m}
    Rational b2 = b * b - Q * a * a;    // U_{2m+1}
    if ((k >> bit) & 1) {
      a = b2;
      b = P * b2 - Q * a2;
    } else {
      a = a2;
      b = b2;
    }
  }
  return {a, b};
}

LucasPair u_pair_matrix(long long k, const Rational& P, const Rational& Q) {
  Mat2 m = mat2_pow(lucas_matrix(P, Q), k);
  return {m.c, m.a};
}

}  // namespace

SeqKind seq_kind_from_name(const std::string& name) {
  if (name == "U") return SeqKind::U;
  if (name == "V") return SeqKind::V;
  if (name == "W") return SeqKind::W;
  fail(errc::parse, "unknown sequence kind '" + name + "' (expected U, V, or W)");
}

const char* seq_kind_name(SeqKind kind) {
  switch (kind) {
    case SeqKind::U: return "U";
    case SeqKind::V: return "V";
    case SeqKind::W: return "W";
  }
  fail(errc::internal, "bad SeqKind");
}

EvalMethod eval_method_from_name(const std::string& name) {
  if (name == "doubling") return EvalMethod::doubling;
  if (name == "iterative") return EvalMethod::iterative;
  if (name == "matrix") return EvalMethod::matrix;
  fail(errc::parse, "unknown method '" + name + "' (expected doubling, iterative, or matrix)");
}

LaurentPoly lucas_symbolic(SeqKind kind, long long k) {
  if (kind == SeqKind::W)
    fail(errc::invalid, "W has no closed polynomial form without seed parameters");
  long long mag = k < 0 ? -k : k;
  if (mag > kSymbolicIndexCap)
    fail(errc::unsupported, "symbolic index " + std::to_string(k) + " exceeds the cap of " +
                                std::to_string(kSymbolicIndexCap));

  LaurentPoly body(pq_vars());
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto& cache = kind == SeqKind::U ? g_u_cache : g_v_cache;
    extend_cache(cache, mag, kind == SeqKind::V);
    body = cache[mag];
  }
  if (k >= 0) return body;
  // U(-k) = -U(k)/Q^k, V(-k) = V(k)/Q^k.
  Monomial shift = Monomial::unit(2);
  shift.exp[1] = static_cast<std::int32_t>(-mag);
  return body.mul_monomial(shift, Rational(kind == SeqKind::U ? -1 : 1));
}

LucasPair lucas_u_pair(long long k, const Rational& P, const Rational& Q, EvalMethod method) {
  bool negative = k < 0;
  long long mag = negative ? -k : k;
  if (negative && Q == 0)
    fail(errc::singular, "negative index " + std::to_string(k) + " needs Q != 0");

  // For k = -j reflect a pair at j - 1: U(-j) = -U(j)/Q^j.
  long long top = negative ? mag - 1 : mag;
  LucasPair base;
  switch (method) {
    case EvalMethod::doubling: base = u_pair_doubling(top, P, Q); break;
    case EvalMethod::iterative: base = u_pair_iterative(top, P, Q); break;
    case EvalMethod::matrix: base = u_pair_matrix(top, P, Q); break;
    default: fail(errc::internal, "bad EvalMethod");
  }
  if (!negative) return base;
  Rational qj = rat_pow(Q, mag);
  return {-base.u_next / qj, -base.u * Q / qj};
}

Rational v_from_u(const LucasPair& pair, const Rational& P) {
  return pair.u_next * 2 - P * pair.u;
}

Rational lucas_numeric(SeqKind kind, long long k, const Rational& P, const Rational& Q,
                       EvalMethod method) {
  if (kind == SeqKind::W) fail(errc::invalid, "W needs seed parameters, use horadam_numeric");
  LucasPair pair = lucas_u_pair(k, P, Q, method);
  return kind == SeqKind::U ? pair.u : v_from_u(pair, P);
}

Rational horadam_numeric(long long k, const Rational& a0, const Rational& a1, const Rational& p0,
                         const Rational& p1, EvalMethod method) {
  if (k == 0) return a0;
  if (k == 1) return a1;
  if (k < 0 && p1 == 0)
    fail(errc::singular, "negative Horadam index " + std::to_string(k) + " needs p1 != 0");
  LucasPair pair = lucas_u_pair(k - 1, p0, -p1, method);
  return a1 * pair.u_next + a0 * p1 * pair.u;
}

RationalFunction horadam_symbolic(long long k, const Rational& a0, const Rational& a1,
                                  const RationalFunction& p0, const RationalFunction& p1) {
  VarSetPtr vars = p0.vars();
  if (!same_vars(vars, p1.vars()))
    fail(errc::invalid, "p0 and p1 use different variable sets");
  if (k == 0) return RationalFunction::constant(vars, a0);
  if (k == 1) return RationalFunction::constant(vars, a1);
  if (k < 0 && p1.is_zero())
    fail(errc::singular, "negative Horadam index " + std::to_string(k) + " needs p1 != 0");
  std::vector<RationalFunction> pq{p0, -p1};
  RationalFunction uk = substitute(lucas_symbolic(SeqKind::U, k), pq);
  RationalFunction uk1 = substitute(lucas_symbolic(SeqKind::U, k - 1), pq);
  return uk.scaled(a1) + uk1.scaled(a0) * p1;
}

Mat2 mat2_identity() { return {1, 0, 0, 1}; }

Mat2 mat2_mul(const Mat2& x, const Mat2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
          x.c * y.b + x.d * y.d};
}

Rational mat2_det(const Mat2& m) { return m.a * m.d - m.b * m.c; }

Rational mat2_trace(const Mat2& m) { return m.a + m.d; }

Mat2 mat2_pow(Mat2 base, long long e) {
  if (e < 0) {
    Rational det = mat2_det(base);
    if (det == 0) fail(errc::singular, "negative power of a singular matrix");
    base = {base.d / det, -base.b / det, -base.c / det, base.a / det};
    e = -e;
  }
  Mat2 acc = mat2_identity();
  while (e > 0) {
    if (e & 1) acc = mat2_mul(acc, base);
    base = mat2_mul(base, base);
    e >>= 1;
  }
  return acc;
}

Mat2 lucas_matrix(const Rational& P, const Rational& Q) { return {P, -Q, 1, 0}; }

}  // namespace lucid
