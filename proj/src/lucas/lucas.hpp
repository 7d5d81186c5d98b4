#pragma once

#include <string>

#include "algebra/poly.hpp"
#include "algebra/ratfunc.hpp"

namespace lucid {

// The two fundamental sequences attached to a recurrence
//   f(k+2) = P*f(k+1) - Q*f(k),
// U with (0, 1) and V with (2, P), plus the general-seed Horadam form W.
enum class SeqKind { U, V, W };

enum class EvalMethod { doubling, iterative, matrix };

SeqKind seq_kind_from_name(const std::string& name);
const char* seq_kind_name(SeqKind kind);
EvalMethod eval_method_from_name(const std::string& name);

// U_k or V_k as a polynomial in P and Q. Negative indices reflect through
// U(-k) = -U(k)/Q^k and V(-k) = V(k)/Q^k, so the result is Laurent in Q.
// Results are memoized; |k| is capped to keep runaway requests in check.
LaurentPoly lucas_symbolic(SeqKind kind, long long k);

// (U_k, U_{k+1}) at concrete parameters. Negative k needs Q != 0.
struct LucasPair {
  Rational u, u_next;
};
LucasPair lucas_u_pair(long long k, const Rational& P, const Rational& Q,
                       EvalMethod method = EvalMethod::doubling);

// V_k recovered from a pair at the same k.
Rational v_from_u(const LucasPair& pair, const Rational& P);

Rational lucas_numeric(SeqKind kind, long long k, const Rational& P, const Rational& Q,
                       EvalMethod method = EvalMethod::doubling);

// Horadam value W_k with seeds W_0 = a0, W_1 = a1 and recurrence
//   W(k+1) = p0*W(k) + p1*W(k-1),
// evaluated through W_k = a1*U_k + a0*p1*U_{k-1} over the pair (p0, -p1).
// Negative k needs p1 != 0.
Rational horadam_numeric(long long k, const Rational& a0, const Rational& a1, const Rational& p0,
                         const Rational& p1, EvalMethod method = EvalMethod::doubling);

// Same value with p0, p1 left symbolic (or any rational functions).
RationalFunction horadam_symbolic(long long k, const Rational& a0, const Rational& a1,
                                  const RationalFunction& p0, const RationalFunction& p1);

// Exact 2x2 matrices, row major. The companion matrix of the recurrence has
// powers whose entries are U values, which makes an independent cross-check
// for everything above.
struct Mat2 {
  Rational a, b, c, d;

  bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
};

Mat2 mat2_identity();
Mat2 mat2_mul(const Mat2& x, const Mat2& y);
Rational mat2_det(const Mat2& m);
Rational mat2_trace(const Mat2& m);
// e < 0 inverts first and needs det != 0.
Mat2 mat2_pow(Mat2 base, long long e);

// [[P, -Q], [1, 0]]; its k-th power is [[U_{k+1}, -Q*U_k], [U_k, -Q*U_{k-1}]].
Mat2 lucas_matrix(const Rational& P, const Rational& Q);

}  // namespace lucid
