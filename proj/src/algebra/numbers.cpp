#include "algebra/numbers.hpp"

#include <cctype>

namespace lucid {

Rational parse_rational(const std::string& text) {
  std::size_t pos = 0;
  auto parse_int = [&](const char* what) -> Integer {
    bool neg = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
      neg = text[pos] == '-';
      ++pos;
    }
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) fail(errc::parse, std::string("expected ") + what + " in rational '" + text + "'");
    Integer v(text.substr(start, pos - start));
    return neg ? Integer(-v) : v;
  };

  Integer num = parse_int("numerator");
  Integer den = 1;
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    den = parse_int("denominator");
    if (den == 0) fail(errc::parse, "zero denominator in rational '" + text + "'");
    if (den < 0) fail(errc::parse, "sign goes in front in rational '" + text + "'");
  }
  if (pos != text.size()) fail(errc::parse, "trailing characters in rational '" + text + "'");
  return Rational(num, den);
}

Rational rat_pow(const Rational& r, long long e) {
  if (e == 0) return Rational(1);
  if (r == 0) {
    if (e < 0) fail(errc::singular, "0 raised to a negative power");
    return Rational(0);
  }
  Rational base = r;
  if (e < 0) {
    // Keep the denominator positive; the two-argument constructor insists.
    Integer bn = rat_den(r), bd = rat_num(r);
    if (bd < 0) {
      bn = -bn;
      bd = -bd;
    }
    base = Rational(bn, bd);
  }
  unsigned long long n = e < 0 ? static_cast<unsigned long long>(-(e + 1)) + 1 : static_cast<unsigned long long>(e);
  Rational acc(1);
  while (n > 0) {
    if (n & 1) acc *= base;
    base *= base;
    n >>= 1;
  }
  return acc;
}

Rational rat_gcd(const Rational& a, const Rational& b) {
  using boost::multiprecision::gcd;
  using boost::multiprecision::lcm;
  if (a == 0) return b < 0 ? Rational(-b) : b;
  if (b == 0) return a < 0 ? Rational(-a) : a;
  return Rational(gcd(rat_num(a), rat_num(b)), lcm(rat_den(a), rat_den(b)));
}

}  // namespace lucid
