#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "model/catalog.hpp"
#include "model/parser.hpp"

using namespace lucid;

namespace {

RationalFunction rf(const std::string& s) { return parse_ratfunc(s, pq_vars()); }

errc thrown_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected a lucid::Error");
}

}  // namespace

TEST_CASE("index expressions render and evaluate") {
  IndexExpr e = IndexExpr::of_var("k", 2);
  e.constant = 1;
  CHECK(e.render() == "2k + 1");
  CHECK(IndexExpr::of_constant(-3).render() == "-3");
  CHECK(IndexExpr{}.render() == "0");

  IndexExpr d = IndexExpr::of_var("k") + (-IndexExpr::of_var("n"));
  CHECK(d.render() == "k - n");
  CHECK(d.evaluate({{"k", 7}, {"n", 3}}) == 4);
  CHECK(d.substituted("n", 3).render() == "k - 3");
  CHECK(d.substituted("n", 3).substituted("k", 3).is_zero());
  CHECK(thrown_code([&] { d.evaluate({{"k", 7}}); }) == errc::invalid);

  IndexExpr s = d.scaled(-2);
  CHECK(s.render() == "-2k + 2n");
  CHECK((d + (-d)).is_zero());
}

TEST_CASE("parser produces canonical terms") {
  IdentityTemplate gf9 =
      parse_identity("U[k+1]^2 - Q^3*U[k-2]^2 = (P^2 - Q)*(U[k]^2 - Q*U[k-1]^2)");
  REQUIRE(gf9.terms().size() == 4);
  CHECK(gf9.index_vars() == std::vector<std::string>{"k"});
  CHECK(gf9.canonical_text() ==
        "-Q^3*U[k - 2]^2 + (P^2*Q - Q^2)*U[k - 1]^2 - (P^2 - Q)*U[k]^2 + U[k + 1]^2");
  CHECK(gf9.terms()[0].coeff.value.render() == "-Q^3");
  CHECK(gf9.terms()[3].coeff.value.is_one());

  IdentityTemplate gf3 = parse_identity("U[2k+1] = U[k+1]^2 - Q*U[k]^2");
  CHECK(gf3.canonical_text() == "Q*U[k]^2 - U[k + 1]^2 + U[2k + 1]");

  // An equation and its moved-over form canonicalize identically.
  IdentityTemplate moved = parse_identity("U[2k+1] - U[k+1]^2 + Q*U[k]^2");
  CHECK(gf3.structurally_equal(moved));

  CHECK(parse_identity("U[k] = U[k]").is_zero());
  CHECK(parse_identity("2 = 2").is_zero());
  CHECK(parse_identity("0*U[k]").is_zero());
  CHECK(parse_identity("U[k]*U[k+1] - U[k+1]*U[k]").is_zero());

  // Constant-index factors fold into coefficients.
  IdentityTemplate folded = parse_identity("U[3]*U[k]");
  REQUIRE(folded.terms().size() == 1);
  CHECK(folded.terms()[0].coeff.value.render() == "P^2 - Q");
  CHECK(parse_identity("U[-3]").canonical_text() == "-(P^2 - Q)/Q^3");
  CHECK(parse_identity("V[0]").canonical_text() == "2");
  CHECK(parse_identity("V[1] - P").is_zero());

  // Repeated factors merge their exponents; 2k is juxtaposition.
  IdentityTemplate sq = parse_identity("U[k]*U[k]*U[2*k]");
  REQUIRE(sq.terms().size() == 1);
  REQUIRE(sq.terms()[0].factors.size() == 2);
  CHECK(sq.terms()[0].factors[0].exp == 2);
  CHECK(sq.terms()[0].factors[1].index.render() == "2k");

  // Like terms merge across the equation.
  IdentityTemplate merged = parse_identity("P*U[k]^2 + U[2k] = Q*U[k]^2");
  REQUIRE(merged.terms().size() == 2);
  CHECK(merged.terms()[0].coeff.value.render() == "P - Q");
}

TEST_CASE("q exponents canonicalize") {
  IdentityTemplate gf2 = parse_identity("U[k]^2 - U[k+n]*U[k-n] = Q^(k-n)*U[n]^2");
  CHECK(gf2.index_vars() == std::vector<std::string>{"k", "n"});
  bool found = false;
  for (const Term& t : gf2.terms())
    if (t.factors.size() == 1 && t.factors[0].exp == 2 &&
        t.factors[0].index == IndexExpr::of_var("n")) {
      found = true;
      CHECK(t.q_exp.coeffs == std::map<std::string, long long>{{"k", 1}, {"n", -1}});
      CHECK(t.q_exp.constant == 0);
    }
  CHECK(found);

  // A constant offset in the exponent folds into the coefficient.
  IdentityTemplate off = parse_identity("Q^(k - 1)*U[k]");
  REQUIRE(off.terms().size() == 1);
  CHECK(off.terms()[0].coeff.value.render() == "1/Q");
  CHECK(off.terms()[0].q_exp.render() == "k");

  // (Q^k)^2 scales the exponent; Q^0 disappears.
  IdentityTemplate sq = parse_identity("(Q^k)^2*U[k] - Q^(2k)*U[k]");
  CHECK(sq.is_zero());
  CHECK(parse_identity("Q^(0k)*U[j]").canonical_text() == "U[j]");

  // At Q = -1 exponents only matter mod 2.
  IdentityTemplate par = parse_identity("@params P = 1, Q = -1\nQ^(2k)*U[k] - U[k]");
  CHECK(par.is_zero());
  IdentityTemplate sign = parse_identity("@params P = 1, Q = -1\nQ^(k+1)*U[k]");
  REQUIRE(sign.terms().size() == 1);
  CHECK(sign.terms()[0].coeff.value.render() == "-1");
  CHECK(sign.terms()[0].q_exp.render() == "k");

  // At Q = 1 the exponent disappears entirely.
  IdentityTemplate one = parse_identity("@params P = 3, Q = 1\nQ^k*U[k] - U[k]");
  CHECK(one.is_zero());
}

TEST_CASE("parameter preambles specialize templates") {
  const std::map<std::string, RationalFunction> fib{
      {"P", RationalFunction::constant(pq_vars(), Rational(1))},
      {"Q", RationalFunction::constant(pq_vars(), Rational(-1))}};
  for (int n = 1; n <= 14; ++n) {
    const std::string fn = "F." + std::to_string(n);
    const std::string gfn = "GF." + std::to_string(n);
    IdentityTemplate specialized = catalog_get(gfn).substitute({}, fib);
    CHECK_MESSAGE(catalog_get(fn).structurally_equal(specialized), fn, " vs ", gfn);
  }

  IdentityTemplate qp2 = parse_identity("@params Q = P^2\nQ*U[k] - P^2*U[k]");
  CHECK(qp2.is_zero());

  // Binding Q to a non-constant is refused while a variable Q power remains.
  CHECK(thrown_code([&] {
          catalog_get("GF.2").substitute({}, {{"Q", RationalFunction::variable(pq_vars(), 0)}});
        }) == errc::unsupported);
  // After fixing n the exponent k - n is linear in k only; a constant Q works.
  IdentityTemplate cat1 = catalog_get("GF.2").substitute({{"n", 1}});
  CHECK(!cat1.is_zero());
  CHECK(thrown_code([&] { parse_identity("@params P = 1, Q = 0\nQ^k*U[k]"); }) == errc::invalid);
}

TEST_CASE("unknown coefficients stay linear and fold scales") {
  IdentityTemplate t = parse_identity("c1*U[k]^2 + c2*Q^k*U[k+1] - U[2k]");
  CHECK(t.has_unknowns());
  CHECK(t.unknown_names() == std::vector<std::string>{"c1", "c2"});

  IdentityTemplate folded = parse_identity("(P^2 - Q)*c1*U[k] + Q*c1*U[k]");
  REQUIRE(folded.terms().size() == 1);
  CHECK(!folded.terms()[0].coeff.known);
  CHECK(folded.terms()[0].coeff.name == "c1");
  CHECK(folded.terms()[0].coeff.value.render() == "P^2");

  CHECK(thrown_code([&] { t.evaluate({{"k", 1}}, Rational(1), Rational(-1)); }) == errc::invalid);
  CHECK(thrown_code([] { parse_identity("c1*c2*U[k]"); }) == errc::parse);
  CHECK(thrown_code([] { parse_identity("c1^2*U[k]"); }) == errc::parse);
  CHECK(thrown_code([] { parse_identity("U[k]/c1"); }) == errc::parse);

  // Unknowns with zero scale vanish; cancelling scales erase the term.
  CHECK(parse_identity("0*c1*U[k]").is_zero());
  CHECK(parse_identity("c1*U[k] - c1*U[k]").is_zero());

  // Binding an unknown turns its terms into known ones.
  IdentityTemplate bound = t.substitute(
      {}, {}, {{"c1", RationalFunction::constant(pq_vars(), Rational(2))}});
  CHECK(bound.unknown_names() == std::vector<std::string>{"c2"});
  CHECK(thrown_code([&] {
          t.substitute({}, {}, {{"c9", RationalFunction::one(pq_vars())}});
        }) == errc::invalid);

  // a0, a1, p0, p1 are ordinary unknowns without an @horadam preamble.
  IdentityTemplate ans = parse_identity("a0*U[k]^3 + a1*U[k]^2*U[k+1] - U[3k]");
  CHECK(ans.unknown_names() == std::vector<std::string>{"a0", "a1"});
}

TEST_CASE("division by coefficient expressions") {
  IdentityTemplate gf5 = parse_identity("U[3k] = U[k+1]^3/P + (U[3] - P^2)*U[k]^3 + Q^3*U[k-1]^3/P");
  REQUIRE(gf5.terms().size() == 4);
  // U[3] - P^2 folds to -Q.
  for (const Term& t : gf5.terms())
    if (t.factors.size() == 1 && t.factors[0].index == IndexExpr::of_var("k") && t.factors[0].exp == 3)
      CHECK(t.coeff.value.render() == "Q");
  CHECK(parse_identity("U[k]/2 - 1/2*U[k]").is_zero());
  CHECK(parse_identity("U[k]/Q^2 - Q^-2*U[k]").is_zero());
  CHECK(thrown_code([] { parse_identity("U[k]/0"); }) == errc::parse);
  CHECK(thrown_code([] { parse_identity("U[k]/(P - P)"); }) == errc::parse);
}

TEST_CASE("parse errors carry positions") {
  CHECK(thrown_code([] { parse_identity("U[k"); }) == errc::parse);
  CHECK(thrown_code([] { parse_identity("U[k])"); }) == errc::parse);
  CHECK(thrown_code([] { parse_identity("k*U[k]"); }) == errc::parse);
  CHECK(thrown_code([] { parse_identity("U"); }) == errc::parse);
  CHECK(thrown_code([] { parse_identity("P^k*U[k]"); }) == errc::parse);
  CHECK(thrown_code([] { parse_identity("U[k]^-2"); }) == errc::parse);
  CHECK(thrown_code([] { parse_identity("(U[k] + 1)^-1"); }) == errc::parse);
  CHECK(thrown_code([] { parse_identity("U[k] $"); }) == errc::parse);
  CHECK(thrown_code([] { parse_identity("@wat x = 1\nU[k]"); }) == errc::parse);
  CHECK(thrown_code([] { parse_identity("U[Q]"); }) == errc::parse);
  try {
    parse_identity("U[k] +\n+ U[k]");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("horadam preamble rules") {
  IdentityTemplate rec = parse_identity("@horadam a0 = 2, a1 = 1\nW[k+2] - p0*W[k+1] - p1*W[k]");
  CHECK(rec.is_horadam());
  CHECK(same_vars(rec.coeff_vars(), horadam_vars()));
  for (long long k = -3; k <= 5; ++k)
    CHECK(rec.evaluate({{"k", k}}, Rational(3), Rational(5)) == 0);

  // Constant-index W factors fold through the seeds.
  IdentityTemplate fold = parse_identity("@horadam a0 = 1, a1 = 0\nW[3]*W[k] - W[k]");
  REQUIRE(fold.terms().size() == 1);
  CHECK(fold.terms()[0].coeff.value.render() == "p0*p1 - 1");

  // Seed atoms are their values.
  CHECK(parse_identity("@horadam a0 = 3, a1 = -1/2\n(a0 + 2*a1)*W[k] - 2*W[k]").is_zero());

  CHECK(thrown_code([] { parse_identity("W[k]"); }) == errc::parse);
  CHECK(thrown_code([] { parse_identity("@horadam a0 = 1, a1 = 0\nU[k]"); }) == errc::parse);
  CHECK(thrown_code([] { parse_identity("@horadam a0 = 1, a1 = 0\nQ*W[k]"); }) == errc::parse);
  CHECK(thrown_code([] { parse_identity("@horadam a0 = 1\nW[k]"); }) == errc::parse);
  CHECK(thrown_code([] { parse_identity("@horadam a0 = 1, a1 = 0\nQ^k*W[k]"); }) == errc::parse);
  CHECK(thrown_code([] {
          parse_identity("@params P = 1, Q = -1\n@horadam a0 = 1, a1 = 0\nW[k]");
        }) == errc::parse);

  // Horadam substitution specializes p0, p1.
  IdentityTemplate fib = rec.substitute(
      {}, {{"p0", RationalFunction::one(horadam_vars())},
           {"p1", RationalFunction::one(horadam_vars())}});
  for (long long k = 0; k <= 6; ++k)
    CHECK(fib.evaluate({{"k", k}}, Rational(9), Rational(9)) == 0);
}

TEST_CASE("templates evaluate exactly") {
  IdentityTemplate gf3 = catalog_get("GF.3");
  for (long long k = -4; k <= 4; ++k) {
    CHECK(gf3.evaluate({{"k", k}}, Rational(3), Rational(2)) == 0);
    CHECK(gf3.evaluate({{"k", k}}, Rational(1, 2), Rational(-5, 3)) == 0);
  }
  // Specialized parameters override the arguments.
  IdentityTemplate f2 = catalog_get("F.2");
  CHECK(f2.evaluate({{"k", 7}, {"n", 3}}, Rational(7), Rational(5)) == 0);
  CHECK(catalog_get("ADD").evaluate({{"n", 4}, {"m", -2}}, Rational(3), Rational(2)) == 0);

  IdentityTemplate bad = parse_identity("U[2k+1] - U[k+1]^2 + Q*U[k]^2 + U[k]");
  CHECK(bad.evaluate({{"k", 2}}, Rational(1), Rational(-1)) == 1);

  // Substituting every index away folds the whole template.
  CHECK(catalog_get("GF.3").substitute({{"k", 2}}).is_zero());
}

TEST_CASE("catalog parses, lists, and round-trips") {
  const std::vector<std::string>& names = catalog_names();
  CHECK(names.size() == 39);
  CHECK(catalog_has("GF.15"));
  CHECK(catalog_has("CAT.6"));
  CHECK(!catalog_has("GF.16"));
  CHECK(thrown_code([] { catalog_get("nope"); }) == errc::unknown_name);

  for (const std::string& name : names) {
    const IdentityTemplate& t = catalog_get(name);
    CHECK_MESSAGE(!t.is_zero(), name);

    // Canonical text reparses to the same template.
    IdentityTemplate re = parse_identity(t.canonical_text(), name);
    CHECK_MESSAGE(t.structurally_equal(re), name, ": ", t.canonical_text());

    // JSON round-trips and the serialized form is a fixpoint.
    std::string dumped = t.to_json().dump();
    IdentityTemplate back = IdentityTemplate::from_json(nlohmann::json::parse(dumped));
    CHECK_MESSAGE(t.structurally_equal(back), name);
    CHECK_MESSAGE(back.to_json().dump() == dumped, name);
  }

  CHECK(catalog_get("CAT.3").structurally_equal(catalog_get("GF.2").substitute({{"n", 3}})));
  CHECK(catalog_get("GF.4").render_text() == "U[2k] = U[k]*(2*U[k+1] - P*U[k])");
}

TEST_CASE("catalog identities hold numerically") {
  // Spot checks over the whole catalog at fixed parameters and small indices.
  const Rational P(3), Q(2);
  for (const std::string& name : catalog_names()) {
    const IdentityTemplate& t = catalog_get(name);
    std::map<std::string, long long> ix;
    long long v = 2;
    for (const std::string& var : t.index_vars()) ix[var] = v++;  // 2, 3, 4, ...
    CHECK_MESSAGE(t.evaluate(ix, P, Q) == 0, name);
  }
}

TEST_CASE("index substitution specializes templates") {
  CHECK(catalog_get("GF.13").substitute({{"m", 1}, {"l", 1}}).is_zero());
  IdentityTemplate gf13_12 = catalog_get("GF.13").substitute({{"m", 2}, {"l", 1}});
  CHECK(gf13_12.index_vars() == std::vector<std::string>{"k"});
  for (long long k = -3; k <= 3; ++k)
    CHECK(gf13_12.evaluate({{"k", k}}, Rational(5, 2), Rational(-7, 3)) == 0);
  CHECK(thrown_code([] { catalog_get("GF.3").substitute({{"z", 1}}); }) == errc::invalid);
}

TEST_CASE("json has the documented shape") {
  std::string dumped = catalog_get("GF.3").to_json().dump();
  CHECK(dumped ==
        "{\"name\":\"GF.3\",\"index_vars\":[\"k\"],\"terms\":["
        "{\"coeff\":{\"kind\":\"known\",\"value\":\"Q\"},\"factors\":["
        "{\"kind\":\"U\",\"index\":{\"coeffs\":{\"k\":1},\"const\":0},\"exp\":2}]},"
        "{\"coeff\":{\"kind\":\"known\",\"value\":\"-1\"},\"factors\":["
        "{\"kind\":\"U\",\"index\":{\"coeffs\":{\"k\":1},\"const\":1},\"exp\":2}]},"
        "{\"coeff\":{\"kind\":\"known\",\"value\":\"1\"},\"factors\":["
        "{\"kind\":\"U\",\"index\":{\"coeffs\":{\"k\":2},\"const\":1},\"exp\":1}]}]}");

  // Unknowns serialize name and non-unit scale.
  IdentityTemplate t = parse_identity("-c1*U[k]");
  nlohmann::json j = nlohmann::json::parse(t.to_json().dump());
  CHECK(j["terms"][0]["coeff"]["kind"] == "unknown");
  CHECK(j["terms"][0]["coeff"]["name"] == "c1");
  CHECK(j["terms"][0]["coeff"]["scale"] == "-1");

  // Fibonacci specializations carry their parameter bindings.
  nlohmann::json f4 = nlohmann::json::parse(catalog_get("F.4").to_json().dump());
  CHECK(f4["params"]["P"] == "1");
  CHECK(f4["params"]["Q"] == "-1");

  CHECK(thrown_code([] { IdentityTemplate::from_json(nlohmann::json::parse("{}")); }) ==
        errc::parse);
  CHECK(thrown_code([] {
          IdentityTemplate::from_json(nlohmann::json::parse(
              R"({"index_vars":[],"terms":[{"coeff":{"kind":"known","value":"P"},)"
              R"("factors":[{"kind":"U","index":{"coeffs":{"k":1},"const":0},"exp":1}]}]})"));
        }) == errc::invalid);
}

TEST_CASE("coefficient expressions parse standalone") {
  CHECK(rf("P^-2*Q").render() == "Q/P^2");
  CHECK(rf("(P^2 - Q)/Q^3").render() == "(P^2 - Q)/Q^3");
  CHECK(rf("-3/4") == RationalFunction::constant(pq_vars(), Rational(-3, 4)));
  CHECK(rf("2*P^2/Q^4").render() == "2*P^2/Q^4");
  CHECK(rf("P - P").is_zero());
  CHECK(parse_ratfunc("alpha - abar", binet_vars()).render() == "alpha - abar");
  CHECK(thrown_code([] { rf("U[k]"); }) == errc::parse);
  CHECK(thrown_code([] { rf("c1"); }) == errc::parse);
  CHECK(thrown_code([] { rf("Q^k"); }) == errc::parse);
  CHECK(thrown_code([] { rf("1/(P - P)"); }) == errc::parse);
}
