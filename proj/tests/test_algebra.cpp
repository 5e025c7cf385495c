#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "sgq/algebra.hpp"

using namespace sgq;

namespace {

AlgebraPtr poly_forms() {
  // Polynomial forms on the affine line: x even, dx odd of degree 1.
  return AlgebraData::create({{"x", 0, 0, false, 1}, {"dx", 1, 1, false, 1}});
}

AlgebraPtr sl2_functions() {
  RelationSpec rel;
  rel.lhs = {{"a", 1}, {"d", 1}};
  rel.rhs = {{1, {}}, {1, {{"b", 1}, {"c", 1}}}};
  return AlgebraData::create(
      {{"a", 0}, {"b", 0}, {"c", 0}, {"d", 0}}, {rel}, "O(SL2)");
}

Element random_element(const AlgebraPtr& alg, std::mt19937_64& rng,
                       int max_terms = 4, int max_exp = 3) {
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<int> expd(0, max_exp);
  Element out = Element::zero(alg);
  int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    Element mono = Element::constant(alg, coef(rng));
    for (int g = 0; g < alg->num_generators(); ++g) {
      const auto& spec = alg->generator(g);
      int e = expd(rng);
      if (parity_of_degree(spec.degree) == 1) e = e % 2;
      if (spec.invertible && coef(rng) < 0) e = -e;
      if (e != 0) mono = mono * Element::gen(alg, spec.name, e);
    }
    out += mono;
  }
  return out;
}

}  // namespace

TEST_CASE("generator validation") {
  CHECK_THROWS_AS(AlgebraData::create({{"x", 0}, {"x", 1}}), DuplicateGenerator);
  CHECK_THROWS_AS(AlgebraData::create({{"t", 1, 0, true}}), OddInvertible);
  auto alg = poly_forms();
  CHECK_THROWS_AS(Element::gen(alg, "nope"), UnknownGenerator);
  CHECK_THROWS_AS(Element::gen(alg, "x", -1), NegativePower);
}

TEST_CASE("relation validation") {
  RelationSpec bad_order;
  bad_order.lhs = {{"a", 1}};
  bad_order.rhs = {{1, {{"a", 1}, {"b", 1}}}};
  CHECK_THROWS_AS(AlgebraData::create({{"a", 0}, {"b", 0}}, {bad_order}),
                  BadRelation);

  RelationSpec inhomogeneous;
  inhomogeneous.lhs = {{"a", 1}, {"b", 1}};
  inhomogeneous.rhs = {{1, {{"a", 1}}}};
  CHECK_THROWS_AS(
      AlgebraData::create({{"a", 2, 0}, {"b", 2, 0}}, {inhomogeneous}),
      BadRelation);

  RelationSpec r1, r2;
  r1.lhs = {{"a", 1}, {"b", 1}};
  r1.rhs = {{1, {}}};
  r2.lhs = {{"b", 1}, {"c", 1}};
  r2.rhs = {{1, {}}};
  CHECK_THROWS_AS(AlgebraData::create({{"a", 0}, {"b", 0}, {"c", 0}}, {r1, r2}),
                  BadRelation);

  RelationSpec odd_lhs;
  odd_lhs.lhs = {{"u", 1}, {"v", 1}};
  odd_lhs.rhs = {{1, {}}};
  CHECK_THROWS_AS(AlgebraData::create({{"u", 1}, {"v", -1}}, {odd_lhs}),
                  BadRelation);
}

TEST_CASE("graded commutativity with Koszul signs") {
  auto alg = AlgebraData::create(
      {{"x", 0}, {"u", 1}, {"v", 1}, {"w", 3}, {"y", 2}});
  std::mt19937_64 rng(20240811);
  for (int trial = 0; trial < 200; ++trial) {
    Element a = random_element(alg, rng, 1);
    Element b = random_element(alg, rng, 1);
    auto da = a.bidegree();
    auto db = b.bidegree();
    REQUIRE(da.has_value());
    REQUIRE(db.has_value());
    bool both_odd =
        parity_of_degree(da->first) == 1 && parity_of_degree(db->first) == 1;
    int sign = both_odd ? -1 : 1;
    CHECK(a * b == b * a * Rational(sign));
  }
}

TEST_CASE("odd generators square to zero") {
  auto alg = poly_forms();
  Element dx = Element::gen(alg, "dx");
  CHECK((dx * dx).is_zero());
  CHECK(Element::gen(alg, "dx", 2).is_zero());
  Element mixed = Element::gen(alg, "x") + dx;
  Element x = Element::gen(alg, "x");
  CHECK(mixed * mixed == x.pow(2) + x * dx * Rational(2));
}

TEST_CASE("associativity and distributivity on random elements") {
  auto alg = AlgebraData::create({{"x", 0}, {"y", 0, 0, true}, {"u", 1}, {"v", 1}});
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    Element a = random_element(alg, rng);
    Element b = random_element(alg, rng);
    Element c = random_element(alg, rng);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("laurent generators invert") {
  auto alg = AlgebraData::create({{"x", 0, 0, true}, {"dx", 1, 1}});
  Element x = Element::gen(alg, "x");
  Element one = Element::constant(alg, 1);
  CHECK(x * Element::gen(alg, "x", -1) == one);
  CHECK(x.pow(-3) * x.pow(3) == one);
  Element u = Element::monomial(alg, {{"x", 2}}, Rational(3));
  CHECK(u * u.inverse() == one);
  CHECK_THROWS_AS((one + x).inverse(), NotInvertible);
  auto poly = poly_forms();
  CHECK_THROWS_AS(Element::gen(poly, "x").inverse(), NotInvertible);
}

TEST_CASE("sl2 rewrite rule") {
  auto alg = sl2_functions();
  Element a = Element::gen(alg, "a");
  Element b = Element::gen(alg, "b");
  Element c = Element::gen(alg, "c");
  Element d = Element::gen(alg, "d");
  Element one = Element::constant(alg, 1);

  CHECK(a * d == one + b * c);
  CHECK(a * d - b * c == one);
  CHECK((a * d).pow(2) == (one + b * c).pow(2));

  // The defining relation multiplies to zero against anything.
  std::mt19937_64 rng(424242);
  Element rel = a * d - b * c - one;
  CHECK(rel.is_zero());
  for (int trial = 0; trial < 50; ++trial) {
    Element p = random_element(alg, rng);
    Element q = (a * d) * p - (one + b * c) * p;
    CHECK(q.is_zero());
    Element squared = p * p;
    for (const auto& [m, coefficient] : squared.terms()) {
      CHECK(alg->is_normal_form(m));
    }
  }
}

TEST_CASE("degree and weight bookkeeping") {
  auto alg = poly_forms();
  Element x = Element::gen(alg, "x");
  Element dx = Element::gen(alg, "dx");
  Element form = x.pow(2) * dx;
  auto dw = form.bidegree();
  REQUIRE(dw.has_value());
  CHECK(dw->first == 1);
  CHECK(dw->second == 1);
  CHECK_FALSE((x + form).bidegree().has_value());
  CHECK_THROWS_AS((x + form).degree(), NonHomogeneous);
  CHECK(Element::zero(alg).bidegree().has_value());
}

TEST_CASE("element printing is deterministic") {
  auto alg = sl2_functions();
  Element e = Element::monomial(alg, {{"a", 1}, {"b", 2}}, Rational(-1) / 2) +
              Element::constant(alg, 3);
  CHECK(e.str() == "3 * 1 + -1/2 * a b^2");
  CHECK(Element::zero(alg).str() == "0");
  auto laurent = AlgebraData::create({{"x", 0, 0, true}});
  CHECK(Element::gen(laurent, "x", -2).str() == "1 * x^-2");
}

TEST_CASE("size uses per-generator weights") {
  auto alg = AlgebraData::create(
      {{"x", 0, 0, false, 1}, {"p", -1, 0, false, 2}, {"dx", 1, 1, false, 1}});
  Element e = Element::monomial(alg, {{"x", 3}, {"p", 1}, {"dx", 1}});
  CHECK(e.max_size() == 6);
  auto laurent = AlgebraData::create({{"x", 0, 0, true}});
  CHECK(Element::gen(laurent, "x", -4).max_size() == 4);
}

TEST_CASE("derivation satisfies the leibniz rule") {
  auto alg = poly_forms();
  Derivation d(alg, "d", 1, 1,
               {{"x", Element::gen(alg, "dx")}, {"dx", Element::zero(alg)}});
  Element x = Element::gen(alg, "x");
  Element dx = Element::gen(alg, "dx");
  CHECK(d(x.pow(5)) == x.pow(4) * dx * Rational(5));
  CHECK(d(d(x.pow(7))).is_zero());

  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 100; ++trial) {
    Element u = random_element(alg, rng, 1);
    Element v = random_element(alg, rng, 1);
    auto du = u.bidegree();
    REQUIRE(du.has_value());
    int sign = parity_of_degree(du->first) ? -1 : 1;
    CHECK(d(u * v) == d(u) * v + u * d(v) * Rational(sign));
  }
}

TEST_CASE("derivation power rule on laurent generators") {
  auto alg = AlgebraData::create({{"x", 0, 0, true}, {"dx", 1, 1}});
  Derivation d(alg, "d", 1, 1,
               {{"x", Element::gen(alg, "dx")}, {"dx", Element::zero(alg)}});
  Element x = Element::gen(alg, "x");
  Element dx = Element::gen(alg, "dx");
  CHECK(d(x.pow(-1)) == -(x.pow(-2) * dx));
  CHECK(d(x * x.pow(-1)).is_zero());
  CHECK(d(x.pow(-3)) == x.pow(-4) * dx * Rational(-3));
}

TEST_CASE("derivations must respect relations") {
  RelationSpec rel;
  rel.lhs = {{"u", 1}, {"v", 1}};
  rel.rhs = {{1, {}}};
  auto alg = AlgebraData::create({{"u", 0}, {"v", 0}}, {rel});
  Element u = Element::gen(alg, "u");
  Element v = Element::gen(alg, "v");

  CHECK_THROWS_AS(
      Derivation(alg, "bad", 0, 0,
                 {{"u", Element::constant(alg, 1)}, {"v", Element::zero(alg)}}),
      IllDefinedOnQuotient);

  // The scaling action u -> u, v -> -v kills the relation uv - 1.
  Derivation euler(alg, "euler", 0, 0, {{"u", u}, {"v", -v}});
  CHECK(euler(u * v).is_zero());
  CHECK(euler(u.pow(3)) == u.pow(3) * Rational(3));
}

TEST_CASE("derivation degree checks") {
  auto alg = poly_forms();
  CHECK_THROWS_AS(
      Derivation(alg, "bad", 1, 1, {{"x", Element::gen(alg, "x")}}),
      DegreeMismatch);
}

TEST_CASE("commutator of exterior derivative and contraction") {
  auto alg = poly_forms();
  Derivation d(alg, "d", 1, 1,
               {{"x", Element::gen(alg, "dx")}, {"dx", Element::zero(alg)}});
  Derivation iota(alg, "iota", -1, -1,
                  {{"x", Element::zero(alg)}, {"dx", Element::constant(alg, 1)}});
  Derivation lie = Derivation::commutator(d, iota, "lie");
  CHECK(lie.degree() == 0);
  CHECK(lie(Element::gen(alg, "x")) == Element::constant(alg, 1));
  CHECK(lie(Element::gen(alg, "dx")) == Element::gen(alg, "dx") * Rational(0));
  // Lie derivative of x^n dx along the unit field is n x^{n-1} dx + 0.
  Element form = Element::gen(alg, "x", 3) * Element::gen(alg, "dx");
  CHECK(lie(form) == Element::gen(alg, "x", 2) * Element::gen(alg, "dx") * Rational(3) +
                         Element::gen(alg, "x", 3) * Element::zero(alg));

  Derivation dd = Derivation::commutator(d, d, "dd");
  CHECK(dd(Element::gen(alg, "x", 9)).is_zero());
}

TEST_CASE("algebra maps preserve relations and grading") {
  auto alg = sl2_functions();
  std::map<std::string, Element> swap_vals{
      {"a", Element::gen(alg, "d")},
      {"b", -Element::gen(alg, "b")},
      {"c", -Element::gen(alg, "c")},
      {"d", Element::gen(alg, "a")}};
  AlgebraMap sigma(alg, alg, "inverse", swap_vals);
  Element a = Element::gen(alg, "a");
  Element d = Element::gen(alg, "d");
  CHECK(sigma(a * d) == a * d);

  std::mt19937_64 rng(99);
  AlgebraMap identity = AlgebraMap::compose(sigma, sigma, "id");
  for (int trial = 0; trial < 30; ++trial) {
    Element p = random_element(alg, rng);
    CHECK(identity(p) == p);
    CHECK(sigma(p * p) == sigma(p) * sigma(p));
  }

  std::map<std::string, Element> bad_vals{
      {"a", Element::gen(alg, "a")},
      {"b", Element::zero(alg)},
      {"c", Element::zero(alg)},
      {"d", Element::zero(alg)}};
  CHECK_THROWS_AS(AlgebraMap(alg, alg, "bad", bad_vals), MapNotWellDefined);
}

TEST_CASE("algebra maps through invertible images") {
  auto src = AlgebraData::create({{"y", 0, 0, true}});
  auto dst = AlgebraData::create({{"x", 0, 0, true}});
  AlgebraMap phi(src, dst, "square",
                 {{"y", Element::gen(dst, "x", 2)}});
  CHECK(phi(Element::gen(src, "y", -3)) == Element::gen(dst, "x", -6));

  auto dst2 = AlgebraData::create({{"x", 0}});
  AlgebraMap bad(src, dst2, "noninv", {{"y", Element::gen(dst2, "x")}});
  CHECK_THROWS_AS(bad(Element::gen(src, "y", -1)), NotInvertible);
}

TEST_CASE("mismatched algebras are rejected") {
  auto a1 = poly_forms();
  auto a2 = poly_forms();
  Element x1 = Element::gen(a1, "x");
  Element x2 = Element::gen(a2, "x");
  CHECK_THROWS_AS(x1 * x2, AlgebraMismatch);
}
