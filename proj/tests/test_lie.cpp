#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sgq/errors.hpp"
#include "sgq/hamiltonian.hpp"
#include "sgq/lie.hpp"

using namespace sgq;

namespace {

QVec zero_vec(const LieAlgebraData& g) { return QVec(g.dim, Rational(0)); }

QVec combo(const LieAlgebraData& g,
           const std::vector<std::pair<std::string, Rational>>& parts) {
  QVec v = zero_vec(g);
  for (const auto& [name, c] : parts) v[g.index_of(name)] += c;
  return v;
}

std::vector<QVec> span_of(const LieAlgebraData& g,
                          const std::vector<std::string>& names) {
  std::vector<QVec> out;
  for (const auto& n : names) out.push_back(g.unit(g.index_of(n)));
  return out;
}

bool same_vec(const QVec& a, const QVec& b) { return a == b; }

std::mt19937 rng(911402);

Element random_weight_zero(const AlgebraPtr& alg, int max_exp) {
  std::uniform_int_distribution<int> e(0, max_exp);
  std::uniform_int_distribution<int> c(-3, 3);
  Element out = Element::constant(alg, c(rng));
  out += Element::monomial(alg, {{"x", e(rng) + 1}}, c(rng));
  out += Element::monomial(alg, {{"x", e(rng)}, {"p", e(rng) + 1}}, c(rng));
  return out;
}

}  // namespace

TEST_CASE("structure constants validate and the killing form scales the "
          "trace form") {
  LieAlgebraData g = sl2();
  CHECK(g.dim == 3);
  REQUIRE(g.pairing.has_value());
  CHECK(g.pair(g.unit(0), g.unit(2)) == Rational(1));
  CHECK(g.pair(g.unit(1), g.unit(1)) == Rational(2));
  CHECK(g.pair(g.unit(0), g.unit(0)) == Rational(0));

  QMat k = g.killing();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(k[i][j] == Rational(4) * (*g.pairing)[i][j]);

  LieAlgebraData a3 = lie_algebra(
      {"u", "v", "w"},
      std::vector<std::vector<QVec>>(3, std::vector<QVec>(3, QVec(3, 0))));
  QMat ka = a3.killing();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(ka[i][j] == Rational(0));

  CHECK(sl3().dim == 8);
  CHECK(gl2().dim == 4);
  CHECK(sp4().dim == 10);

  QMat k3 = sl3().killing();
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      CHECK(k3[i][j] == Rational(6) * (*sl3().pairing)[i][j]);
  QMat k4 = sp4().killing();
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      CHECK(k4[i][j] == Rational(6) * (*sp4().pairing)[i][j]);

  LieAlgebraData g2 = gl2();
  QMat kg = g2.killing();
  CHECK(kg[g2.index_of("e11")][g2.index_of("e11")] == Rational(2));
  CHECK(kg[g2.index_of("e11")][g2.index_of("e22")] == Rational(-2));

  // Breaking one constant breaks Jacobi.
  LieAlgebraData s = sl2();
  auto bad = s.constants;
  bad[s.index_of("e")][s.index_of("f")][s.index_of("e")] = 1;
  bad[s.index_of("f")][s.index_of("e")][s.index_of("e")] = -1;
  CHECK_THROWS_AS(lie_algebra(s.basis, bad, s.pairing), JacobiFails);

  QMat flat(3, QVec(3, 0));
  flat[0][0] = 1;
  CHECK_THROWS_AS(lie_algebra(s.basis, s.constants, flat),
                  PairingNotInvariant);
}

TEST_CASE("nilpotents complete to triples by exact linear solves") {
  LieAlgebraData g = sl2();
  Sl2Triple t = sl2_triple(g, g.unit(g.index_of("e")));
  CHECK(same_vec(g.bracket(t.h, t.e), g.bracket(zero_vec(g), zero_vec(g)))
            == false);
  CHECK(g.bracket(t.h, t.e) == QVec{2, 0, 0});
  CHECK(g.bracket(t.e, t.f) == t.h);
  {
    QVec m2f = t.f;
    for (auto& c : m2f) c = c * Rational(-2);
    CHECK(g.bracket(t.h, t.f) == m2f);
  }

  LieAlgebraData g3 = sl3();
  QVec ereg = combo(g3, {{"e12", 1}, {"e23", 1}});
  Sl2Triple t3 = sl2_triple(g3, ereg);
  CHECK(t3.e == ereg);
  {
    QVec twice = ereg;
    for (auto& c : twice) c = c * Rational(2);
    CHECK(g3.bracket(t3.h, t3.e) == twice);
  }
  CHECK(g3.bracket(t3.e, t3.f) == t3.h);
  {
    QVec m2f = t3.f;
    for (auto& c : m2f) c = c * Rational(-2);
    CHECK(g3.bracket(t3.h, t3.f) == m2f);
  }
  // Any triple through a regular nilpotent of sl3 has <h,h> = 8.
  CHECK(g3.pair(t3.h, t3.h) == Rational(8));

  Sl2Triple tmin = sl2_triple(g3, g3.unit(g3.index_of("e13")));
  CHECK(g3.bracket(tmin.e, tmin.f) == tmin.h);
  CHECK(g3.pair(tmin.h, tmin.h) == Rational(2));

  CHECK_THROWS_AS(sl2_triple(g, zero_vec(g)), BadParameter);
  CHECK_THROWS_AS(sl2_triple(g, g.unit(g.index_of("h"))), NotNilpotent);
}

TEST_CASE("coadjoint stabilizers give exact four-term complexes") {
  LieAlgebraData g = sl2();
  QVec x = g.kappa(g.unit(g.index_of("h")));
  CHECK(x == QVec{0, 2, 0});

  Subalgebra cartan = subalgebra(g, span_of(g, {"h"}), false, true);
  CheckReport rep = coadjoint_exactness(g, x, cartan);
  CHECK(rep.verdict == Verdict::PASS);

  // Rescaling x keeps the verdict.
  QVec xs = x;
  for (auto& c : xs) c = c * Rational(3, 7);
  CHECK(coadjoint_exactness(g, xs, cartan).verdict == Verdict::PASS);

  Subalgebra all = subalgebra(g, {g.unit(0), g.unit(1), g.unit(2)});
  CheckReport degen = coadjoint_exactness(g, zero_vec(g), all);
  CHECK(degen.verdict == Verdict::PASS);
  CHECK(degen.statement.find("degenerate") != std::string::npos);

  Subalgebra eline = subalgebra(g, span_of(g, {"e"}));
  CHECK_THROWS_AS(coadjoint_exactness(g, x, eline), NotStabilizer);

  LieAlgebraData g3 = sl3();
  QVec semi = g3.kappa(combo(g3, {{"h1", 1}, {"h2", 2}}));
  Subalgebra cent =
      subalgebra(g3, span_of(g3, {"e12", "e21", "h1", "h2"}), false, true);
  CheckReport rep3 = coadjoint_exactness(g3, semi, cent);
  CHECK(rep3.verdict == Verdict::PASS);
}

TEST_CASE("levi and parabolic flags pass the pairing test") {
  LieAlgebraData g = sl2();
  QVec x = g.kappa(g.unit(g.index_of("h")));
  Subalgebra cartan = subalgebra(g, span_of(g, {"h"}), false, true);
  Subalgebra borel = subalgebra(g, span_of(g, {"h", "e"}), true, false);
  CheckReport rep = levi_parabolic_check(g, x, cartan, borel);
  CHECK(rep.verdict == Verdict::PASS);

  LieAlgebraData g3 = sl3();
  QVec xreg = g3.kappa(combo(g3, {{"h1", 1}, {"h2", 1}}));
  Subalgebra cartan3 = subalgebra(g3, span_of(g3, {"h1", "h2"}), false, true);
  Subalgebra borel3 =
      subalgebra(g3, span_of(g3, {"h1", "h2", "e12", "e13", "e23"}), true,
                 false);
  CheckReport rep3 = levi_parabolic_check(g3, xreg, cartan3, borel3);
  CHECK(rep3.verdict == Verdict::PASS);

  // x with a four-dimensional stabilizer rejects the Cartan as its Levi.
  QVec xbig = g3.kappa(combo(g3, {{"h1", 1}, {"h2", 2}}));
  CHECK_THROWS_AS(levi_parabolic_check(g3, xbig, cartan3, borel3),
                  NotStabilizer);

  Subalgebra thin =
      subalgebra(g3, span_of(g3, {"h1", "h2", "e12"}), true, false);
  CHECK_THROWS_AS(levi_parabolic_check(g3, xreg, cartan3, thin),
                  DimensionMismatch);

  Subalgebra notsub = borel3;
  CHECK_THROWS_AS(subalgebra(g3, span_of(g3, {"e12", "e21"})), NotSubalgebra);
  (void)notsub;
}

TEST_CASE("slodowy slices satisfy the dimension identity") {
  LieAlgebraData g = sl2();
  Sl2Triple t = sl2_triple(g, g.unit(g.index_of("e")));
  SlodowyData s = slodowy(g, t);
  CHECK(s.report.verdict == Verdict::PASS);
  CHECK(s.grading.at(2).size() == 1);
  CHECK(s.grading.at(0).size() == 1);
  CHECK(s.grading.at(-2).size() == 1);
  CHECK(s.lagrangian.empty());
  CHECK(s.m.size() == 1);
  CHECK(s.centralizer_f.size() == 1);

  LieAlgebraData g3 = sl3();
  Sl2Triple treg = sl2_triple(g3, combo(g3, {{"e12", 1}, {"e23", 1}}));
  SlodowyData sreg = slodowy(g3, treg);
  CHECK(sreg.report.verdict == Verdict::PASS);
  CHECK(sreg.grading.at(4).size() == 1);
  CHECK(sreg.grading.at(2).size() == 2);
  CHECK(sreg.grading.at(0).size() == 2);
  CHECK(sreg.grading.count(-1) == 0);
  CHECK(sreg.m.size() == 3);
  CHECK(sreg.centralizer_f.size() == 2);

  Sl2Triple tmin = sl2_triple(g3, g3.unit(g3.index_of("e13")));
  SlodowyData smin = slodowy(g3, tmin);
  CHECK(smin.report.verdict == Verdict::PASS);
  CHECK(smin.grading.at(-1).size() == 2);
  CHECK(smin.lagrangian.size() == 1);
  CHECK(smin.m.size() == 2);
  CHECK(smin.centralizer_f.size() == 4);

  LieAlgebraData flat = sl3();
  flat.pairing = QMat(8, QVec(8, 0));
  CHECK_THROWS_AS(slodowy(flat, tmin), PairingDegenerateOnGm1);

  Sl2Triple fake = t;
  fake.h = g.unit(g.index_of("e"));
  CHECK_THROWS_AS(slodowy(g, fake), BadParameter);
}

TEST_CASE("the moment map equation holds for the scaling action") {
  HamiltonianDatum X = scaling_datum();
  CheckReport rep = moment_check(X);
  CHECK(rep.verdict == Verdict::PASS);
  CHECK(rep.statement.find("constant") != std::string::npos);

  CHECK(moment_check(X, -1).verdict == Verdict::FAIL);

  HamiltonianDatum shifted = X;
  shifted.moment[0] += Element::constant(X.cell.dr.alg, Rational(5, 3));
  CHECK(moment_check(shifted).verdict == Verdict::PASS);

  HamiltonianDatum broken = X;
  broken.moment[0] = Element::zero(X.cell.dr.alg);
  CheckReport bad = moment_check(broken);
  CHECK(bad.verdict == Verdict::FAIL);
  CHECK_FALSE(bad.witness.empty());

  CHECK(moment_check(torus_translation_datum()).verdict == Verdict::PASS);
}

TEST_CASE("the torus datum carries the translation action on an invertible "
          "coordinate") {
  HamiltonianDatum X = torus_translation_datum();
  CHECK(X.cell.dr.alg->generator(X.cell.dr.alg->index_of("x")).invertible);
  Element xinv = Element::gen(X.cell.dr.alg, "x", -1);
  CHECK_FALSE((xinv * X.moment[0]).is_zero());
}

TEST_CASE("actions that fail to be lie algebra maps are rejected") {
  SymplecticCell cell = shifted_cotangent(affine_space(1), 0);
  const AlgebraPtr& alg = cell.dr.alg;
  LieAlgebraData ab2 = lie_algebra(
      {"u", "v"},
      std::vector<std::vector<QVec>>(2, std::vector<QVec>(2, QVec(2, 0))));
  VectorField scale{"scale",
                    {{"x", Element::gen(alg, "x")},
                     {"p", Element::zero(alg)}}};
  VectorField slide{"slide",
                    {{"x", Element::gen(alg, "p")},
                     {"p", Element::zero(alg)}}};
  std::vector<Element> mus{Element::zero(alg), Element::zero(alg)};
  CHECK_THROWS_AS(
      hamiltonian_datum(cell, ab2, {scale, slide}, mus), ActionNotLie);
}

TEST_CASE("the cartan model squares to the equivariant curvature") {
  HamiltonianDatum X = scaling_datum();
  Window w{-4, 4, 0, 5, 6};
  CartanModel cm = cartan_model(X, w);
  REQUIRE(cm.ts.size() == 1);
  Element t = Element::gen(cm.alg, cm.ts[0]);
  CHECK(t.bidegree() == std::make_pair(2, 2));

  auto dtot = [&](const Element& e) { return cm.d(e) + cm.internal(e); };

  // Invariant functions are killed twice over.
  Element xp = cm.include(Element::monomial(X.cell.dr.alg,
                                            {{"x", 1}, {"p", 1}}));
  CHECK(dtot(dtot(xp)).is_zero());
  // Non-invariant ones feel t times their scaling weight.
  Element x = cm.include(Element::gen(X.cell.dr.alg, "x"));
  CHECK(dtot(dtot(x)) == t * x);

  Element omega = cm.include(X.cell.omega);
  Element mu = cm.include(X.moment[0]);
  CHECK(dtot(omega - mu * t).is_zero());
  CHECK_FALSE(dtot(omega + mu * t).is_zero());

  for (int trial = 0; trial < 20; ++trial) {
    Element r = random_weight_zero(X.cell.dr.alg, 3);
    HamiltonianDatum Y = X;
    Y.moment[0] = r;
    bool closes = dtot(omega - cm.include(r) * t).is_zero();
    bool moment_ok = moment_check(Y).verdict == Verdict::PASS;
    CHECK(closes == moment_ok);
  }
}

TEST_CASE("single-chart prequantization data verifies itemized") {
  Window w{-4, 4, 0, 4, 6};
  CheckReport rep = equivariant_prequantization_check(scaling_datum(), w);
  CHECK(rep.verdict == Verdict::PASS);

  CheckReport torus =
      equivariant_prequantization_check(torus_translation_datum(), w);
  CHECK(torus.verdict == Verdict::PASS);

  HamiltonianDatum flat = scaling_datum();
  flat.connection = Element::zero(flat.cell.dr.alg);
  CheckReport bad = equivariant_prequantization_check(flat, w);
  CHECK(bad.verdict == Verdict::FAIL);
  CHECK(bad.statement.find("curvature") != std::string::npos);

  HamiltonianDatum none = scaling_datum();
  none.connection.reset();
  CHECK_THROWS_AS(equivariant_prequantization_check(none, w), BadParameter);
}

TEST_CASE("the group two-form is multiplicative for the invariant pairing") {
  CheckReport rep = bg_multiplicativity();
  CHECK(rep.verdict == Verdict::PASS);

  CheckReport degen = bg_multiplicativity(0);
  CHECK(degen.verdict == Verdict::PASS);
  CHECK(degen.statement.find("degenerate") != std::string::npos);

  CheckReport off = bg_multiplicativity(1, 2);
  CHECK(off.verdict == Verdict::FAIL);
  CHECK_FALSE(off.witness.empty());
}

TEST_CASE("the log-log two-form has no laurent primitive") {
  DeRhamAlgebra t2 = de_rham(torus_cell(2));
  Element x = Element::gen(t2.alg, "x");
  Element y = Element::gen(t2.alg, "y");
  Element dx = Element::gen(t2.alg, "dx");
  Element dy = Element::gen(t2.alg, "dy");

  Element exact = dx * dy;
  auto eta = primitive_in_box(t2, exact, 3);
  REQUIRE(eta.has_value());
  CHECK(t2.d(*eta) == exact);

  Element half_log = x.pow(-1) * dx * dy;
  auto eta2 = primitive_in_box(t2, half_log, 3);
  REQUIRE(eta2.has_value());
  CHECK(t2.d(*eta2) == half_log);

  Element loglog = x.pow(-1) * y.pow(-1) * dx * dy;
  for (int box = 1; box <= 4; ++box)
    CHECK_FALSE(primitive_in_box(t2, loglog, box).has_value());

  CheckReport rep = gm_nonexactness();
  CHECK(rep.verdict == Verdict::PASS);
}
