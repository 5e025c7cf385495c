#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sgq/errors.hpp"
#include "sgq/symplectic.hpp"

using namespace sgq;

namespace {

Element random_poly(const AlgebraPtr& alg, const std::vector<std::string>& vars,
                    std::mt19937_64& rng, int max_exp = 2, int terms = 3) {
  std::uniform_int_distribution<int> exp(0, max_exp);
  std::uniform_int_distribution<int> coef(-3, 3);
  Element out = Element::zero(alg);
  for (int t = 0; t < terms; ++t) {
    Element m = Element::constant(alg, coef(rng));
    for (const auto& v : vars) m *= Element::gen(alg, v).pow(exp(rng));
    out += m;
  }
  return out;
}

std::map<int, int> tangent_dims(const SymplecticCell& sc, bool fiber_only) {
  std::map<int, int> dims;
  for (const auto& g : sc.dr.cell.gens) {
    bool is_fiber = std::find(sc.fiber.begin(), sc.fiber.end(), g.name) !=
                    sc.fiber.end();
    if (fiber_only && !is_fiber) continue;
    dims[-g.degree] += 1;
  }
  return dims;
}

}  // namespace

TEST_CASE("cotangent cells carry the advertised grading and pass wholesale") {
  struct Case {
    int base_dim;
    int n;
  };
  for (Case c : {Case{1, -1}, Case{1, 0}, Case{1, 1}, Case{1, 2}, Case{2, -1},
                 Case{2, 0}, Case{2, 1}, Case{3, 0}}) {
    CAPTURE(c.base_dim);
    CAPTURE(c.n);
    SymplecticCell sc = shifted_cotangent(affine_space(c.base_dim), c.n);
    FormClass lc = classify_form(sc.lambda);
    CHECK(lc.p == 1);
    CHECK(lc.n == c.n);
    FormClass oc = classify_form(sc.omega);
    CHECK(oc.p == 2);
    CHECK(oc.n == c.n);
    CHECK(sc.dr.d(sc.omega).is_zero());
    CHECK(sc.dr.d(sc.lambda) == sc.omega);
    CHECK(check_nondegenerate(sc).verdict == Verdict::PASS);

    Window w{-6, 6, 0, 2, c.base_dim >= 3 ? 3 : 4};
    CheckReport fib = check_lagrangian_fibration(sc, sc.base, w);
    CHECK(fib.verdict == Verdict::PASS);

    if (c.n % 2 == 0) {
      CheckReport par = parity_obstruction(tangent_dims(sc, false),
                               tangent_dims(sc, true), c.n);
      CHECK(par.verdict == Verdict::PASS);
    }
  }
}

TEST_CASE("pairing matrices and unit determinants") {
  SymplecticCell sc = shifted_cotangent(affine_space(1), 0);
  auto mat = omega_sharp_matrix(sc.dr, sc.omega);
  // generators in order x, p; rows are the dx / dp components
  CHECK(mat[0][0].is_zero());
  CHECK(mat[1][1].is_zero());
  CHECK(mat[0][1] == Element::constant(sc.dr.alg, 1));
  CHECK(mat[1][0] == Element::constant(sc.dr.alg, -1));
  CHECK(is_unit(determinant(mat)));

  CHECK(check_nondegenerate(sc.dr, Element::zero(sc.dr.alg)).verdict ==
        Verdict::FAIL);

  SymplecticCell minus = shifted_cotangent(affine_space(1), -1);
  CHECK(check_nondegenerate(minus).verdict == Verdict::PASS);

  SymplecticCell plane = shifted_cotangent(affine_space(2), 0);
  Element degenerate = plane.dr.d(Element::gen(plane.dr.alg, "p1") *
                                  Element::gen(plane.dr.alg, "dx"));
  CheckReport bad = check_nondegenerate(plane.dr, degenerate);
  CHECK(bad.verdict == Verdict::FAIL);
}

TEST_CASE("one form components respect the sign bookkeeping") {
  SymplecticCell sc = shifted_cotangent(affine_space(1), 0);
  Element x = Element::gen(sc.dr.alg, "x");
  Element p = Element::gen(sc.dr.alg, "p");
  Element alpha = p * Element::gen(sc.dr.alg, "dx") +
                  x * Element::gen(sc.dr.alg, "dp");
  auto comps = one_form_components(alpha);
  CHECK(comps.at("dx") == p);
  CHECK(comps.at("dp") == x);
  CHECK_THROWS_AS(one_form_components(sc.omega), BadParameter);
}

TEST_CASE("fibration verdicts for polarizations and degenerate data") {
  SymplecticCell sc = shifted_cotangent(affine_space(1), 0);
  Window w{-4, 4, 0, 2, 5};

  CHECK(check_lagrangian_fibration(sc, {"x"}, w).verdict == Verdict::PASS);
  CHECK(check_lagrangian_fibration(sc, {"p"}, w).verdict == Verdict::PASS);

  CheckReport nothing = check_lagrangian_fibration(sc, {}, w);
  CHECK(nothing.verdict == Verdict::FAIL);
  CHECK_FALSE(nothing.witness.empty());

  CheckReport everything = check_lagrangian_fibration(sc, {"x", "p"}, w);
  CHECK(everything.verdict == Verdict::FAIL);

  SymplecticCell partial = shifted_cotangent(affine_space(2), 0);
  partial.omega = partial.dr.d(Element::gen(partial.dr.alg, "p1") *
                               Element::gen(partial.dr.alg, "dx"));
  CheckReport degen = check_lagrangian_fibration(partial, {"x", "y"}, w);
  CHECK(degen.verdict == Verdict::FAIL);
  CHECK_FALSE(degen.witness.empty());
}

TEST_CASE("magnetic deformations keep every verdict") {
  DeRhamAlgebra plane = de_rham(affine_space(2));
  Element dxdy = Element::gen(plane.alg, "dx") * Element::gen(plane.alg, "dy");
  Window w{-4, 4, 0, 2, 4};

  SymplecticCell magnetic = magnetic_cotangent(plane, dxdy);
  CHECK(check_nondegenerate(magnetic).verdict == Verdict::PASS);
  CHECK(check_lagrangian_fibration(magnetic, magnetic.base, w).verdict ==
        Verdict::PASS);

  std::mt19937_64 rng(4242);
  std::vector<std::string> vars{"x", "y"};
  for (int trial = 0; trial < 8; ++trial) {
    Element b = plane.d(random_poly(plane.alg, vars, rng) *
                            Element::gen(plane.alg, "dx") +
                        random_poly(plane.alg, vars, rng) *
                            Element::gen(plane.alg, "dy"));
    CAPTURE(trial);
    SymplecticCell cell = magnetic_cotangent(plane, b);
    CHECK(check_nondegenerate(cell).verdict == Verdict::PASS);
    CHECK(check_lagrangian_fibration(cell, cell.base, w).verdict ==
          Verdict::PASS);
    CHECK(cell.dr.d(cell.omega).is_zero());
  }

  DeRhamAlgebra space = de_rham(affine_space(3));
  Element open_b = Element::gen(space.alg, "x3") *
                   Element::gen(space.alg, "dx1") *
                   Element::gen(space.alg, "dx2");
  CHECK_THROWS_AS(magnetic_cotangent(space, open_b), AlphaNotClosed);
  CHECK_THROWS_AS(magnetic_cotangent(plane, Element::gen(plane.alg, "dx")),
                  NotTwoForm);
}

TEST_CASE("derived critical loci carry a koszul differential") {
  DeRhamAlgebra line = de_rham(affine_space(1));
  Element x = Element::gen(line.alg, "x");

  SymplecticCell crit = derived_critical_locus(line, x * x * Rational(1, 2));
  REQUIRE(crit.dr.internal.has_value());
  const Derivation& del = *crit.dr.internal;
  Element p = Element::gen(crit.dr.alg, "p");
  CHECK(del(p) == Element::gen(crit.dr.alg, "x"));
  CHECK(del(Element::gen(crit.dr.alg, "x")).is_zero());
  CHECK(del(Element::gen(crit.dr.alg, "dx")).is_zero());
  CHECK(del(Element::gen(crit.dr.alg, "dp")) ==
        -Element::gen(crit.dr.alg, "dx"));

  Window functions_only{-2, 1, 0, 0, 6};
  Realization r = realize(crit.dr.mixed(), functions_only);
  CHECK(cohomology(r.complex, 0).dim == 1);
  CHECK(cohomology(r.complex, -1).dim == 0);

  SymplecticCell cubic = derived_critical_locus(line, x.pow(3) * Rational(1, 3));
  Realization rc = realize(cubic.dr.mixed(), functions_only);
  CHECK(cohomology(rc.complex, 0).dim == 2);

  SymplecticCell flat = derived_critical_locus(line, Element::zero(line.alg));
  CHECK_FALSE(flat.dr.internal.has_value());
  CHECK(flat.shift == -1);

  Window full{-2, 2, 0, 2, 8};
  Realization rt = realize(crit.dr.mixed(), full);
  auto h0 = cohomology(rt.complex, 0);
  CHECK(h0.dim == 1);
  CHECK(rt.complex.describe(0, h0.reps[0]) == "1 * 1");
}

TEST_CASE("twisted cotangent dispatch and unsupported shifts") {
  DeRhamAlgebra line = de_rham(affine_space(1));
  Element xdx = Element::gen(line.alg, "x") * Element::gen(line.alg, "dx");
  SymplecticCell crit = twisted_cotangent(line, xdx, -1);
  CHECK(crit.shift == -1);
  CHECK(crit.dr.internal.has_value());
  CHECK_THROWS_AS(twisted_cotangent(line, xdx, 2), UnsupportedShift);
}

TEST_CASE("graph pullbacks recover the liouville identity") {
  DeRhamAlgebra line = de_rham(affine_space(1));
  CHECK(liouville_pullback_check(line, Element::zero(line.alg)).verdict ==
        Verdict::PASS);

  Element x = Element::gen(line.alg, "x");
  CHECK(liouville_pullback_check(line, line.d(x.pow(3))).verdict ==
        Verdict::PASS);

  DeRhamAlgebra plane = de_rham(affine_space(2));
  Element xdy = Element::gen(plane.alg, "x") * Element::gen(plane.alg, "dy");
  CheckReport rep = liouville_pullback_check(plane, xdy);
  CHECK(rep.verdict == Verdict::PASS);

  std::mt19937_64 rng(7);
  std::vector<std::string> vars{"x", "y"};
  for (int trial = 0; trial < 10; ++trial) {
    Element alpha = random_poly(plane.alg, vars, rng) *
                        Element::gen(plane.alg, "dx") +
                    random_poly(plane.alg, vars, rng) *
                        Element::gen(plane.alg, "dy");
    CHECK(liouville_pullback_check(plane, alpha).verdict == Verdict::PASS);
  }
}

TEST_CASE("parity obstruction arithmetic") {
  CheckReport bsl2 = parity_obstruction({{1, 3}}, std::nullopt, 2);
  CHECK(bsl2.verdict == Verdict::FAIL);
  CHECK(bsl2.statement.find("-3") != std::string::npos);
  CHECK(bsl2.statement.find("odd") != std::string::npos);

  CheckReport classical = parity_obstruction({{0, 4}}, {{{0, 2}}}, 0);
  CHECK(classical.verdict == Verdict::PASS);

  CheckReport bgl2 = parity_obstruction({{1, 4}}, {{{1, 2}}}, 2);
  CHECK(bgl2.verdict == Verdict::PASS);

  CheckReport off = parity_obstruction({{0, 4}}, {{{0, 1}}}, 0);
  CHECK(off.verdict == Verdict::FAIL);

  CHECK_THROWS_AS(parity_obstruction({{0, 2}}, std::nullopt, 1), OddShift);
}
