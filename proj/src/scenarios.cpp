#include "sgq/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

#include "sgq/bv.hpp"
#include "sgq/derham.hpp"
#include "sgq/errors.hpp"
#include "sgq/hamiltonian.hpp"
#include "sgq/lie.hpp"
#include "sgq/symplectic.hpp"

namespace sgq {

std::string ScenarioParams::get(const std::string& key,
                                const std::string& fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

int ScenarioParams::get_int(const std::string& key, int fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    size_t used = 0;
    int v = std::stoi(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw BadParameter("parameter " + key + " wants an integer, got '" +
                       it->second + "'");
  }
}

Rational ScenarioParams::get_rational(const std::string& key,
                                      const Rational& fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    return Rational(it->second);
  } catch (const std::exception&) {
    throw BadParameter("parameter " + key + " wants a rational, got '" +
                       it->second + "'");
  }
}

namespace {

std::vector<CheckReport> label(std::vector<CheckReport> reps,
                               const std::string& name) {
  if (reps.size() == 1) {
    reps[0].scenario = name;
    return reps;
  }
  for (auto& r : reps)
    r.scenario = name + ":" + r.scenario;
  return reps;
}

CheckReport relabel(CheckReport rep, const std::string& sub) {
  rep.scenario = sub;
  return rep;
}

std::vector<CheckReport> run_bg(const ScenarioParams& p) {
  std::string pairing = p.get("pairing", "trace");
  Rational c = pairing == "trace" ? Rational(1)
                                  : p.get_rational("pairing", Rational(1));
  Rational hs = p.get_rational("h-scale", Rational(1));
  return {bg_multiplicativity(c, hs)};
}

std::vector<CheckReport> run_bv_equivalence(const ScenarioParams& p,
                                            const std::string& route) {
  int m = p.get_int("m", 1);
  if (m < 1) throw BadParameter("m must be at least 1");
  Rational lambda = p.get_rational("lambda", Rational(1));
  bool completed = route == "euler";
  // Every monomial on these cells has weight at most its size, so lifting
  // the weight cap to the size bound leaves truncation to the size cap
  // alone; a tighter weight cap cuts partners of near-bound elements and
  // fakes extra cohomology.
  Window w = p.window;
  w.weight_max = std::max(w.weight_max, w.size_bound);
  return {verify_bv_equivalence(m, route, lambda, w, completed)};
}

void enumerate_upstairs(const OddCotangent& oc, size_t i,
                        std::vector<std::pair<std::string, int>>& word,
                        int size_left, std::vector<Element>& out) {
  if (i == oc.xs.size() + oc.ps.size()) {
    Element f = word.empty()
                    ? Element::constant(oc.cot.dr.alg, 1)
                    : Element::monomial(oc.cot.dr.alg, word);
    out.push_back(f * oc.omega_vol);
    return;
  }
  bool odd = i >= oc.xs.size();
  const std::string& name =
      odd ? oc.ps[i - oc.xs.size()] : oc.xs[i];
  int cap = odd ? std::min(1, size_left) : size_left;
  enumerate_upstairs(oc, i + 1, word, size_left, out);
  for (int e = 1; e <= cap; ++e) {
    word.push_back({name, e});
    enumerate_upstairs(oc, i + 1, word, size_left - e, out);
    word.pop_back();
  }
}

std::vector<CheckReport> run_laplacian_square(const ScenarioParams& p) {
  int m = p.get_int("m", 2);
  if (m < 1) throw BadParameter("m must be at least 1");
  OddCotangent oc = odd_cotangent(m);
  std::vector<Element> basis;
  std::vector<std::pair<std::string, int>> word;
  enumerate_upstairs(oc, 0, word, p.window.size_bound - m, basis);

  CheckReport rep;
  rep.scenario = "laplacian";
  rep.window = p.window;
  rep.verdict = Verdict::PASS;
  for (const Element& e : basis) {
    Element dd = bv_laplacian(oc, bv_laplacian(oc, e));
    if (!dd.is_zero()) {
      rep.verdict = Verdict::FAIL;
      rep.witness = "Delta^2(" + e.str() + ") = " + dd.str();
      break;
    }
  }
  rep.statement = "the odd laplacian squares to zero on all " +
                  std::to_string(basis.size()) +
                  " semidensities within the size bound (m = " +
                  std::to_string(m) + ")";
  return {rep};
}

std::vector<CheckReport> run_coadjoint_sl2(const ScenarioParams& p) {
  LieAlgebraData g = sl2();
  Rational scale = p.get_rational("scale", Rational(1));
  if (scale == 0) throw BadParameter("scale must be nonzero");
  QVec x = g.kappa(g.unit(g.index_of("h")));
  for (auto& c : x) c *= scale;
  Subalgebra cartan = subalgebra(g, {g.unit(g.index_of("h"))}, false, true);
  Subalgebra borel = subalgebra(
      g, {g.unit(g.index_of("h")), g.unit(g.index_of("e"))}, true, false);
  return {relabel(coadjoint_exactness(g, x, cartan), "exactness"),
          relabel(levi_parabolic_check(g, x, cartan, borel), "levi")};
}

std::vector<CheckReport> run_coadjoint_sl3(const ScenarioParams& p) {
  LieAlgebraData g = sl3();
  Rational scale = p.get_rational("scale", Rational(1));
  if (scale == 0) throw BadParameter("scale must be nonzero");
  auto u = [&](const char* n) { return g.unit(g.index_of(n)); };

  QVec hreg(g.dim, Rational(0));
  hreg[g.index_of("h1")] = 1;
  hreg[g.index_of("h2")] = 1;
  QVec xreg = g.kappa(hreg);
  for (auto& c : xreg) c *= scale;
  Subalgebra cartan = subalgebra(g, {u("h1"), u("h2")}, false, true);
  Subalgebra borel = subalgebra(
      g, {u("h1"), u("h2"), u("e12"), u("e13"), u("e23")}, true, false);

  QVec hsub(g.dim, Rational(0));
  hsub[g.index_of("h1")] = 1;
  hsub[g.index_of("h2")] = 2;
  QVec xsub = g.kappa(hsub);
  for (auto& c : xsub) c *= scale;
  Subalgebra block =
      subalgebra(g, {u("e12"), u("e21"), u("h1"), u("h2")}, false, true);

  return {relabel(coadjoint_exactness(g, xreg, cartan), "regular-exactness"),
          relabel(levi_parabolic_check(g, xreg, cartan, borel),
                  "regular-levi"),
          relabel(coadjoint_exactness(g, xsub, block), "subregular")};
}

std::vector<CheckReport> run_cotangent_fibration(const ScenarioParams& p) {
  int n = p.get_int("n", -1);
  int m = p.get_int("m", 2);
  if (m < 1) throw BadParameter("m must be at least 1");
  SymplecticCell cell = shifted_cotangent(affine_space(m), n);
  return {relabel(check_nondegenerate(cell), "nondegenerate"),
          relabel(check_lagrangian_fibration(cell, cell.base, p.window),
                  "fibration")};
}

std::vector<CheckReport> run_critical_locus(const ScenarioParams& p) {
  int power = p.get_int("power", 3);
  if (power < 2) throw BadParameter("power must be at least 2");
  DeRhamAlgebra line = de_rham(affine_space(1));
  Element x = Element::gen(line.alg, "x");
  SymplecticCell crit =
      derived_critical_locus(line, Rational(1, power) * x.pow(power));

  std::vector<CheckReport> out;
  out.push_back(relabel(check_nondegenerate(crit), "nondegenerate"));

  CheckReport rep;
  rep.scenario = "koszul";
  rep.window = p.window;
  try {
    Realization r = realize(crit.dr.mixed(), p.window);
    CohomologyGroup h0 = cohomology(r.complex, 0);
    int expected = power - 1;
    if (h0.dim == expected) {
      rep.verdict = Verdict::PASS;
      rep.statement =
          "the twisted differential squares to zero on the window and "
          "functions on the critical locus have dimension " +
          std::to_string(h0.dim);
    } else {
      rep.verdict = Verdict::FAIL;
      rep.statement = "degree-zero cohomology has dimension " +
                      std::to_string(h0.dim) + ", expected " +
                      std::to_string(expected);
    }
  } catch (const NotSquareZero& e) {
    rep.verdict = Verdict::FAIL;
    rep.statement = std::string("twisted differential fails: ") + e.what();
  }
  out.push_back(rep);
  return out;
}

std::vector<CheckReport> run_equivariant_preq(const ScenarioParams& p) {
  std::vector<CheckReport> out;
  out.push_back(relabel(
      equivariant_prequantization_check(scaling_datum(), p.window,
                                        p.moment_sign),
      "scaling"));
  out.push_back(relabel(
      equivariant_prequantization_check(torus_translation_datum(), p.window,
                                        p.moment_sign),
      "torus"));

  CheckReport cm;
  cm.scenario = "cartan";
  cm.window = p.window;
  try {
    cartan_model(scaling_datum(), p.window);
    cm.verdict = Verdict::PASS;
    cm.statement =
        "the equivariant differential squares to the curvature term on "
        "every window basis element";
  } catch (const NotSquareZero& e) {
    cm.verdict = Verdict::FAIL;
    cm.statement = e.what();
  }
  out.push_back(cm);
  return out;
}

std::vector<CheckReport> run_gm2(const ScenarioParams& p) {
  int sweep = p.get_int("sweep", 8);
  if (sweep < 1) throw BadParameter("sweep must be at least 1");
  return {gm_nonexactness(sweep)};
}

std::vector<CheckReport> run_liouville(const ScenarioParams& p) {
  (void)p;
  DeRhamAlgebra line = de_rham(affine_space(1));
  Element x = Element::gen(line.alg, "x");
  DeRhamAlgebra plane = de_rham(affine_space(2));
  Element xdy =
      Element::gen(plane.alg, "x") * Element::gen(plane.alg, "dy");
  return {relabel(liouville_pullback_check(line, Element::zero(line.alg)),
                  "zero-section"),
          relabel(liouville_pullback_check(line, line.d(x.pow(3))), "exact"),
          relabel(liouville_pullback_check(plane, xdy), "generic")};
}

std::vector<CheckReport> run_m1(const ScenarioParams& p) {
  OddCotangent oc = odd_cotangent(1);
  const DeRhamAlgebra& dr = oc.cot.dr;
  Element one = Element::constant(dr.alg, 1);
  Element good = Element::monomial(dr.alg, {{"p", 1}, {"dx", 1}}, -1);
  Element bad = Element::monomial(dr.alg, {{"p", 1}, {"dx", 1}}, 1);

  std::vector<CheckReport> out;
  out.push_back(relabel(
      check_m1_prequantization(dr, one, {good}, oc.cot.omega, p.window),
      "standard"));

  CheckReport inner =
      check_m1_prequantization(dr, one, {bad}, oc.cot.omega, p.window);
  CheckReport sign;
  sign.scenario = "sign-forced";
  sign.window = p.window;
  if (inner.verdict == Verdict::FAIL) {
    sign.verdict = Verdict::PASS;
    sign.statement =
        "flipping the weight-one correction breaks the connection "
        "equations, so the sign is forced: " + inner.statement;
  } else {
    sign.verdict = Verdict::FAIL;
    sign.statement = "the flipped sign unexpectedly passed";
  }
  out.push_back(sign);
  return out;
}

std::vector<CheckReport> run_magnetic(const ScenarioParams& p) {
  Rational b = p.get_rational("b", Rational(1));
  DeRhamAlgebra plane = de_rham(affine_space(2));
  Element bform = b * Element::gen(plane.alg, "dx") *
                  Element::gen(plane.alg, "dy");
  SymplecticCell cell = magnetic_cotangent(plane, bform);
  return {relabel(check_nondegenerate(cell), "nondegenerate"),
          relabel(check_lagrangian_fibration(cell, cell.base, p.window),
                  "fibration")};
}

std::vector<CheckReport> run_moment(const ScenarioParams& p) {
  return {relabel(moment_check(scaling_datum(), p.moment_sign), "scaling"),
          relabel(moment_check(torus_translation_datum(), p.moment_sign),
                  "torus")};
}

std::vector<CheckReport> run_parity(const ScenarioParams& p) {
  (void)p;
  CheckReport inner =
      parity_obstruction(std::map<int, int>{{1, 3}}, std::nullopt, 2);
  CheckReport rep;
  rep.scenario = "parity-bsl2";
  rep.windowed = false;
  bool fired = inner.verdict == Verdict::FAIL &&
               inner.statement.find("-3") != std::string::npos;
  rep.verdict = fired ? Verdict::PASS : Verdict::FAIL;
  rep.statement = fired
                      ? "the parity obstruction fires as designed: " +
                            inner.statement
                      : "expected the obstruction to fire, got: " +
                            inner.statement;
  rep.witness = inner.witness;
  return {rep};
}

std::vector<CheckReport> run_slodowy(const LieAlgebraData& g, const QVec& e) {
  SlodowyData s = slodowy(g, sl2_triple(g, e));
  return {s.report};
}

std::vector<Scenario> build_registry() {
  std::vector<Scenario> reg;
  reg.push_back({"bg-sl2-multiplicative",
                 "closedness, primitive and cocycle identities of the "
                 "invariant three-form on the group cell",
                 "multiplicative structures on the classifying cell of SL2",
                 {"pairing", "h-scale"},
                 run_bg});
  reg.push_back({"bv-equivalence-euler",
                 "deformation retract along the euler homotopy keeps the de "
                 "rham differential",
                 "completed forms on an odd cotangent space",
                 {"m"},
                 [](const ScenarioParams& p) {
                   return run_bv_equivalence(p, "euler");
                 }});
  reg.push_back({"bv-equivalence-severa",
                 "deformation retract along the koszul pairing induces the "
                 "scaled odd laplacian on semidensities",
                 "semidensities and the odd laplacian",
                 {"m", "lambda"},
                 [](const ScenarioParams& p) {
                   return run_bv_equivalence(p, "severa");
                 }});
  reg.push_back({"bv-laplacian-square-zero",
                 "the odd laplacian squares to zero on the window basis of "
                 "semidensities",
                 "the odd laplacian on semidensities",
                 {"m"},
                 run_laplacian_square});
  reg.push_back({"coadjoint-sl2",
                 "stabilizer exactness and the levi pairing for the regular "
                 "semisimple functional on sl2",
                 "coadjoint orbits of sl2",
                 {"scale"},
                 run_coadjoint_sl2});
  reg.push_back({"coadjoint-sl3",
                 "stabilizer exactness for regular and subregular "
                 "functionals on sl3, with the borel levi pairing",
                 "coadjoint orbits of sl3",
                 {"scale"},
                 run_coadjoint_sl3});
  reg.push_back({"cotangent-fibration",
                 "nondegeneracy and lagrangian projection of shifted "
                 "cotangent cells",
                 "shifted cotangent spaces of affine space",
                 {"n", "m"},
                 run_cotangent_fibration});
  reg.push_back({"derived-critical-locus",
                 "twisted differential of a potential squares to zero and "
                 "computes functions on the critical locus",
                 "derived critical loci of polynomial potentials",
                 {"power"},
                 run_critical_locus});
  reg.push_back({"equivariant-prequantization",
                 "single-chart prequantum data for the scaling and torus "
                 "translation actions, plus the equivariant model square",
                 "prequantization of group actions on cotangent spaces",
                 {},
                 run_equivariant_preq});
  reg.push_back({"gm2-nonexact",
                 "the log-log two-form on the two-torus admits no laurent "
                 "primitive",
                 "nontrivial two-form on a torus",
                 {"sweep"},
                 run_gm2});
  reg.push_back({"liouville-graph",
                 "graphs of one-forms pull the tautological form back to "
                 "the one-form",
                 "the tautological one-form under graph sections",
                 {},
                 run_liouville});
  reg.push_back({"m1-prequantization",
                 "weightwise connection equations on the odd cotangent line "
                 "and the forced correction sign",
                 "prequantization on a (-1)-shifted cotangent space",
                 {},
                 run_m1});
  reg.push_back({"magnetic",
                 "magnetic twists of the plane cotangent stay nondegenerate "
                 "with lagrangian fibers",
                 "magnetic cotangent twists",
                 {"b"},
                 run_magnetic});
  reg.push_back({"moment-map",
                 "the moment equation for the scaling and torus translation "
                 "actions",
                 "moment maps of basic torus actions",
                 {},
                 run_moment});
  reg.push_back({"parity-bsl2",
                 "the odd-dimension parity obstruction fires on the "
                 "classifying cell of SL2 at shift two",
                 "parity obstruction for two-shifted forms",
                 {},
                 run_parity});
  reg.push_back({"slodowy-sl2-regular",
                 "grading, lagrangian and dimension identity for the "
                 "regular nilpotent of sl2",
                 "transverse slices at the regular nilpotent of sl2",
                 {},
                 [](const ScenarioParams&) {
                   LieAlgebraData g = sl2();
                   return run_slodowy(g, g.unit(g.index_of("e")));
                 }});
  reg.push_back({"slodowy-sl3-minimal",
                 "grading, lagrangian and dimension identity for the "
                 "minimal nilpotent of sl3",
                 "transverse slices at the minimal nilpotent of sl3",
                 {},
                 [](const ScenarioParams&) {
                   LieAlgebraData g = sl3();
                   return run_slodowy(g, g.unit(g.index_of("e13")));
                 }});
  reg.push_back({"slodowy-sl3-regular",
                 "grading, lagrangian and dimension identity for the "
                 "regular nilpotent of sl3",
                 "transverse slices at the regular nilpotent of sl3",
                 {},
                 [](const ScenarioParams&) {
                   LieAlgebraData g = sl3();
                   QVec e = g.unit(g.index_of("e12"));
                   QVec e2 = g.unit(g.index_of("e23"));
                   for (int i = 0; i < g.dim; ++i) e[i] += e2[i];
                   return run_slodowy(g, e);
                 }});
  std::sort(reg.begin(), reg.end(),
            [](const Scenario& a, const Scenario& b) { return a.name < b.name; });
  return reg;
}

}  // namespace

const std::vector<Scenario>& scenario_registry() {
  static const std::vector<Scenario> reg = build_registry();
  return reg;
}

const Scenario& find_scenario(const std::string& name) {
  for (const Scenario& s : scenario_registry())
    if (s.name == name) return s;
  throw UnknownScenario("no scenario named '" + name + "'");
}

std::vector<CheckReport> run_scenarios(const std::vector<std::string>& names,
                                       const ScenarioParams& p, int jobs) {
  if (p.odd_side != "left")
    throw BadParameter(
        "only the left odd-derivative convention is implemented");
  if (p.moment_sign != 1 && p.moment_sign != -1)
    throw BadParameter("moment sign must be +1 or -1");

  std::vector<const Scenario*> todo;
  for (const auto& n : names) todo.push_back(&find_scenario(n));
  for (const auto& [key, value] : p.params) {
    bool known = false;
    for (const Scenario* s : todo)
      known = known ||
              std::find(s->keys.begin(), s->keys.end(), key) != s->keys.end();
    if (!known)
      throw BadParameter("parameter '" + key +
                         "' is not accepted by any selected scenario");
    (void)value;
  }

  std::vector<std::vector<CheckReport>> buckets(todo.size());
  std::exception_ptr first_error;
  std::mutex error_mu;
  std::atomic<size_t> next{0};
  int workers = std::max(1, std::min<int>(jobs, static_cast<int>(todo.size())));

  auto work = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= todo.size()) return;
      try {
        buckets[i] = label(todo[i]->run(p), todo[i]->name);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::vector<CheckReport> out;
  for (auto& b : buckets)
    for (auto& r : b) out.push_back(std::move(r));
  std::stable_sort(out.begin(), out.end(),
                   [](const CheckReport& a, const CheckReport& b) {
                     return a.scenario < b.scenario;
                   });
  return out;
}

}  // namespace sgq
