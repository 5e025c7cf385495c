#include "sgq/hamiltonian.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "sgq/errors.hpp"

namespace sgq {

namespace {

long long elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

Element field_component(const VectorField& v, const std::string& coord,
                        const AlgebraPtr& alg) {
  auto it = v.components.find(coord);
  return it == v.components.end() ? Element::zero(alg) : it->second;
}

VectorField field_combination(const LieAlgebraData& g,
                              const std::vector<VectorField>& action,
                              const QVec& coeffs, const AlgebraPtr& alg) {
  VectorField out{"combined", {}};
  for (int k = 0; k < g.dim; ++k) {
    if (coeffs[k] == 0) continue;
    for (const auto& [coord, comp] : action[k].components) {
      auto it = out.components.find(coord);
      if (it == out.components.end())
        it = out.components.emplace(coord, Element::zero(alg)).first;
      it->second += coeffs[k] * comp;
    }
  }
  return out;
}

int derivation_growth(const AlgebraPtr& alg, const Derivation& d) {
  int growth = 0;
  for (int i = 0; i < alg->num_generators(); ++i) {
    const Element& img = d.value_on(i);
    for (const auto& [m, c] : img.terms())
      growth = std::max(growth, alg->size_of(m) -
                                    alg->generator(i).size_weight);
  }
  return growth;
}

}  // namespace

HamiltonianDatum hamiltonian_datum(SymplecticCell cell, LieAlgebraData g,
                                   std::vector<VectorField> action,
                                   std::vector<Element> moment) {
  if (!cell.dr.coordinate())
    throw BadParameter("hamiltonian data need a coordinate cell");
  if (static_cast<int>(action.size()) != g.dim ||
      static_cast<int>(moment.size()) != g.dim)
    throw BadDimension("action and moment must match the basis of g");
  const AlgebraPtr& alg = cell.dr.alg;

  std::vector<Derivation> lie_ops;
  for (const auto& v : action) lie_ops.push_back(lie_operator(cell.dr, v));
  for (int i = 0; i < g.dim; ++i)
    for (int j = i + 1; j < g.dim; ++j) {
      Derivation comm =
          Derivation::commutator(lie_ops[i], lie_ops[j], "comm");
      VectorField target =
          field_combination(g, action, g.bracket(g.unit(i), g.unit(j)), alg);
      Derivation lt = lie_operator(cell.dr, target);
      for (int k = 0; k < alg->num_generators(); ++k)
        if (!(comm.value_on(k) - lt.value_on(k)).is_zero())
          throw ActionNotLie("[a(" + g.basis[i] + "), a(" + g.basis[j] +
                             ")] differs from a([" + g.basis[i] + ", " +
                             g.basis[j] + "]) on " +
                             alg->generator(k).name);
    }

  HamiltonianDatum out{std::move(cell), std::move(g), std::move(action),
                       std::move(moment), {}, {}, {}};
  return out;
}

HamiltonianDatum scaling_datum() {
  SymplecticCell cell = shifted_cotangent(affine_space(1), 0);
  const AlgebraPtr& alg = cell.dr.alg;
  Element x = Element::gen(alg, "x");
  Element p = Element::gen(alg, "p");
  LieAlgebraData g = lie_algebra(
      {"s"}, std::vector<std::vector<QVec>>(1, {QVec{Rational(0)}}));
  VectorField a{"scale", {{"x", x}, {"p", Rational(-1) * p}}};
  Element mu = Element::monomial(alg, {{"x", 1}, {"p", 1}}, -1);
  HamiltonianDatum X =
      hamiltonian_datum(cell, std::move(g), {a}, {mu});
  X.connection = X.cell.lambda;
  X.beta = {Element::zero(alg)};
  X.fibration = {"x"};
  return X;
}

HamiltonianDatum torus_translation_datum() {
  SymplecticCell cell = shifted_cotangent(torus_cell(1), 0);
  const AlgebraPtr& alg = cell.dr.alg;
  Element x = Element::gen(alg, "x");
  Element p = Element::gen(alg, "p");
  LieAlgebraData g = lie_algebra(
      {"v"}, std::vector<std::vector<QVec>>(1, {QVec{Rational(0)}}));
  VectorField a{"translate", {{"x", x}, {"p", Rational(-1) * p}}};
  Element mu = Element::monomial(alg, {{"x", 1}, {"p", 1}}, -1);
  HamiltonianDatum X =
      hamiltonian_datum(cell, std::move(g), {a}, {mu});
  X.connection = X.cell.lambda;
  X.beta = {Element::zero(alg)};
  X.fibration = {"x"};
  return X;
}

CheckReport moment_check(const HamiltonianDatum& X, int sign) {
  auto t0 = std::chrono::steady_clock::now();
  CheckReport rep;
  rep.scenario = "moment-map";
  rep.windowed = false;
  rep.verdict = Verdict::PASS;
  for (int i = 0; i < X.g.dim; ++i) {
    Element lhs = contraction(X.cell.dr, X.action[i])(X.cell.omega);
    Element rhs = Rational(sign) * X.cell.dr.d(X.moment[i]);
    Element diff = lhs - rhs;
    if (!diff.is_zero()) {
      rep.verdict = Verdict::FAIL;
      rep.witness = "on " + X.g.basis[i] + ": iota_a omega - " +
                    (sign < 0 ? std::string("(-1) ") : std::string()) +
                    "d mu = " + diff.str();
      break;
    }
  }
  rep.statement =
      "iota_{a(x)} omega = " + std::string(sign < 0 ? "-" : "") +
      "d mu(x) on every basis element; each component of the moment map is "
      "determined only up to an additive constant";
  rep.millis = elapsed_ms(t0);
  return rep;
}

MixedComplex CartanModel::mixed() const {
  Derivation dd = d;
  Derivation ii = internal;
  int dg = derivation_growth(alg, d);
  int ig = derivation_growth(alg, internal);
  return MixedComplex{
      alg,
      "cartan",
      {WeightOp{"d", 1, 1, dg, [dd](const Element& e) { return dd(e); }},
       WeightOp{"interior", 1, 1, ig,
                [ii](const Element& e) { return ii(e); }}}};
}

CartanModel cartan_model(const HamiltonianDatum& X, const Window& w) {
  const DeRhamAlgebra& dr = X.cell.dr;
  if (!dr.cell.relations.empty() || dr.cell.frame)
    throw RelationalBaseUnsupported(
        "the equivariant model needs a free coordinate cell");

  std::vector<GeneratorSpec> specs = dr.alg->generators();
  std::vector<std::string> ts;
  for (int a = 0; a < X.g.dim; ++a) {
    std::string tname = X.g.dim == 1 ? "t" : "t_" + X.g.basis[a];
    if (dr.alg->find(tname))
      throw BadParameter("generator name " + tname + " already taken");
    ts.push_back(tname);
    specs.push_back({tname, 2, 2, false, 1});
  }
  AlgebraPtr model = AlgebraData::create(specs, {}, "equivariant");
  AlgebraMap include(dr.alg, model, "include", {});

  std::map<std::string, Element> d_images;
  for (int i = 0; i < dr.alg->num_generators(); ++i) {
    const std::string& name = dr.alg->generator(i).name;
    d_images[name] = include(dr.d(Element::gen(dr.alg, name)));
  }
  Derivation dmod(model, "d", 1, 1, d_images);

  std::vector<Derivation> iotas;
  std::vector<Element> t_elems;
  for (int a = 0; a < X.g.dim; ++a) {
    std::map<std::string, Element> images;
    for (const auto& [coord, form] : dr.form_of)
      images[form] = include(field_component(X.action[a], coord, dr.alg));
    iotas.emplace_back(model, "iota_" + X.g.basis[a], -1, -1, images);
    t_elems.push_back(Element::gen(model, ts[a]));
  }

  std::map<std::string, Element> internal_images;
  for (int i = 0; i < model->num_generators(); ++i) {
    const std::string& name = model->generator(i).name;
    Element img = Element::zero(model);
    for (int a = 0; a < X.g.dim; ++a)
      img += t_elems[a] * iotas[a](Element::gen(model, name));
    internal_images[name] = img;
  }
  Derivation internal(model, "internal", 1, 1, internal_images);

  CartanModel cm{model, ts, include, dmod, internal};

  std::vector<Derivation> lies;
  for (int a = 0; a < X.g.dim; ++a)
    lies.push_back(
        Derivation::commutator(dmod, iotas[a], "L_" + X.g.basis[a]));
  Realization r = realize(cm.mixed(), w, false);
  for (const auto& slot : r.basis)
    for (const Monomial& mono : slot) {
      Element e = Element::from_monomial(model, mono);
      Element de = dmod(e) + internal(e);
      Element lhs = dmod(de) + internal(de);
      Element rhs = Element::zero(model);
      for (int a = 0; a < X.g.dim; ++a) rhs += t_elems[a] * lies[a](e);
      if (!(lhs - rhs).is_zero())
        throw NotSquareZero(
            "equivariant differential squared misses the curvature term at " +
            model->to_string(mono));
    }
  return cm;
}

CheckReport equivariant_prequantization_check(const HamiltonianDatum& X,
                                              const Window& w, int sign) {
  auto t0 = std::chrono::steady_clock::now();
  if (!X.connection)
    throw BadParameter("prequantization check needs a connection form");
  const DeRhamAlgebra& dr = X.cell.dr;
  const AlgebraPtr& alg = dr.alg;
  const Element& a_form = *X.connection;

  std::vector<std::pair<std::string, std::string>> items;

  {
    Element diff = dr.d(a_form) - X.cell.omega;
    items.emplace_back("curvature d A = omega",
                       diff.is_zero() ? "" : "d A - omega = " + diff.str());
  }

  CheckReport mrep = moment_check(X, sign);
  items.emplace_back("moment equation",
                     mrep.verdict == Verdict::PASS ? "" : mrep.witness);

  for (int i = 0; i < X.g.dim; ++i) {
    Element beta = i < static_cast<int>(X.beta.size())
                       ? X.beta[i]
                       : Element::zero(alg);
    Element diff = contraction(dr, X.action[i])(a_form) +
                   Rational(sign) * X.moment[i] - beta;
    if (!diff.is_zero()) {
      items.emplace_back("equivariance iota_a A + mu = beta",
                         "on " + X.g.basis[i] + ": " + diff.str());
      break;
    }
    if (i + 1 == X.g.dim)
      items.emplace_back("equivariance iota_a A + mu = beta", "");
  }

  {
    std::map<std::string, Element> comps = one_form_components(a_form);
    std::string bad;
    for (const auto& [coord, form] : dr.form_of) {
      if (std::find(X.fibration.begin(), X.fibration.end(), coord) !=
          X.fibration.end())
        continue;
      auto it = comps.find(form);
      if (it != comps.end() && !it->second.is_zero()) {
        bad = "component on " + form + ": " + it->second.str();
        break;
      }
    }
    items.emplace_back("connection vanishes along the fibers", bad);
  }

  {
    CheckReport fib = check_lagrangian_fibration(X.cell, X.fibration, w);
    items.emplace_back("the fibration is lagrangian",
                       fib.verdict == Verdict::PASS ? "" : fib.witness);
  }

  CheckReport rep;
  rep.scenario = "equivariant-prequantization";
  rep.window = w;
  rep.windowed = true;
  rep.verdict = Verdict::PASS;
  std::ostringstream os;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) os << "; ";
    os << "[" << (items[i].second.empty() ? "ok" : "BAD") << "] "
       << items[i].first;
    if (!items[i].second.empty() && rep.witness.empty()) {
      rep.verdict = Verdict::FAIL;
      rep.witness = items[i].second;
    }
  }
  rep.statement = os.str();
  rep.millis = elapsed_ms(t0);
  return rep;
}

namespace {

using EMat = MatrixOfForms;

EMat ematrix(const Element& a, const Element& b, const Element& c,
             const Element& d) {
  return EMat{{{a, b}, {c, d}}};
}

EMat emul(const EMat& x, const EMat& y) {
  const AlgebraPtr& alg = x[0][0].algebra();
  EMat out = ematrix(Element::zero(alg), Element::zero(alg),
                     Element::zero(alg), Element::zero(alg));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) out[i][j] += x[i][k] * y[k][j];
  return out;
}

EMat eadd(const EMat& x, const EMat& y) {
  EMat out = x;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out[i][j] += y[i][j];
  return out;
}

Element etrace_mul(const EMat& x, const EMat& y) {
  Element out = Element::zero(x[0][0].algebra());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out += x[i][j] * y[j][i];
  return out;
}

EMat group_matrix(const AlgebraPtr& alg, const std::string& suffix) {
  return ematrix(Element::gen(alg, "a" + suffix),
                 Element::gen(alg, "b" + suffix),
                 Element::gen(alg, "c" + suffix),
                 Element::gen(alg, "d" + suffix));
}

EMat group_inverse(const AlgebraPtr& alg, const std::string& suffix) {
  return ematrix(Element::gen(alg, "d" + suffix),
                 Rational(-1) * Element::gen(alg, "b" + suffix),
                 Rational(-1) * Element::gen(alg, "c" + suffix),
                 Element::gen(alg, "a" + suffix));
}

}  // namespace

CheckReport bg_multiplicativity(const Rational& pairing,
                                const Rational& h_scale) {
  auto t0 = std::chrono::steady_clock::now();
  CheckReport rep;
  rep.scenario = "bg-sl2-multiplicative";
  rep.windowed = false;
  rep.verdict = Verdict::PASS;

  DeRhamAlgebra one = de_rham(sl2_cell());
  EMat theta = maurer_cartan(one, MaurerCartanSide::left);
  Element tr3 = Element::zero(one.alg);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) tr3 += theta[i][j] * theta[j][k] * theta[k][i];
  Element h = (pairing * h_scale / 6) * tr3;

  std::vector<std::pair<std::string, std::string>> items;
  {
    Element dh = one.d(h);
    items.emplace_back("the invariant three-form is closed",
                       dh.is_zero() ? "" : "d H = " + dh.str());
  }

  DeRhamAlgebra two = de_rham(product_cell(sl2_cell("1"), sl2_cell("2")));
  {
    EMat th1 = maurer_cartan(two, MaurerCartanSide::left, "1");
    EMat th2 = maurer_cartan(two, MaurerCartanSide::left, "2");
    EMat g2 = group_matrix(two.alg, "2");
    EMat inv2 = group_inverse(two.alg, "2");
    EMat pulled = eadd(emul(emul(inv2, th1), g2), th2);
    if (!(pulled[1][1] + pulled[0][0]).is_zero())
      throw BadParameter("pulled-back frame matrix is not traceless");

    auto prod = [&](const std::string& x1, const std::string& y2,
                    const std::string& z1, const std::string& w2) {
      return Element::gen(two.alg, x1) * Element::gen(two.alg, y2) +
             Element::gen(two.alg, z1) * Element::gen(two.alg, w2);
    };
    std::map<std::string, Element> mimg{
        {"a", prod("a1", "a2", "b1", "c2")},
        {"b", prod("a1", "b2", "b1", "d2")},
        {"c", prod("c1", "a2", "d1", "c2")},
        {"d", prod("c1", "b2", "d1", "d2")},
        {"th11", pulled[0][0]},
        {"th12", pulled[0][1]},
        {"th21", pulled[1][0]}};
    AlgebraMap mstar(one.alg, two.alg, "mult", mimg);

    std::map<std::string, Element> img1, img2;
    for (const auto& g : one.alg->generators()) {
      img1[g.name] = Element::gen(two.alg, g.name + "1");
      img2[g.name] = Element::gen(two.alg, g.name + "2");
    }
    AlgebraMap proj1(one.alg, two.alg, "pr1", img1);
    AlgebraMap proj2(one.alg, two.alg, "pr2", img2);

    std::string chain_bad;
    for (const auto& g : one.alg->generators()) {
      Element e = Element::gen(one.alg, g.name);
      if (!(mstar(one.d(e)) - two.d(mstar(e))).is_zero()) {
        chain_bad = "multiplication pullback fails d on " + g.name;
        break;
      }
    }
    items.emplace_back("the multiplication pullback is a chain map",
                       chain_bad);

    EMat left1 = maurer_cartan(two, MaurerCartanSide::left, "1");
    EMat right2 = maurer_cartan(two, MaurerCartanSide::right, "2");
    Element omega = (pairing * Rational(-1, 2)) * etrace_mul(left1, right2);
    Element diff = mstar(h) - proj1(h) - proj2(h) - two.d(omega);
    items.emplace_back(
        "m*H - p1*H - p2*H = d omega on the double product",
        diff.is_zero() ? "" : "difference = " + diff.str());
  }

  DeRhamAlgebra three = de_rham(product_cell(
      product_cell(sl2_cell("1"), sl2_cell("2")), sl2_cell("3")));
  {
    EMat l1 = maurer_cartan(three, MaurerCartanSide::left, "1");
    EMat l2 = maurer_cartan(three, MaurerCartanSide::left, "2");
    EMat r2 = maurer_cartan(three, MaurerCartanSide::right, "2");
    EMat r3 = maurer_cartan(three, MaurerCartanSide::right, "3");
    EMat g2 = group_matrix(three.alg, "2");
    EMat inv2 = group_inverse(three.alg, "2");
    EMat l12 = eadd(emul(emul(inv2, l1), g2), l2);
    EMat r23 = eadd(r2, emul(emul(g2, r3), inv2));
    Rational s = pairing * Rational(-1, 2);
    Element lhs = s * etrace_mul(l12, r3) + s * etrace_mul(l1, r2);
    Element rhs = s * etrace_mul(l1, r23) + s * etrace_mul(l2, r3);
    Element diff = lhs - rhs;
    items.emplace_back("the two-form cocycle closes on the triple product",
                       diff.is_zero() ? "" : "difference = " + diff.str());
  }

  std::ostringstream os;
  if (pairing == 0) os << "degenerate pairing, all forms vanish; ";
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) os << "; ";
    os << "[" << (items[i].second.empty() ? "ok" : "BAD") << "] "
       << items[i].first;
    if (!items[i].second.empty() && rep.witness.empty()) {
      rep.verdict = Verdict::FAIL;
      rep.witness = items[i].second;
    }
  }
  rep.statement = os.str();
  rep.millis = elapsed_ms(t0);
  return rep;
}

namespace {

void enumerate_box(const AlgebraPtr& alg, int gi, int box,
                   std::vector<Monomial::Entry>& cur, int deg, int wt,
                   int target_deg, int target_wt,
                   std::vector<Monomial>& out) {
  if (gi == alg->num_generators()) {
    if (deg != target_deg || wt != target_wt) return;
    Monomial m{std::vector<Monomial::Entry>(cur)};
    if (alg->is_normal_form(m)) out.push_back(m);
    return;
  }
  const GeneratorSpec& g = alg->generator(gi);
  int lo = g.invertible ? -box : 0;
  int hi = parity_of_degree(g.degree) == 1 ? 1 : box;
  for (int e = lo; e <= hi; ++e) {
    if (e != 0) cur.push_back({gi, e});
    enumerate_box(alg, gi + 1, box, cur, deg + e * g.degree,
                  wt + e * g.weight, target_deg, target_wt, out);
    if (e != 0) cur.pop_back();
  }
}

}  // namespace

std::optional<Element> primitive_in_box(const DeRhamAlgebra& dr,
                                        const Element& omega, int box) {
  if (omega.is_zero()) return Element::zero(dr.alg);
  auto bd = omega.bidegree();
  if (!bd)
    throw BadParameter("primitive search needs a bihomogeneous form");
  const AlgebraPtr& alg = dr.alg;

  std::vector<Monomial> cands;
  std::vector<Monomial::Entry> cur;
  enumerate_box(alg, 0, box, cur, 0, 0, bd->first - 1, bd->second - 1,
                cands);

  std::map<Monomial, int> row_of;
  auto row = [&row_of](const Monomial& m) {
    auto it = row_of.find(m);
    if (it == row_of.end())
      it = row_of.emplace(m, static_cast<int>(row_of.size())).first;
    return it->second;
  };
  std::vector<std::tuple<int, int, Rational>> triplets;
  for (int j = 0; j < static_cast<int>(cands.size()); ++j) {
    Element img = dr.d(Element::from_monomial(alg, cands[j]));
    for (const auto& [m, c] : img.terms())
      triplets.emplace_back(row(m), j, c);
  }
  SparseVec rhs;
  for (const auto& [m, c] : omega.terms()) rhs.emplace_back(row(m), c);
  std::sort(rhs.begin(), rhs.end());

  SparseMat a(static_cast<int>(row_of.size()),
              static_cast<int>(cands.size()));
  for (const auto& [i, j, c] : triplets) a.add_entry(i, j, c);

  auto sol = solve(a, rhs);
  if (!sol) return std::nullopt;
  Element eta = Element::zero(alg);
  for (const auto& [j, c] : *sol)
    eta += Element::from_monomial(alg, cands[j], c);
  return eta;
}

CheckReport gm_nonexactness(int sweep_to) {
  auto t0 = std::chrono::steady_clock::now();
  CheckReport rep;
  rep.scenario = "gm2-nonexact";
  rep.windowed = false;
  rep.verdict = Verdict::PASS;

  DeRhamAlgebra t2 = de_rham(torus_cell(2));
  Element omega = dlog(t2, Element::gen(t2.alg, "x")) *
                  dlog(t2, Element::gen(t2.alg, "y"));
  if (!t2.d(omega).is_zero()) {
    rep.verdict = Verdict::FAIL;
    rep.statement = "the log-log two-form is not closed";
    rep.millis = elapsed_ms(t0);
    return rep;
  }

  Element control = Element::gen(t2.alg, "dx") * Element::gen(t2.alg, "dy");
  if (!primitive_in_box(t2, control, 1)) {
    rep.verdict = Verdict::FAIL;
    rep.statement = "primitive solver control failed on an exact form";
    rep.millis = elapsed_ms(t0);
    return rep;
  }

  for (int box = 1; box <= sweep_to; ++box) {
    auto eta = primitive_in_box(t2, omega, box);
    if (eta) {
      rep.verdict = Verdict::FAIL;
      rep.statement = "found a laurent primitive at exponent bound " +
                      std::to_string(box);
      rep.witness = eta->str();
      rep.millis = elapsed_ms(t0);
      return rep;
    }
  }
  rep.statement =
      "dlog x dlog y is closed, an exact control form has a primitive, and "
      "no laurent primitive exists with exponents bounded by " +
      std::to_string(sweep_to);
  rep.millis = elapsed_ms(t0);
  return rep;
}

}  // namespace sgq
