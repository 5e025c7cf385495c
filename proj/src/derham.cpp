#include "sgq/derham.hpp"

#include <algorithm>
#include <sstream>

#include "sgq/errors.hpp"

namespace sgq {

namespace {

Element eval_combo(const AlgebraPtr& alg, const WordCombo& combo) {
  Element out = Element::zero(alg);
  for (const auto& [c, w] : combo) out += Element::monomial(alg, w, c);
  return out;
}

// Largest size increase a derivation can cause on a power of `gen_name`,
// given the image of the generator itself.
int growth_of_image(const AlgebraData& a, const std::string& gen_name,
                    const Element& img) {
  int gi = a.index_of(gen_name);
  int gen_size = a.generator(gi).size_weight;
  int g = 0;
  for (const auto& [m, c] : img.terms()) {
    (void)c;
    g = std::max(g, a.size_of(m) - gen_size);
  }
  return g;
}

void check_square_zero_on_gens(const Derivation& d1, const Derivation& d2,
                               const AlgebraPtr& alg,
                               const std::string& what) {
  int n = alg->num_generators();
  for (int i = 0; i < n; ++i) {
    const std::string& g = alg->generator(i).name;
    Element v = d1(d2(Element::gen(alg, g))) + d2(d1(Element::gen(alg, g)));
    if (!v.is_zero())
      throw NotSquareZero(what + " fails on generator " + g + ": " + v.str());
  }
}

const std::array<const char*, 4> kSl2Entries = {"a", "b", "c", "d"};
const std::array<const char*, 3> kSl2Frame = {"th11", "th12", "th21"};

}  // namespace

AffineCell affine_cell(std::string name, std::vector<CellGenerator> gens) {
  AffineCell c;
  c.name = std::move(name);
  c.gens = std::move(gens);
  return c;
}

AffineCell affine_space(int m) {
  if (m < 1) throw BadParameter("affine_space needs at least one coordinate");
  AffineCell c;
  c.name = "A" + std::to_string(m);
  if (m == 1) {
    c.gens.push_back({"x"});
  } else if (m == 2) {
    c.gens.push_back({"x"});
    c.gens.push_back({"y"});
  } else {
    for (int i = 1; i <= m; ++i) c.gens.push_back({"x" + std::to_string(i)});
  }
  return c;
}

AffineCell torus_cell(int k) {
  if (k < 1) throw BadParameter("torus_cell needs at least one coordinate");
  AffineCell c = affine_space(k);
  c.name = k == 1 ? "Gm" : "Gm" + std::to_string(k);
  for (auto& g : c.gens) g.invertible = true;
  return c;
}

AffineCell sl2_cell(const std::string& suffix) {
  AffineCell c;
  c.name = "SL2" + suffix;
  auto n = [&suffix](const char* base) { return std::string(base) + suffix; };
  for (const char* e : kSl2Entries) c.gens.push_back({n(e)});

  RelationSpec rel;
  rel.lhs = {{n("a"), 1}, {n("d"), 1}};
  rel.rhs = {{1, {}}, {1, {{n("b"), 1}, {n("c"), 1}}}};
  c.relations.push_back(rel);

  FrameSpec fr;
  for (const char* t : kSl2Frame) fr.gens.push_back({n(t), 1, 1, false, 0});
  auto w = [&n](const char* g, const char* t) {
    return RelationSpec::Word{{n(g), 1}, {n(t), 1}};
  };
  fr.d_images[n("a")] = {{1, w("a", "th11")}, {1, w("b", "th21")}};
  fr.d_images[n("b")] = {{1, w("a", "th12")}, {-1, w("b", "th11")}};
  fr.d_images[n("c")] = {{1, w("c", "th11")}, {1, w("d", "th21")}};
  fr.d_images[n("d")] = {{1, w("c", "th12")}, {-1, w("d", "th11")}};
  fr.d_images[n("th11")] = {{-1, w("th12", "th21")}};
  fr.d_images[n("th12")] = {{-2, w("th11", "th12")}};
  fr.d_images[n("th21")] = {{2, w("th11", "th21")}};
  c.frame = std::move(fr);
  return c;
}

AffineCell product_cell(const AffineCell& a, const AffineCell& b,
                        std::string name) {
  AffineCell c;
  c.name = name.empty() ? a.name + "x" + b.name : std::move(name);
  c.gens = a.gens;
  c.gens.insert(c.gens.end(), b.gens.begin(), b.gens.end());
  c.relations = a.relations;
  c.relations.insert(c.relations.end(), b.relations.begin(),
                     b.relations.end());
  if (a.frame || b.frame) {
    FrameSpec fr;
    for (const AffineCell* side : {&a, &b}) {
      if (side->frame) {
        fr.gens.insert(fr.gens.end(), side->frame->gens.begin(),
                       side->frame->gens.end());
        for (const auto& [g, img] : side->frame->d_images)
          fr.d_images[g] = img;
      } else {
        for (const auto& g : side->gens) {
          fr.gens.push_back(
              {"d" + g.name, g.degree + 1, 1, false, g.size_weight});
          fr.d_images[g.name] = {{1, {{"d" + g.name, 1}}}};
          fr.d_images["d" + g.name] = {};
        }
      }
    }
    c.frame = std::move(fr);
  }
  for (const AffineCell* side : {&a, &b})
    for (const auto& [g, img] : side->internal) c.internal[g] = img;
  c.internal_growth = std::max(a.internal_growth, b.internal_growth);
  return c;
}

DeRhamAlgebra de_rham(const AffineCell& cell) {
  std::vector<GeneratorSpec> specs;
  for (const auto& g : cell.gens)
    specs.push_back({g.name, g.degree, 0, g.invertible, g.size_weight});

  std::map<std::string, std::string> form_of;
  if (cell.frame) {
    for (const auto& g : cell.gens)
      if (g.invertible)
        throw BadParameter(
            "frame cells with invertible coordinates are not supported");
    for (const auto& t : cell.frame->gens) {
      if (t.weight != 1)
        throw BadParameter("frame generator " + t.name +
                           " must have weight 1");
      specs.push_back(t);
    }
  } else {
    if (!cell.relations.empty())
      throw BadParameter(
          "cells with relations need an explicit frame for their forms");
    for (const auto& g : cell.gens) {
      specs.push_back({"d" + g.name, g.degree + 1, 1, false, g.size_weight});
      form_of[g.name] = "d" + g.name;
    }
  }

  std::string alg_name = cell.name.empty() ? "" : "DR(" + cell.name + ")";
  AlgebraPtr alg = AlgebraData::create(specs, cell.relations, alg_name);

  std::map<std::string, Element> d_images;
  int d_growth = 0;
  if (cell.frame) {
    for (const auto& [g, combo] : cell.frame->d_images) {
      Element img = eval_combo(alg, combo);
      d_growth = std::max(d_growth, growth_of_image(*alg, g, img));
      d_images[g] = std::move(img);
    }
  } else {
    for (const auto& g : cell.gens) {
      d_images[g.name] = Element::gen(alg, form_of[g.name]);
      if (g.invertible) d_growth = std::max(d_growth, 2 * g.size_weight);
    }
  }

  Derivation d(alg, "ddr", 1, 1, d_images);
  check_square_zero_on_gens(d, d, alg, "d_dR^2");

  std::optional<Derivation> internal;
  if (!cell.internal.empty()) {
    if (cell.internal_growth > 0)
      throw BadParameter("internal differential must not increase size");
    std::map<std::string, Element> imgs;
    for (const auto& [g, combo] : cell.internal) {
      Element img = eval_combo(alg, combo);
      if (growth_of_image(*alg, g, img) > cell.internal_growth)
        throw BadParameter("internal differential grows beyond declaration on " +
                           g);
      imgs[g] = std::move(img);
    }
    internal.emplace(alg, "del", 1, 0, imgs);
    check_square_zero_on_gens(*internal, *internal, alg, "del^2");
    check_square_zero_on_gens(*internal, d, alg, "del d_dR + d_dR del");
  }

  DeRhamAlgebra out{cell,     alg,      d, std::move(internal),
                    form_of,  d_growth};
  return out;
}

std::vector<WeightOp> DeRhamAlgebra::ops() const {
  std::vector<WeightOp> v;
  if (internal) {
    Derivation del = *internal;
    v.push_back({"del", 1, 0, cell.internal_growth,
                 [del](const Element& e) { return del(e); }});
  }
  Derivation dd = d;
  v.push_back({"ddr", 1, 1, d_growth, [dd](const Element& e) { return dd(e); }});
  return v;
}

MixedComplex DeRhamAlgebra::mixed() const {
  return {alg, alg->name().empty() ? "forms" : alg->name(), ops()};
}

FormClass classify_form(const Element& e) {
  auto bd = e.bidegree();
  if (!bd) throw NonHomogeneous("classify_form needs a bihomogeneous element");
  FormClass f;
  f.p = bd->second;
  f.n = bd->first - bd->second;
  return f;
}

Element dlog(const DeRhamAlgebra& dr, const Element& f) {
  if (f.is_zero()) throw NotInvertible("dlog of zero");
  if (f.num_terms() != 1)
    throw NotInvertible("dlog needs a single-term element");
  const auto& [m, c] = *f.terms().begin();
  (void)c;
  Element out = Element::zero(dr.alg);
  for (const auto& [gi, e] : m.entries()) {
    const GeneratorSpec& g = dr.alg->generator(gi);
    if (!g.invertible)
      throw NotInvertible("dlog argument has non-invertible factor " + g.name);
    auto it = dr.form_of.find(g.name);
    if (it == dr.form_of.end())
      throw NotInvertible("no coordinate form for " + g.name);
    out += Rational(e) * Element::gen(dr.alg, g.name, -1) *
           Element::gen(dr.alg, it->second);
  }
  return out;
}

Realization twisted_de_rham(const DeRhamAlgebra& dr, const Element& alpha,
                            const Window& w) {
  MixedComplex mc = dr.mixed();
  if (!alpha.is_zero()) {
    auto bd = alpha.bidegree();
    if (!bd || bd->first != 1 || bd->second != 1)
      throw BadParameter("twist must be a one-form of total degree 1");
    Element dalpha = dr.d(alpha);
    if (dr.internal) dalpha += (*dr.internal)(alpha);
    if (!dalpha.is_zero())
      throw AlphaNotClosed("twist is not closed: (del+d_dR)alpha = " +
                           dalpha.str());
    mc.name = "twisted " + mc.name;
    mc.ops.push_back({"alpha", 1, 1, alpha.max_size(),
                      [alpha](const Element& e) { return alpha * e; }});
  }
  return realize(mc, w);
}

Derivation contraction(const DeRhamAlgebra& dr, const VectorField& v) {
  if (!dr.coordinate())
    throw BadParameter("contraction needs a coordinate cell");
  int degree = -1;
  bool degree_known = false;
  std::map<std::string, Element> images;
  for (const auto& [g, f] : v.components) {
    auto it = dr.form_of.find(g);
    if (it == dr.form_of.end())
      throw UnknownGenerator("no coordinate named " + g);
    if (!f.is_zero()) {
      int dg = dr.alg->generator(dr.alg->index_of(it->second)).degree;
      if (!degree_known) {
        degree = f.degree() - dg;
        degree_known = true;
      }
    }
    images[it->second] = f;
  }
  std::string name = v.name.empty() ? "iota" : "iota_" + v.name;
  return Derivation(dr.alg, name, degree, -1, images);
}

Derivation lie_operator(const DeRhamAlgebra& dr, const VectorField& v) {
  std::string name = v.name.empty() ? "L" : "L_" + v.name;
  return Derivation::commutator(dr.d, contraction(dr, v), name);
}

Element lie_derivative(const DeRhamAlgebra& dr, const VectorField& v,
                       const Element& e) {
  Derivation iota = contraction(dr, v);
  return dr.d(iota(e)) + iota(dr.d(e));
}

MatrixOfForms maurer_cartan(const DeRhamAlgebra& dr, MaurerCartanSide side,
                            const std::string& suffix) {
  for (const char* e : kSl2Entries)
    if (!dr.alg->find(std::string(e) + suffix))
      throw UnsupportedGroup("maurer_cartan needs an SL2 cell");
  auto g = [&](const char* base) {
    return Element::gen(dr.alg, std::string(base) + suffix);
  };
  // g = [[a, b], [c, d]], adjugate = [[d, -b], [-c, a]] = g^{-1}.
  std::array<std::array<Element, 2>, 2> mat = {{{g("a"), g("b")},
                                                {g("c"), g("d")}}};
  std::array<std::array<Element, 2>, 2> inv = {{{g("d"), -g("b")},
                                                {-g("c"), g("a")}}};
  MatrixOfForms out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Element s = Element::zero(dr.alg);
      for (int k = 0; k < 2; ++k) {
        if (side == MaurerCartanSide::left)
          s += inv[i][k] * dr.d(mat[k][j]);
        else
          s += dr.d(mat[i][k]) * inv[k][j];
      }
      out[i][j] = s;
    }
  return out;
}

}  // namespace sgq
