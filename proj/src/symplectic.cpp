#include "sgq/symplectic.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "sgq/errors.hpp"

namespace sgq {

namespace {

WordCombo element_to_combo(const Element& e) {
  WordCombo out;
  for (const auto& [m, c] : e.terms()) {
    RelationSpec::Word w;
    for (const auto& [gi, ex] : m.entries())
      w.push_back({e.algebra()->generator(gi).name, ex});
    out.push_back({c, w});
  }
  return out;
}

std::vector<std::string> fiber_names(const AffineCell& base) {
  std::vector<std::string> out;
  if (base.gens.size() == 1) {
    out.push_back("p");
  } else {
    for (size_t i = 0; i < base.gens.size(); ++i)
      out.push_back("p" + std::to_string(i + 1));
  }
  return out;
}

bool is_constant(const Element& e) {
  if (e.is_zero()) return true;
  return e.num_terms() == 1 && e.terms().begin()->first.is_one();
}

void enumerate_functions(const AlgebraData& a, const std::vector<int>& gens,
                         size_t i, std::vector<Monomial::Entry>& cur,
                         int size_used, int max_size,
                         std::vector<Monomial>& out) {
  if (i == gens.size()) {
    Monomial m{std::vector<Monomial::Entry>(cur)};
    if (a.is_normal_form(m)) out.push_back(std::move(m));
    return;
  }
  int g = gens[i];
  const GeneratorSpec& spec = a.generator(g);
  enumerate_functions(a, gens, i + 1, cur, size_used, max_size, out);
  int par = parity_of_degree(spec.degree);
  int sw = spec.size_weight;
  if (par == 0 && sw == 0)
    throw BadParameter("function generator " + spec.name +
                       " has no size bound");
  int cap = par == 1 ? 1 : (max_size - size_used) / std::max(sw, 1);
  for (int e = 1; e <= cap; ++e) {
    cur.push_back({g, e});
    enumerate_functions(a, gens, i + 1, cur, size_used + e * sw, max_size, out);
    cur.pop_back();
  }
  if (spec.invertible) {
    for (int e = -1; -e <= cap; --e) {
      cur.push_back({g, e});
      enumerate_functions(a, gens, i + 1, cur, size_used - e * sw, max_size,
                          out);
      cur.pop_back();
    }
  }
}

std::vector<Monomial> function_basis(const AlgebraPtr& alg, int max_size) {
  std::vector<int> gens;
  for (int i = 0; i < alg->num_generators(); ++i)
    if (alg->generator(i).weight == 0) gens.push_back(i);
  std::vector<Monomial::Entry> cur;
  std::vector<Monomial> out;
  enumerate_functions(*alg, gens, 0, cur, 0, max_size, out);
  std::sort(out.begin(), out.end());
  return out;
}

struct ModuleGen {
  std::string label;
  int degree;
};

struct ModuleRealization {
  Complex complex;
  std::map<std::pair<int, int>, std::pair<int, int>> index;
};

ModuleRealization realize_module(const AlgebraPtr& alg,
                                 const std::vector<Monomial>& basis,
                                 const std::vector<ModuleGen>& gens,
                                 const Window& w, const std::string& name) {
  std::map<int, std::vector<std::pair<int, int>>> by_deg;
  bool clipped = false;
  for (int gi = 0; gi < static_cast<int>(gens.size()); ++gi) {
    for (int mi = 0; mi < static_cast<int>(basis.size()); ++mi) {
      int d = alg->degree_of(basis[mi]) + gens[gi].degree;
      if (d < w.deg_min || d > w.deg_max) {
        clipped = true;
        continue;
      }
      by_deg[d].push_back({mi, gi});
    }
  }
  ModuleRealization out;
  out.complex.name = name;
  if (by_deg.empty()) {
    if (gens.empty()) {
      out.complex.deg_lo = w.deg_min;
      out.complex.labels = {{}};
      out.complex.complete = true;
      return out;
    }
    throw WindowTooSmall("module " + name + " misses the degree window");
  }
  int lo = by_deg.begin()->first;
  int hi = by_deg.rbegin()->first;
  out.complex.deg_lo = lo;
  out.complex.complete = !clipped;
  for (int d = lo; d <= hi; ++d) {
    std::vector<std::string> labels;
    auto it = by_deg.find(d);
    if (it != by_deg.end()) {
      for (const auto& [mi, gi] : it->second) {
        int slot = d - lo;
        out.index[{mi, gi}] = {slot, static_cast<int>(labels.size())};
        labels.push_back(alg->to_string(basis[mi]) + " " + gens[gi].label);
      }
    }
    out.complex.labels.push_back(std::move(labels));
    if (d < hi)
      out.complex.diff.push_back(SparseMat(0, 0));
  }
  // fix up zero differentials to the right shapes
  for (int k = 0; k + 1 < static_cast<int>(out.complex.labels.size()); ++k)
    out.complex.diff[k] =
        SparseMat(static_cast<int>(out.complex.labels[k + 1].size()),
                  static_cast<int>(out.complex.labels[k].size()));
  return out;
}

}  // namespace

std::map<std::string, Element> one_form_components(const Element& alpha) {
  const AlgebraPtr& alg = alpha.algebra();
  std::map<std::string, Element> out;
  for (const auto& [m, c] : alpha.terms()) {
    int found = -1;
    for (const auto& [gi, e] : m.entries()) {
      int wt = alg->generator(gi).weight;
      if (wt == 0) continue;
      if (wt != 1 || e != 1 || found >= 0)
        throw BadParameter("element is not a one-form: " + alpha.str());
      found = gi;
    }
    if (found < 0)
      throw BadParameter("element is not a one-form: " + alpha.str());
    std::vector<Monomial::Entry> rest;
    for (const auto& en : m.entries())
      if (en.first != found) rest.push_back(en);
    Monomial rm{std::move(rest)};
    auto prod = monomial_mul(rm, Monomial{{{found, 1}}}, alg->parities());
    const std::string& name = alg->generator(found).name;
    auto it = out.find(name);
    if (it == out.end()) it = out.emplace(name, Element::zero(alg)).first;
    it->second += Element::from_monomial(alg, rm, c * prod->sign);
  }
  return out;
}

namespace {

SymplecticCell build_cotangent(const AffineCell& base, int n,
                               const std::vector<int>& fiber_sizes);

}  // namespace

SymplecticCell shifted_cotangent(const AffineCell& base, int n) {
  std::vector<int> sizes;
  for (const auto& g : base.gens) sizes.push_back(g.size_weight);
  return build_cotangent(base, n, sizes);
}

namespace {

SymplecticCell build_cotangent(const AffineCell& base, int n,
                               const std::vector<int>& fiber_sizes) {
  if (!base.relations.empty() || base.frame)
    throw RelationalBaseUnsupported(
        "shifted cotangents need a free coordinate base");
  AffineCell total;
  total.name = (n == 0 ? "T*" : "T*[" + std::to_string(n) + "]") + base.name;
  total.gens = base.gens;
  std::vector<std::string> fn = fiber_names(base);
  for (size_t i = 0; i < base.gens.size(); ++i)
    total.gens.push_back({fn[i], n - base.gens[i].degree, false,
                          fiber_sizes[i]});
  total.internal = base.internal;
  total.internal_growth = base.internal_growth;

  SymplecticCell sc{de_rham(total), {}, fn, Element(), Element(), n};
  for (const auto& g : base.gens) sc.base.push_back(g.name);
  sc.lambda = Element::zero(sc.dr.alg);
  for (size_t i = 0; i < fn.size(); ++i)
    sc.lambda += Element::gen(sc.dr.alg, fn[i]) *
                 Element::gen(sc.dr.alg, sc.dr.form_of.at(sc.base[i]));
  sc.omega = sc.dr.d(sc.lambda);

  FormClass lc = classify_form(sc.lambda);
  FormClass oc = classify_form(sc.omega);
  if (lc.p != 1 || lc.n != n || oc.p != 2 || oc.n != n)
    throw BadParameter("cotangent grading is inconsistent");
  if (!sc.dr.d(sc.omega).is_zero())
    throw BadParameter("cotangent two-form is not closed");
  return sc;
}

}  // namespace

SymplecticCell magnetic_cotangent(const DeRhamAlgebra& base_dr,
                                  const Element& b_form) {
  SymplecticCell sc = shifted_cotangent(base_dr.cell, 0);
  if (!b_form.is_zero()) {
    auto bd = b_form.bidegree();
    if (!bd || bd->second != 2 || bd->first != 2)
      throw NotTwoForm("magnetic term must be a two-form of degree 0");
    if (!base_dr.d(b_form).is_zero())
      throw AlphaNotClosed("magnetic term is not closed: d = " +
                           base_dr.d(b_form).str());
    AlgebraMap pullback(base_dr.alg, sc.dr.alg, "pullback", {});
    sc.omega += pullback(b_form);
  }
  return sc;
}

SymplecticCell derived_critical_locus(const DeRhamAlgebra& base_dr,
                                      const Element& potential) {
  if (!potential.is_zero()) {
    auto bd = potential.bidegree();
    if (!bd || bd->first != 0 || bd->second != 0)
      throw BadParameter("potential must be a degree zero function");
  }
  return twisted_cotangent(base_dr, base_dr.d(potential), -1);
}

SymplecticCell twisted_cotangent(const DeRhamAlgebra& base_dr,
                                 const Element& alpha, int n) {
  if (n == 0) return magnetic_cotangent(base_dr, alpha);
  if (n != -1)
    throw UnsupportedShift("twisted cotangents are built for n = 0 or n = -1");
  if (!base_dr.coordinate() || !base_dr.cell.relations.empty())
    throw RelationalBaseUnsupported(
        "twisted cotangents need a free coordinate base");

  AffineCell base = base_dr.cell;
  std::vector<int> fiber_sizes;
  for (const auto& g : base.gens) fiber_sizes.push_back(g.size_weight);
  if (!alpha.is_zero()) {
    Element closed = base_dr.d(alpha);
    if (!closed.is_zero())
      throw AlphaNotClosed("twist is not closed: d = " + closed.str());
    std::map<std::string, Element> comps = one_form_components(alpha);
    std::vector<std::string> fn = fiber_names(base);
    for (size_t i = 0; i < base.gens.size(); ++i) {
      auto it = comps.find(base_dr.form_of.at(base.gens[i].name));
      if (it == comps.end() || it->second.is_zero()) continue;
      const Element& ai = it->second;
      fiber_sizes[i] = std::max(1, ai.max_size());
      base.internal[fn[i]] = element_to_combo(ai);
      base.internal["d" + fn[i]] = element_to_combo(-base_dr.d(ai));
    }
  }
  return build_cotangent(base, -1, fiber_sizes);
}

std::vector<std::vector<Element>> omega_sharp_matrix(const DeRhamAlgebra& dr,
                                                     const Element& omega) {
  if (!omega.is_zero()) {
    auto bd = omega.bidegree();
    if (!bd || bd->second != 2)
      throw NotTwoForm("pairing needs a two-form, got " + omega.str());
  }
  int k = static_cast<int>(dr.cell.gens.size());
  std::vector<std::vector<Element>> mat(
      k, std::vector<Element>(k, Element::zero(dr.alg)));
  for (int j = 0; j < k; ++j) {
    const std::string& g = dr.cell.gens[j].name;
    VectorField unit{g, {{g, Element::constant(dr.alg, 1)}}};
    Element contracted = contraction(dr, unit)(omega);
    if (contracted.is_zero()) continue;
    std::map<std::string, Element> comps = one_form_components(contracted);
    for (int i = 0; i < k; ++i) {
      auto it = comps.find(dr.form_of.at(dr.cell.gens[i].name));
      if (it != comps.end()) mat[i][j] = it->second;
    }
  }
  return mat;
}

Element determinant(const std::vector<std::vector<Element>>& m) {
  size_t n = m.size();
  if (n == 0) throw BadParameter("determinant of an empty matrix");
  const AlgebraPtr& alg = m[0][0].algebra();
  for (const auto& row : m)
    for (const auto& e : row) {
      auto bd = e.bidegree();
      if (!e.is_zero() && bd && parity_of_degree(bd->first) == 1)
        throw BadParameter("determinant needs even entries");
    }
  std::function<Element(std::vector<int>, std::vector<int>)> go =
      [&](std::vector<int> rows, std::vector<int> cols) -> Element {
    if (rows.empty()) return Element::constant(alg, 1);
    Element acc = Element::zero(alg);
    int r0 = rows[0];
    std::vector<int> sub_rows(rows.begin() + 1, rows.end());
    for (size_t j = 0; j < cols.size(); ++j) {
      const Element& piv = m[r0][cols[j]];
      if (piv.is_zero()) continue;
      std::vector<int> sub_cols;
      for (size_t t = 0; t < cols.size(); ++t)
        if (t != j) sub_cols.push_back(cols[t]);
      Element minor = go(sub_rows, sub_cols);
      Element term = piv * minor;
      acc += (j % 2 == 0) ? term : -term;
    }
    return acc;
  };
  std::vector<int> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = static_cast<int>(i);
  return go(idx, idx);
}

bool is_unit(const Element& e) {
  if (e.num_terms() != 1) return false;
  const Monomial& m = e.terms().begin()->first;
  for (const auto& [gi, ex] : m.entries()) {
    (void)ex;
    if (!e.algebra()->generator(gi).invertible) return false;
  }
  return true;
}

CheckReport check_nondegenerate(const DeRhamAlgebra& dr,
                                const Element& omega) {
  CheckReport r;
  r.scenario = "nondegeneracy";
  r.windowed = false;
  auto mat = omega_sharp_matrix(dr, omega);
  Element det = determinant(mat);
  if (is_unit(det)) {
    r.verdict = Verdict::PASS;
    r.statement = "pairing matrix is invertible over the functions (det = " +
                  det.str() + ")";
  } else {
    r.verdict = Verdict::FAIL;
    r.statement = "pairing matrix determinant is not a unit";
    r.witness = det.str();
  }
  return r;
}

CheckReport check_nondegenerate(const SymplecticCell& cell) {
  return check_nondegenerate(cell.dr, cell.omega);
}

CheckReport check_lagrangian_fibration(const SymplecticCell& cell,
                                       const std::vector<std::string>& projection,
                                       const Window& w) {
  const AlgebraPtr& alg = cell.dr.alg;
  CheckReport r;
  r.scenario = "lagrangian-fibration";
  r.window = w;

  std::map<std::string, Element> kill;
  for (const auto& b : projection) {
    auto it = cell.dr.form_of.find(b);
    if (it == cell.dr.form_of.end())
      throw UnknownGenerator("projection coordinate " + b + " is unknown");
    kill[it->second] = Element::zero(alg);
  }
  AlgebraMap restrict_map(alg, alg, "relative", kill);
  Element rel = restrict_map(cell.omega);
  if (!rel.is_zero()) {
    r.verdict = Verdict::FAIL;
    r.statement = "two-form does not vanish on the fibers";
    r.witness = rel.str();
    return r;
  }

  auto in_projection = [&projection](const std::string& g) {
    return std::find(projection.begin(), projection.end(), g) !=
           projection.end();
  };

  int k = static_cast<int>(cell.dr.cell.gens.size());
  auto pairing = omega_sharp_matrix(cell.dr, cell.omega);

  std::vector<ModuleGen> tangent_all, tangent_fiber, forms_rel;
  std::vector<int> fiber_cols, rel_rows;
  for (int i = 0; i < k; ++i) {
    const auto& g = cell.dr.cell.gens[i];
    ModuleGen tg{"tan " + g.name, -g.degree};
    tangent_all.push_back(tg);
    if (!in_projection(g.name)) {
      tangent_fiber.push_back(tg);
      fiber_cols.push_back(i);
      forms_rel.push_back({"form " + g.name, g.degree - cell.shift});
      rel_rows.push_back(i);
    }
  }

  for (int i : rel_rows)
    for (int j = 0; j < k; ++j)
      if (!is_constant(pairing[i][j]))
        throw WindowTooSmall(
            "pairing block is not constant; module window is unreliable");

  std::vector<Monomial> basis = function_basis(alg, w.size_bound);
  ModuleRealization tf =
      realize_module(alg, basis, tangent_fiber, w, "fiber tangents");
  ModuleRealization ta =
      realize_module(alg, basis, tangent_all, w, "tangents");
  ModuleRealization lr =
      realize_module(alg, basis, forms_rel, w, "relative forms");

  ChainMap incl{&tf.complex, &ta.complex, {}, "include"};
  incl.mats.assign(tf.complex.slots(), SparseMat(0, 0));
  for (int s = 0; s < tf.complex.slots(); ++s)
    incl.mats[s] =
        SparseMat(ta.complex.dim(tf.complex.deg_lo + s),
                  static_cast<int>(tf.complex.labels[s].size()));
  for (const auto& [key, pos] : tf.index) {
    auto [mi, gi] = key;
    auto it = ta.index.find({mi, fiber_cols[gi]});
    if (it == ta.index.end())
      throw WindowTooSmall("tangent inclusion escapes the window");
    incl.mats[pos.first].add_entry(it->second.second, pos.second, 1);
  }

  ChainMap sharp{&ta.complex, &lr.complex, {}, "pairing"};
  sharp.mats.assign(ta.complex.slots(), SparseMat(0, 0));
  for (int s = 0; s < ta.complex.slots(); ++s)
    sharp.mats[s] =
        SparseMat(lr.complex.dim(ta.complex.deg_lo + s),
                  static_cast<int>(ta.complex.labels[s].size()));
  for (const auto& [key, pos] : ta.index) {
    auto [mi, gi] = key;
    for (int rr = 0; rr < static_cast<int>(rel_rows.size()); ++rr) {
      const Element& entry = pairing[rel_rows[rr]][gi];
      if (entry.is_zero()) continue;
      Rational c = entry.terms().begin()->second;
      auto it = lr.index.find({mi, rr});
      if (it == lr.index.end())
        throw WindowTooSmall("pairing image escapes the window");
      int src_degree = ta.complex.deg_lo + pos.first;
      int tgt_degree = lr.complex.deg_lo + it->second.first;
      if (src_degree != tgt_degree)
        throw WindowTooSmall("pairing image shifts degree unexpectedly");
      sharp.mats[pos.first].add_entry(it->second.second, pos.second, c);
    }
  }

  try {
    SequenceResult res = is_fiber_sequence(incl, sharp);
    if (res.ok) {
      r.verdict = Verdict::PASS;
      r.statement = "relative tangents, tangents and relative forms form an "
                    "exact triple";
    } else {
      r.verdict = Verdict::FAIL;
      r.statement = "module sequence is not exact";
      r.witness = res.witness;
    }
  } catch (const NonZeroComposite& e) {
    r.verdict = Verdict::FAIL;
    r.statement = "fiber directions are not isotropic";
    r.witness = e.what();
  }
  return r;
}

CheckReport parity_obstruction(const std::map<int, int>& tangent_dims,
                               const std::optional<std::map<int, int>>& fiber_dims,
                               int n) {
  if (((n % 2) + 2) % 2 != 0)
    throw OddShift("parity obstruction applies to even shifts only");
  auto euler = [](const std::map<int, int>& dims) {
    int chi = 0;
    for (const auto& [d, m] : dims) chi += (d % 2 == 0 ? m : -m);
    return chi;
  };
  int chi_total = euler(tangent_dims);
  CheckReport r;
  r.scenario = "parity-obstruction";
  r.windowed = false;
  std::ostringstream os;
  if (fiber_dims) {
    int chi_fiber = euler(*fiber_dims);
    bool ok = chi_total == 2 * chi_fiber;
    r.verdict = ok ? Verdict::PASS : Verdict::FAIL;
    os << "virtual dimension " << chi_total << " vs twice the fiber dimension "
       << 2 * chi_fiber;
    if (!ok) r.witness = "dimension identity fails";
  } else {
    bool even = ((chi_total % 2) + 2) % 2 == 0;
    r.verdict = even ? Verdict::PASS : Verdict::FAIL;
    os << "virtual dimension " << chi_total
       << (even ? " is even" : " is odd, excluding any Lagrangian fibration");
    if (!even) r.witness = "odd virtual dimension";
  }
  r.statement = os.str();
  return r;
}

CheckReport liouville_pullback_check(const DeRhamAlgebra& base_dr,
                                     const Element& alpha,
                                     std::optional<int> shift) {
  int n = 0;
  if (shift) {
    n = *shift;
  } else if (!alpha.is_zero()) {
    auto bd = alpha.bidegree();
    if (!bd || bd->second != 1)
      throw BadParameter("graph needs a homogeneous one-form");
    n = bd->first - 1;
  }
  SymplecticCell sc = shifted_cotangent(base_dr.cell, n);
  std::map<std::string, Element> comps =
      alpha.is_zero() ? std::map<std::string, Element>{}
                      : one_form_components(alpha);
  std::map<std::string, Element> values;
  for (size_t i = 0; i < sc.base.size(); ++i) {
    auto it = comps.find(base_dr.form_of.at(sc.base[i]));
    Element coeff = it == comps.end() ? Element::zero(base_dr.alg) : it->second;
    values[sc.fiber[i]] = coeff;
    values["d" + sc.fiber[i]] = base_dr.d(coeff);
  }
  AlgebraMap graph(sc.dr.alg, base_dr.alg, "graph", values);

  CheckReport r;
  r.scenario = "liouville-graph";
  r.windowed = false;
  Element lam = graph(sc.lambda);
  Element om = graph(sc.omega);
  Element want_om = base_dr.d(alpha);
  bool ok1 = lam == alpha;
  bool ok2 = om == want_om;
  if (ok1 && ok2) {
    r.verdict = Verdict::PASS;
    r.statement =
        "graph pullback returns the one-form and its exterior derivative";
  } else {
    r.verdict = Verdict::FAIL;
    r.statement = "graph pullback disagrees";
    r.witness = (lam - alpha).str() + " ; " + (om - want_om).str();
  }
  return r;
}

}  // namespace sgq
