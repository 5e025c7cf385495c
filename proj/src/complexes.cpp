#include "sgq/complexes.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <sstream>

#include "sgq/errors.hpp"

namespace sgq {

namespace {

int ceil_div(int a, int b) {
  // b > 0 only
  if (a >= 0) return (a + b - 1) / b;
  return -((-a) / b);
}

}  // namespace

std::string Window::str() const {
  std::ostringstream os;
  os << "d:[" << deg_min << "," << deg_max << "] w:[" << weight_min << ","
     << weight_max << "] N=" << size_bound;
  return os.str();
}

int Complex::dim(int degree) const {
  if (!has_degree(degree)) return 0;
  return static_cast<int>(labels[slot_of(degree)].size());
}

const SparseMat* Complex::diff_from(int degree) const {
  int k = slot_of(degree);
  if (k < 0 || k + 1 >= slots()) return nullptr;
  return &diff[k];
}

bool Complex::degree_definitive(int degree) const {
  if (complete) return true;
  return degree > deg_lo && degree < deg_hi();
}

void Complex::verify_square_zero() const {
  for (int k = 0; k + 1 < static_cast<int>(diff.size()); ++k) {
    SparseMat prod = SparseMat::mul(diff[k + 1], diff[k]);
    if (!prod.is_zero())
      throw NotSquareZero(name + " at degree " + std::to_string(deg_lo + k));
  }
}

std::string Complex::describe(int degree, const SparseVec& v) const {
  if (v.empty()) return "0";
  const auto& lab = labels[slot_of(degree)];
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, c] : v) {
    if (!first) os << " + ";
    first = false;
    os << c.str() << " * " << lab[i];
  }
  return os.str();
}

CohomologyGroup cohomology(const Complex& c, int degree) {
  CohomologyGroup out;
  out.degree = degree;
  out.definitive = c.degree_definitive(degree);
  int n = c.dim(degree);
  if (n == 0) return out;

  std::vector<SparseVec> cocycles;
  if (const SparseMat* d_out = c.diff_from(degree)) {
    cocycles = kernel_basis(*d_out);
  } else {
    for (int i = 0; i < n; ++i) cocycles.push_back({{i, 1}});
  }

  Echelon image;
  if (c.has_degree(degree - 1)) {
    if (const SparseMat* d_in = c.diff_from(degree - 1)) {
      for (const auto& col : d_in->col) image.add(col);
    }
  }

  std::vector<SparseVec> candidates;
  for (const auto& z : cocycles) {
    SparseVec r = image.reduce(z);
    if (r.empty()) continue;
    r = sparse_scale(r, Rational(1) / r.front().second);
    candidates.push_back(std::move(r));
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const SparseVec& a, const SparseVec& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  Echelon picked;
  for (auto& r : candidates) {
    SparseVec copy = r;
    if (picked.add(std::move(copy))) out.reps.push_back(std::move(r));
  }
  out.dim = static_cast<int>(out.reps.size());
  return out;
}

const SparseMat* ChainMap::mat_at(int degree) const {
  int k = src->slot_of(degree);
  if (k < 0 || k >= static_cast<int>(mats.size())) return nullptr;
  return &mats[k];
}

void verify_chain_map(const ChainMap& f) {
  for (int d = f.src->deg_lo; d <= f.src->deg_hi(); ++d) {
    // d_tgt . f_d must equal f_{d+1} . d_src wherever both sides exist.
    const SparseMat* fd = f.mat_at(d);
    const SparseMat* dsrc = f.src->diff_from(d);
    const SparseMat* dtgt = f.tgt->diff_from(d);

    SparseMat lhs(f.tgt->dim(d + 1), f.src->dim(d));
    if (dtgt && fd && f.tgt->has_degree(d)) lhs = SparseMat::mul(*dtgt, *fd);
    SparseMat rhs(f.tgt->dim(d + 1), f.src->dim(d));
    if (dsrc) {
      const SparseMat* fd1 = f.mat_at(d + 1);
      if (fd1 && f.tgt->has_degree(d + 1)) rhs = SparseMat::mul(*fd1, *dsrc);
    }
    for (int j = 0; j < lhs.cols; ++j) {
      SparseVec delta = sparse_axpy(lhs.col[j], -1, rhs.col[j]);
      if (!delta.empty())
        throw NotChainMap(f.name + " at degree " + std::to_string(d));
    }
  }
}

namespace {

// Mapping cone of f: slot n holds tgt^n + src^{n+1} with differential
// (b, a) -> (d b + f a, -d a).
Complex build_cone(const ChainMap& f) {
  const Complex& A = *f.src;
  const Complex& B = *f.tgt;
  Complex cone;
  cone.name = "cone(" + f.name + ")";
  cone.complete = A.complete && B.complete;
  int lo = std::min(B.deg_lo, A.deg_lo - 1);
  int hi = std::max(B.deg_hi(), A.deg_hi() - 1);
  cone.deg_lo = lo;
  for (int n = lo; n <= hi; ++n) {
    std::vector<std::string> lab;
    for (int i = 0; i < B.dim(n); ++i)
      lab.push_back("tgt " + B.labels[B.slot_of(n)][i]);
    for (int i = 0; i < A.dim(n + 1); ++i)
      lab.push_back("src " + A.labels[A.slot_of(n + 1)][i]);
    cone.labels.push_back(std::move(lab));
  }
  for (int n = lo; n < hi; ++n) {
    int rows = B.dim(n + 1) + A.dim(n + 2);
    int cols = B.dim(n) + A.dim(n + 1);
    SparseMat m(rows, cols);
    if (const SparseMat* db = B.diff_from(n)) {
      for (int j = 0; j < db->cols; ++j)
        for (const auto& [i, v] : db->col[j]) m.add_entry(i, j, v);
    }
    int coff = B.dim(n);
    if (const SparseMat* fm = f.mat_at(n + 1)) {
      if (B.has_degree(n + 1))
        for (int j = 0; j < fm->cols; ++j)
          for (const auto& [i, v] : fm->col[j]) m.add_entry(i, coff + j, v);
    }
    int roff = B.dim(n + 1);
    if (const SparseMat* da = A.diff_from(n + 1)) {
      for (int j = 0; j < da->cols; ++j)
        for (const auto& [i, v] : da->col[j])
          m.add_entry(roff + i, coff + j, -v);
    }
    cone.diff.push_back(std::move(m));
  }
  return cone;
}

}  // namespace

SequenceResult is_quasi_iso(const ChainMap& f) {
  verify_chain_map(f);
  Complex cone = build_cone(f);
  int checked = 0;
  for (int n = cone.deg_lo; n <= cone.deg_hi(); ++n) {
    if (!(f.tgt->degree_definitive(n) && f.src->degree_definitive(n + 1)))
      continue;
    ++checked;
    CohomologyGroup h = cohomology(cone, n);
    if (h.dim > 0) {
      return {false, "cone class at degree " + std::to_string(n) + ": " +
                         cone.describe(n, h.reps.front())};
    }
  }
  if (checked == 0)
    throw WindowTooSmall("no certifiable degree for " + f.name);
  return {true, ""};
}

SequenceResult is_fiber_sequence(const ChainMap& f, const ChainMap& g) {
  if (f.tgt != g.src)
    throw AlgebraMismatch("maps do not compose");
  verify_chain_map(f);
  verify_chain_map(g);
  for (int d = f.src->deg_lo; d <= f.src->deg_hi(); ++d) {
    const SparseMat* fd = f.mat_at(d);
    const SparseMat* gd = g.mat_at(d);
    if (!fd || !gd || !f.tgt->has_degree(d) || !g.tgt->has_degree(d)) continue;
    SparseMat comp = SparseMat::mul(*gd, *fd);
    if (!comp.is_zero())
      throw NonZeroComposite(f.name + " then " + g.name + " at degree " +
                             std::to_string(d));
  }

  const Complex& A = *f.src;
  const Complex& B = *f.tgt;
  const Complex& C = *g.tgt;
  Complex tot;
  tot.name = "total(" + f.name + "," + g.name + ")";
  tot.complete = A.complete && B.complete && C.complete;
  int lo = std::min({A.deg_lo, B.deg_lo + 1, C.deg_lo + 2});
  int hi = std::max({A.deg_hi(), B.deg_hi() + 1, C.deg_hi() + 2});
  tot.deg_lo = lo;
  auto dims = [&](int n) {
    return std::array<int, 3>{A.dim(n), B.dim(n - 1), C.dim(n - 2)};
  };
  for (int n = lo; n <= hi; ++n) {
    std::vector<std::string> lab;
    for (int i = 0; i < A.dim(n); ++i)
      lab.push_back("fib " + A.labels[A.slot_of(n)][i]);
    for (int i = 0; i < B.dim(n - 1); ++i)
      lab.push_back("mid " + B.labels[B.slot_of(n - 1)][i]);
    for (int i = 0; i < C.dim(n - 2); ++i)
      lab.push_back("base " + C.labels[C.slot_of(n - 2)][i]);
    tot.labels.push_back(std::move(lab));
  }
  for (int n = lo; n < hi; ++n) {
    auto [na, nb, nc] = dims(n);
    auto [ma, mb, mc] = dims(n + 1);
    SparseMat m(ma + mb + mc, na + nb + nc);
    // (a, b, c) -> (da a, f a - db b, g b + dc c)
    if (const SparseMat* da = A.diff_from(n))
      for (int j = 0; j < da->cols; ++j)
        for (const auto& [i, v] : da->col[j]) m.add_entry(i, j, v);
    if (const SparseMat* fm = f.mat_at(n))
      if (B.has_degree(n))
        for (int j = 0; j < fm->cols; ++j)
          for (const auto& [i, v] : fm->col[j]) m.add_entry(ma + i, j, v);
    if (const SparseMat* db = B.diff_from(n - 1))
      for (int j = 0; j < db->cols; ++j)
        for (const auto& [i, v] : db->col[j])
          m.add_entry(ma + i, na + j, -v);
    if (const SparseMat* gm = g.mat_at(n - 1))
      if (C.has_degree(n - 1))
        for (int j = 0; j < gm->cols; ++j)
          for (const auto& [i, v] : gm->col[j])
            m.add_entry(ma + mb + i, na + j, v);
    if (const SparseMat* dc = C.diff_from(n - 2))
      for (int j = 0; j < dc->cols; ++j)
        for (const auto& [i, v] : dc->col[j])
          m.add_entry(ma + mb + i, na + nb + j, v);
    tot.diff.push_back(std::move(m));
  }
  tot.verify_square_zero();

  int checked = 0;
  for (int n = lo; n <= hi; ++n) {
    if (!(A.degree_definitive(n) && B.degree_definitive(n - 1) &&
          C.degree_definitive(n - 2)))
      continue;
    ++checked;
    CohomologyGroup h = cohomology(tot, n);
    if (h.dim > 0) {
      return {false, "total class at degree " + std::to_string(n) + ": " +
                         tot.describe(n, h.reps.front())};
    }
  }
  if (checked == 0)
    throw WindowTooSmall("no certifiable degree for " + tot.name);
  return {true, ""};
}

Element Realization::to_element(int degree, const SparseVec& v) const {
  Element out = Element::zero(alg);
  const auto& b = basis[complex.slot_of(degree)];
  for (const auto& [i, c] : v)
    out += Element::from_monomial(alg, b[i], c);
  return out;
}

std::optional<SparseVec> Realization::to_vector(const Element& e,
                                                int* degree_out) const {
  std::map<int, std::map<int, Rational>> rows;
  int degree = 0;
  bool seen = false;
  for (const auto& [m, c] : e.terms()) {
    auto it = index.find(m);
    if (it == index.end()) return std::nullopt;
    int d = complex.deg_lo + it->second.first;
    if (!seen) {
      degree = d;
      seen = true;
    } else if (d != degree) {
      return std::nullopt;
    }
    rows[d][it->second.second] = c;
  }
  if (!seen) return std::nullopt;
  SparseVec v;
  for (const auto& [i, c] : rows[degree]) v.emplace_back(i, c);
  if (degree_out) *degree_out = degree;
  return v;
}

int Realization::total_dim() const {
  int n = 0;
  for (const auto& b : basis) n += static_cast<int>(b.size());
  return n;
}

namespace {

void enumerate_rec(const AlgebraData& alg, int gen, int weight_cap,
                   int size_cap, int w_so_far, int s_so_far,
                   std::vector<Monomial::Entry>* cur,
                   std::vector<Monomial>* out) {
  if (gen == alg.num_generators()) {
    out->push_back(Monomial(*cur));
    return;
  }
  const auto& spec = alg.generator(gen);
  int parity = alg.parities()[gen];

  auto try_exp = [&](int e) {
    int w = w_so_far + spec.weight * e;
    int s = s_so_far + spec.size_weight * (e < 0 ? -e : e);
    if (w > weight_cap || s > size_cap) return;
    if (e != 0) cur->emplace_back(gen, e);
    enumerate_rec(alg, gen + 1, weight_cap, size_cap, w, s, cur, out);
    if (e != 0) cur->pop_back();
  };

  int max_e;
  if (parity == 1) {
    max_e = 1;
  } else {
    max_e = INT32_MAX;
    if (spec.weight > 0)
      max_e = (weight_cap - w_so_far) / spec.weight;
    if (spec.size_weight > 0)
      max_e = std::min(max_e, (size_cap - s_so_far) / spec.size_weight);
  }
  for (int e = 0; e <= max_e; ++e) try_exp(e);
  if (spec.invertible)
    for (int e = -1; e >= -max_e; --e) try_exp(e);
}

}  // namespace

Realization realize(const MixedComplex& mc, const Window& w,
                    bool check_square_zero) {
  if (!mc.alg) throw BadParameter("mixed complex without algebra");
  for (const auto& g : mc.alg->generators()) {
    if (g.weight < 0)
      throw BadParameter("negative weight generator " + g.name);
    if (g.weight == 0 && g.size_weight == 0)
      throw BadParameter("generator " + g.name + " admits no bound");
    if (g.invertible && g.weight != 0)
      throw BadParameter("invertible generator " + g.name + " carries weight");
  }
  int slope = 0;
  bool have_raising = false;
  for (const auto& op : mc.ops) {
    if (op.delta_degree != 1)
      throw BadParameter("operator " + op.name + " must raise degree by one");
    if (op.delta_weight < 0)
      throw BadParameter("operator " + op.name + " lowers weight");
    if (op.delta_weight == 0 && op.max_delta_size > 0)
      throw BadParameter("internal operator " + op.name + " grows size");
    if (op.delta_weight >= 1) {
      int s = ceil_div(op.max_delta_size, op.delta_weight);
      slope = have_raising ? std::max(slope, s) : s;
      have_raising = true;
    }
  }
  if (!have_raising) slope = 0;

  Realization r;
  r.alg = mc.alg;
  r.window = w;
  r.slope = slope;

  int span = w.weight_max - w.weight_min;
  int size_cap = w.size_bound + std::max(0, slope) * span;
  std::vector<Monomial> all;
  std::vector<Monomial::Entry> cur;
  enumerate_rec(*mc.alg, 0, w.weight_max, size_cap, 0, 0, &cur, &all);

  std::map<int, std::vector<Monomial>> by_degree;
  for (const auto& m : all) {
    int mw = mc.alg->weight_of(m);
    if (mw < w.weight_min) continue;
    if (mc.alg->size_of(m) > w.size_bound + slope * (mw - w.weight_min))
      continue;
    int d = mc.alg->degree_of(m);
    if (d < w.deg_min || d > w.deg_max) continue;
    if (!mc.alg->is_normal_form(m)) continue;
    by_degree[d].push_back(m);
  }

  r.complex.name = mc.name + " | " + w.str();
  if (by_degree.empty()) {
    r.complex.deg_lo = 0;
    r.complex.complete = true;
    return r;
  }
  int lo = by_degree.begin()->first;
  int hi = by_degree.rbegin()->first;
  r.complex.deg_lo = lo;
  r.complex.complete = lo > w.deg_min && hi < w.deg_max;
  for (int d = lo; d <= hi; ++d) {
    auto& ms = by_degree[d];
    std::sort(ms.begin(), ms.end());
    std::vector<std::string> lab;
    for (int i = 0; i < static_cast<int>(ms.size()); ++i) {
      r.index[ms[i]] = {d - lo, i};
      lab.push_back(mc.alg->to_string(ms[i]));
    }
    r.basis.push_back(std::move(ms));
    r.complex.labels.push_back(std::move(lab));
  }

  for (int d = lo; d < hi; ++d) {
    int k = d - lo;
    SparseMat m(r.complex.dim(d + 1), r.complex.dim(d));
    for (int j = 0; j < static_cast<int>(r.basis[k].size()); ++j) {
      const Monomial& src = r.basis[k][j];
      Element x = Element::from_monomial(mc.alg, src);
      int src_size = mc.alg->size_of(src);
      for (const auto& op : mc.ops) {
        Element img = op.apply(x);
        for (const auto& [t, c] : img.terms()) {
          if (mc.alg->size_of(t) - src_size > op.max_delta_size)
            throw BadParameter("operator " + op.name +
                               " exceeds declared size growth on " +
                               mc.alg->to_string(src));
          if (mc.alg->weight_of(t) > w.weight_max) continue;
          int td = mc.alg->degree_of(t);
          if (td > w.deg_max) continue;
          auto it = r.index.find(t);
          if (it == r.index.end())
            throw WindowTooSmall("image term " + mc.alg->to_string(t) +
                                 " of " + op.name + " escapes the window");
          m.add_entry(it->second.second, j, c);
        }
      }
    }
    r.complex.diff.push_back(std::move(m));
  }
  // Top-degree images would land beyond the stored span; nothing to record,
  // completeness already reflects whether that can happen.

  if (check_square_zero) {
    size_t nops = mc.ops.size();
    for (const auto& slot : r.basis) {
      for (const auto& mono : slot) {
        Element x = Element::from_monomial(mc.alg, mono);
        std::vector<Element> first;
        first.reserve(nops);
        for (const auto& op : mc.ops) first.push_back(op.apply(x));
        std::map<int, Element> buckets;
        for (size_t i = 0; i < nops; ++i)
          for (size_t j = 0; j < nops; ++j) {
            int dw = mc.ops[i].delta_weight + mc.ops[j].delta_weight;
            buckets[dw] += mc.ops[i].apply(first[j]);
          }
        for (const auto& [dw, total] : buckets)
          if (!total.is_zero())
            throw NotSquareZero(mc.name + ": weight step " +
                                std::to_string(dw) + " on " +
                                mc.alg->to_string(mono));
      }
    }
  }
  return r;
}

ChainMap realize_map(const Realization& src, const Realization& tgt,
                     const std::function<Element(const Element&)>& f,
                     std::string name, bool allow_weight_drop) {
  ChainMap cm;
  cm.src = &src.complex;
  cm.tgt = &tgt.complex;
  cm.name = std::move(name);
  for (int k = 0; k < src.complex.slots(); ++k) {
    int d = src.complex.deg_lo + k;
    SparseMat m(tgt.complex.dim(d), src.complex.dim(d));
    for (int j = 0; j < static_cast<int>(src.basis[k].size()); ++j) {
      Element img = f(Element::from_monomial(src.alg, src.basis[k][j]));
      for (const auto& [t, c] : img.terms()) {
        auto it = tgt.index.find(t);
        if (it == tgt.index.end()) {
          if (allow_weight_drop &&
              tgt.alg->weight_of(t) > tgt.window.weight_max)
            continue;
          throw WindowTooSmall("image term " + tgt.alg->to_string(t) +
                               " of " + cm.name + " escapes the target window");
        }
        int td = tgt.complex.deg_lo + it->second.first;
        if (td != d)
          throw DegreeMismatch(cm.name + " shifts degree on " +
                               src.alg->to_string(src.basis[k][j]));
        m.add_entry(it->second.second, j, c);
      }
    }
    cm.mats.push_back(std::move(m));
  }
  return cm;
}

Complex constants_complex() {
  Complex c;
  c.deg_lo = 0;
  c.labels = {{"1"}};
  c.complete = true;
  c.name = "Q";
  return c;
}

ChainMap constants_into(const Complex& constants, const Realization& r) {
  auto it = r.index.find(Monomial::one());
  if (it == r.index.end())
    throw WindowTooSmall("window misses the unit monomial");
  ChainMap cm;
  cm.src = &constants;
  cm.tgt = &r.complex;
  cm.name = "unit";
  SparseMat m(r.complex.dim(0), 1);
  m.add_entry(it->second.second, 0, 1);
  cm.mats.push_back(std::move(m));
  return cm;
}

}  // namespace sgq
