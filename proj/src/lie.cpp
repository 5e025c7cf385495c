#include "sgq/lie.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "sgq/errors.hpp"

namespace sgq {

namespace {

SparseVec to_sparse(const QVec& v) {
  SparseVec out;
  for (int i = 0; i < static_cast<int>(v.size()); ++i)
    if (v[i] != 0) out.emplace_back(i, v[i]);
  return out;
}

QVec to_dense(const SparseVec& v, int n) {
  QVec out(n, Rational(0));
  for (const auto& [i, c] : v) out[i] = c;
  return out;
}

bool in_span(const Echelon& ech, const QVec& v) {
  return ech.reduce(to_sparse(v)).empty();
}

Echelon echelon_of(const std::vector<QVec>& vecs) {
  Echelon ech;
  for (const auto& v : vecs) ech.add(to_sparse(v));
  return ech;
}

QVec scaled(const QVec& v, const Rational& c) {
  QVec out = v;
  for (auto& x : out) x *= c;
  return out;
}

// Square matrices over Q, used only to expand the preset presentations.
using KMat = std::vector<QVec>;

KMat kzero(int k) { return KMat(k, QVec(k, Rational(0))); }

KMat kunit(int k, int i, int j) {
  KMat m = kzero(k);
  m[i][j] = 1;
  return m;
}

KMat kadd(const KMat& a, const KMat& b, const Rational& s) {
  KMat out = a;
  for (size_t i = 0; i < out.size(); ++i)
    for (size_t j = 0; j < out.size(); ++j) out[i][j] += s * b[i][j];
  return out;
}

KMat kmul(const KMat& a, const KMat& b) {
  int k = static_cast<int>(a.size());
  KMat out = kzero(k);
  for (int i = 0; i < k; ++i)
    for (int l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (int j = 0; j < k; ++j) out[i][j] += a[i][l] * b[l][j];
    }
  return out;
}

Rational ktrace_mul(const KMat& a, const KMat& b) {
  Rational t = 0;
  int k = static_cast<int>(a.size());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) t += a[i][j] * b[j][i];
  return t;
}

SparseVec kflatten(const KMat& m) {
  SparseVec out;
  int k = static_cast<int>(m.size());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (m[i][j] != 0) out.emplace_back(i * k + j, m[i][j]);
  return out;
}

LieAlgebraData from_matrices(std::vector<std::string> names,
                             const std::vector<KMat>& mats) {
  int dim = static_cast<int>(names.size());
  int k = static_cast<int>(mats.front().size());
  SparseMat flat(k * k, dim);
  for (int j = 0; j < dim; ++j)
    for (const auto& [idx, c] : kflatten(mats[j])) flat.add_entry(idx, j, c);

  std::vector<std::vector<QVec>> constants(
      dim, std::vector<QVec>(dim, QVec(dim, Rational(0))));
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      KMat c = kadd(kmul(mats[i], mats[j]), kmul(mats[j], mats[i]), -1);
      auto x = solve(flat, kflatten(c));
      if (!x)
        throw BadParameter("matrix preset is not closed under commutators");
      constants[i][j] = to_dense(*x, dim);
      constants[j][i] = scaled(constants[i][j], -1);
    }

  QMat pairing(dim, QVec(dim, Rational(0)));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) pairing[i][j] = ktrace_mul(mats[i], mats[j]);
  return lie_algebra(std::move(names), std::move(constants),
                     std::move(pairing));
}

}  // namespace

int LieAlgebraData::index_of(const std::string& name) const {
  auto it = std::find(basis.begin(), basis.end(), name);
  if (it == basis.end())
    throw BadParameter("no basis element named " + name);
  return static_cast<int>(it - basis.begin());
}

QVec LieAlgebraData::unit(int i) const {
  QVec v(dim, Rational(0));
  v[i] = 1;
  return v;
}

QVec LieAlgebraData::bracket(const QVec& a, const QVec& b) const {
  QVec out(dim, Rational(0));
  for (int i = 0; i < dim; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < dim; ++j) {
      if (b[j] == 0) continue;
      const Rational c = a[i] * b[j];
      for (int m = 0; m < dim; ++m) out[m] += c * constants[i][j][m];
    }
  }
  return out;
}

SparseMat LieAlgebraData::ad(const QVec& a) const {
  SparseMat m(dim, dim);
  for (int j = 0; j < dim; ++j) {
    QVec c = bracket(a, unit(j));
    for (int i = 0; i < dim; ++i)
      if (c[i] != 0) m.add_entry(i, j, c[i]);
  }
  return m;
}

QMat LieAlgebraData::killing() const {
  QMat k(dim, QVec(dim, Rational(0)));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Rational t = 0;
      for (int m = 0; m < dim; ++m)
        t += bracket(unit(i), bracket(unit(j), unit(m)))[m];
      k[i][j] = t;
    }
  return k;
}

Rational LieAlgebraData::pair(const QVec& a, const QVec& b) const {
  if (!pairing) throw BadParameter("algebra carries no pairing");
  Rational t = 0;
  for (int i = 0; i < dim; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < dim; ++j) t += a[i] * (*pairing)[i][j] * b[j];
  }
  return t;
}

QVec LieAlgebraData::kappa(const QVec& a) const {
  QVec out(dim, Rational(0));
  for (int j = 0; j < dim; ++j) out[j] = pair(a, unit(j));
  return out;
}

std::string LieAlgebraData::str(const QVec& v) const {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < dim; ++i) {
    if (v[i] == 0) continue;
    if (!first) os << (v[i] > 0 ? " + " : " - ");
    else if (v[i] < 0) os << "-";
    Rational a = abs(v[i]);
    if (a != 1) os << a.str() << " ";
    os << basis[i];
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

LieAlgebraData lie_algebra(std::vector<std::string> basis,
                           std::vector<std::vector<QVec>> constants,
                           std::optional<QMat> pairing) {
  LieAlgebraData g;
  g.dim = static_cast<int>(basis.size());
  g.basis = std::move(basis);
  g.constants = std::move(constants);
  g.pairing = std::move(pairing);
  if (static_cast<int>(g.constants.size()) != g.dim)
    throw BadDimension("structure constant table has the wrong shape");
  for (const auto& row : g.constants) {
    if (static_cast<int>(row.size()) != g.dim)
      throw BadDimension("structure constant table has the wrong shape");
    for (const auto& v : row)
      if (static_cast<int>(v.size()) != g.dim)
        throw BadDimension("structure constant table has the wrong shape");
  }

  for (int i = 0; i < g.dim; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k < g.dim; ++k)
        if (g.constants[i][j][k] + g.constants[j][i][k] != 0)
          throw JacobiFails("bracket is not antisymmetric on (" +
                            g.basis[i] + ", " + g.basis[j] + ")");

  for (int i = 0; i < g.dim; ++i)
    for (int j = i + 1; j < g.dim; ++j)
      for (int k = j + 1; k < g.dim; ++k) {
        QVec s = g.bracket(g.unit(i), g.bracket(g.unit(j), g.unit(k)));
        QVec t = g.bracket(g.unit(j), g.bracket(g.unit(k), g.unit(i)));
        QVec u = g.bracket(g.unit(k), g.bracket(g.unit(i), g.unit(j)));
        for (int m = 0; m < g.dim; ++m)
          if (s[m] + t[m] + u[m] != 0)
            throw JacobiFails("jacobi identity fails on (" + g.basis[i] +
                              ", " + g.basis[j] + ", " + g.basis[k] + ")");
      }

  if (g.pairing) {
    const QMat& p = *g.pairing;
    if (static_cast<int>(p.size()) != g.dim)
      throw BadDimension("pairing matrix has the wrong shape");
    for (int i = 0; i < g.dim; ++i)
      for (int j = 0; j < g.dim; ++j)
        if (p[i][j] != p[j][i])
          throw PairingNotInvariant("pairing is not symmetric on (" +
                                    g.basis[i] + ", " + g.basis[j] + ")");
    for (int i = 0; i < g.dim; ++i)
      for (int j = 0; j < g.dim; ++j)
        for (int k = 0; k < g.dim; ++k) {
          Rational lhs = g.pair(g.bracket(g.unit(i), g.unit(j)), g.unit(k));
          Rational rhs = g.pair(g.unit(j), g.bracket(g.unit(i), g.unit(k)));
          if (lhs + rhs != 0)
            throw PairingNotInvariant(
                "pairing is not ad-invariant on (" + g.basis[i] + ", " +
                g.basis[j] + ", " + g.basis[k] + ")");
        }
  }
  return g;
}

LieAlgebraData sl2() {
  return from_matrices({"e", "h", "f"},
                       {kunit(2, 0, 1),
                        kadd(kunit(2, 0, 0), kunit(2, 1, 1), -1),
                        kunit(2, 1, 0)});
}

LieAlgebraData sl3() {
  return from_matrices(
      {"e12", "e13", "e23", "e21", "e31", "e32", "h1", "h2"},
      {kunit(3, 0, 1), kunit(3, 0, 2), kunit(3, 1, 2), kunit(3, 1, 0),
       kunit(3, 2, 0), kunit(3, 2, 1),
       kadd(kunit(3, 0, 0), kunit(3, 1, 1), -1),
       kadd(kunit(3, 1, 1), kunit(3, 2, 2), -1)});
}

LieAlgebraData gl2() {
  return from_matrices({"e11", "e12", "e21", "e22"},
                       {kunit(2, 0, 0), kunit(2, 0, 1), kunit(2, 1, 0),
                        kunit(2, 1, 1)});
}

LieAlgebraData sp4() {
  // Block form [[A, B], [C, -A^T]] with B, C symmetric.
  auto a_part = [](int i, int j) {
    KMat m = kzero(4);
    m[i][j] = 1;
    m[2 + j][2 + i] = -1;
    return m;
  };
  auto b_part = [](int i, int j) {
    KMat m = kzero(4);
    m[i][2 + j] = 1;
    m[j][2 + i] = 1;
    return m;
  };
  auto c_part = [](int i, int j) {
    KMat m = kzero(4);
    m[2 + i][j] = 1;
    m[2 + j][i] = 1;
    return m;
  };
  KMat b11 = kzero(4), b22 = kzero(4), c11 = kzero(4), c22 = kzero(4);
  b11[0][2] = 1;
  b22[1][3] = 1;
  c11[2][0] = 1;
  c22[3][1] = 1;
  return from_matrices(
      {"a11", "a12", "a21", "a22", "b11", "b22", "b12", "c11", "c22", "c12"},
      {a_part(0, 0), a_part(0, 1), a_part(1, 0), a_part(1, 1), b11, b22,
       b_part(0, 1), c11, c22, c_part(0, 1)});
}

Subalgebra subalgebra(const LieAlgebraData& g, std::vector<QVec> basis,
                      bool parabolic_role, bool levi_role) {
  Echelon ech;
  for (const auto& v : basis) {
    if (static_cast<int>(v.size()) != g.dim)
      throw BadDimension("subalgebra vector has the wrong length");
    if (!ech.add(to_sparse(v)))
      throw BadParameter("subalgebra basis is linearly dependent");
  }
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = i + 1; j < basis.size(); ++j) {
      QVec c = g.bracket(basis[i], basis[j]);
      if (!in_span(ech, c))
        throw NotSubalgebra("bracket [" + g.str(basis[i]) + ", " +
                            g.str(basis[j]) + "] = " + g.str(c) +
                            " leaves the span");
    }
  return Subalgebra{g, std::move(basis), parabolic_role, levi_role};
}

Sl2Triple sl2_triple(const LieAlgebraData& g, const QVec& e) {
  if (to_sparse(e).empty()) throw BadParameter("nilpotent element is zero");
  SparseMat a = g.ad(e);
  SparseMat power = a;
  for (int k = 0; k < g.dim + 1 && !power.is_zero(); ++k)
    power = SparseMat::mul(power, a);
  if (!power.is_zero())
    throw NotNilpotent("ad(" + g.str(e) + ") is not nilpotent");

  SparseMat a2 = SparseMat::mul(a, a);
  auto y = solve(a2, to_sparse(scaled(e, -2)));
  if (!y)
    throw NoRationalTriple("-2e is outside the image of ad(e)^2");
  QVec h = g.bracket(e, to_dense(*y, g.dim));

  SparseMat adh = g.ad(h);
  SparseMat stacked(2 * g.dim, g.dim);
  for (int j = 0; j < g.dim; ++j) {
    for (const auto& [i, c] : a.col[j]) stacked.add_entry(i, j, c);
    for (const auto& [i, c] : adh.col[j])
      stacked.add_entry(g.dim + i, j, c);
    stacked.add_entry(g.dim + j, j, 2);
  }
  SparseVec rhs = to_sparse(h);
  auto f = solve(stacked, rhs);
  if (!f)
    throw NoRationalTriple("no rational f with [e,f] = h and [h,f] = -2f");
  Sl2Triple t{e, h, to_dense(*f, g.dim)};

  if (g.bracket(t.h, t.e) != scaled(t.e, 2) ||
      g.bracket(t.h, t.f) != scaled(t.f, -2) || g.bracket(t.e, t.f) != t.h)
    throw NoRationalTriple("solved triple fails the bracket relations");
  return t;
}

namespace {

// Matrix of y -> x([y, -]) in the basis of g; column j evaluates on e_k.
SparseMat coadjoint_matrix(const LieAlgebraData& g, const QVec& x) {
  SparseMat m(g.dim, g.dim);
  for (int j = 0; j < g.dim; ++j)
    for (int k = 0; k < g.dim; ++k) {
      Rational v = 0;
      for (int s = 0; s < g.dim; ++s) v += g.constants[j][k][s] * x[s];
      if (v != 0) m.add_entry(k, j, v);
    }
  return m;
}

void require_stabilizer(const LieAlgebraData& g, const QVec& x,
                        const Subalgebra& l, const SparseMat& coad) {
  std::vector<SparseVec> ker = kernel_basis(coad);
  if (ker.size() != l.basis.size())
    throw NotStabilizer("stabilizer of the functional has dimension " +
                        std::to_string(ker.size()) + ", the subalgebra has " +
                        std::to_string(l.basis.size()));
  Echelon ech;
  for (const auto& v : ker) ech.add(v);
  for (const auto& v : l.basis)
    if (!in_span(ech, v))
      throw NotStabilizer(g.str(v) + " does not stabilize the functional");
  (void)x;
}

}  // namespace

CheckReport coadjoint_exactness(const LieAlgebraData& g, const QVec& x,
                                const Subalgebra& l) {
  CheckReport rep;
  rep.scenario = "coadjoint-exactness";
  rep.windowed = false;
  SparseMat coad = coadjoint_matrix(g, x);
  require_stabilizer(g, x, l, coad);
  int r = rank(coad);
  std::ostringstream os;
  if (to_sparse(x).empty())
    os << "degenerate functional: the stabilizer is all of g and the "
          "complex collapses; ";
  os << "stab(x) has dimension " << l.basis.size()
     << ", the coadjoint map has rank " << r << " = " << g.dim << " - "
     << l.basis.size()
     << " and lands in the annihilator of the stabilizer, so the four-term "
        "complex is exact";
  rep.statement = os.str();
  rep.verdict = Verdict::PASS;
  return rep;
}

CheckReport levi_parabolic_check(const LieAlgebraData& g, const QVec& x,
                                 const Subalgebra& l, const Subalgebra& p) {
  Echelon pech = echelon_of(p.basis);
  for (const auto& v : l.basis)
    if (!in_span(pech, v))
      throw NotSubalgebra("the small subalgebra is not contained in the "
                          "large one");
  require_stabilizer(g, x, l, coadjoint_matrix(g, x));

  int q = g.dim - static_cast<int>(p.basis.size());
  int q2 = static_cast<int>(p.basis.size()) - static_cast<int>(l.basis.size());
  if (q != q2)
    throw DimensionMismatch("codim of the large subalgebra is " +
                            std::to_string(q) + " but the quotient by the "
                            "small one has dimension " + std::to_string(q2));

  std::vector<QVec> u;
  {
    Echelon ech = echelon_of(p.basis);
    for (int k = 0; k < g.dim && static_cast<int>(u.size()) < q; ++k)
      if (ech.add(to_sparse(g.unit(k)))) u.push_back(g.unit(k));
  }
  std::vector<QVec> v;
  {
    Echelon ech = echelon_of(l.basis);
    for (const auto& w : p.basis)
      if (ech.add(to_sparse(w))) v.push_back(w);
  }

  SparseMat n(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      QVec c = g.bracket(u[i], v[j]);
      Rational val = 0;
      for (int s = 0; s < g.dim; ++s) val += c[s] * x[s];
      if (val != 0) n.add_entry(i, j, val);
    }

  CheckReport rep;
  rep.scenario = "levi-parabolic";
  rep.windowed = false;
  int r = rank(n);
  if (r == q) {
    rep.verdict = Verdict::PASS;
    rep.statement = "x pairs g/p against p/l invertibly (rank " +
                    std::to_string(q) + " of " + std::to_string(q) +
                    "), so the parabolic reduction is a fibration with "
                    "lagrangian fibers";
  } else {
    rep.verdict = Verdict::FAIL;
    rep.statement = "the pairing of g/p against p/l has rank " +
                    std::to_string(r) + " < " + std::to_string(q);
    std::vector<SparseVec> ker = kernel_basis(n);
    if (!ker.empty()) {
      QVec bad(g.dim, Rational(0));
      for (const auto& [idx, c] : ker.front())
        for (int s = 0; s < g.dim; ++s) bad[s] += c * v[idx][s];
      rep.witness = "x([g/p, " + g.str(bad) + "]) = 0";
    }
  }
  return rep;
}

SlodowyData slodowy(const LieAlgebraData& g, const Sl2Triple& t) {
  if (!g.pairing) throw BadParameter("slodowy data needs a pairing");
  if (g.bracket(t.h, t.e) != scaled(t.e, 2) ||
      g.bracket(t.h, t.f) != scaled(t.f, -2) ||
      g.bracket(t.e, t.f) != t.h)
    throw BadParameter("the given elements do not form a triple");

  SlodowyData out;
  SparseMat adh = g.ad(t.h);
  int total = 0;
  for (int nval = -2 * g.dim; nval <= 2 * g.dim; ++nval) {
    SparseMat m = adh;
    for (int k = 0; k < g.dim; ++k) m.add_entry(k, k, -nval);
    std::vector<SparseVec> ker = kernel_basis(m);
    if (ker.empty()) continue;
    std::vector<QVec> dense;
    for (const auto& v : ker) dense.push_back(to_dense(v, g.dim));
    total += static_cast<int>(dense.size());
    out.grading[nval] = std::move(dense);
  }
  if (total != g.dim)
    throw GradingNotIntegral(
        "the semisimple element does not act with integer eigenvalues");

  QVec chi = g.kappa(t.e);
  auto chi_of = [&](const QVec& v) {
    Rational s = 0;
    for (int i = 0; i < g.dim; ++i) s += chi[i] * v[i];
    return s;
  };

  const std::vector<QVec> gm1 = out.grading.count(-1)
                                    ? out.grading.at(-1)
                                    : std::vector<QVec>{};
  int w = static_cast<int>(gm1.size());
  QMat b(w, QVec(w, Rational(0)));
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < w; ++j) b[i][j] = chi_of(g.bracket(gm1[i], gm1[j]));
  {
    SparseMat bm(w, w);
    for (int i = 0; i < w; ++i)
      for (int j = 0; j < w; ++j)
        if (b[i][j] != 0) bm.add_entry(i, j, b[i][j]);
    if (rank(bm) != w)
      throw PairingDegenerateOnGm1(
          "chi([-,-]) is degenerate on the weight -1 part");
  }

  // Greedy isotropic completion in g(-1) coordinates; isotropy of the span
  // is automatic because the form is alternating.
  std::vector<QVec> lag;
  Echelon lag_ech;
  while (2 * static_cast<int>(lag.size()) < w) {
    SparseMat constraints(static_cast<int>(lag.size()), w);
    for (int r = 0; r < static_cast<int>(lag.size()); ++r)
      for (int c = 0; c < w; ++c) {
        Rational val = 0;
        for (int s = 0; s < w; ++s) val += lag[r][s] * b[s][c];
        if (val != 0) constraints.add_entry(r, c, val);
      }
    bool grew = false;
    for (const auto& cand : kernel_basis(constraints)) {
      Echelon probe = lag_ech;
      if (probe.add(cand)) {
        lag_ech = probe;
        lag.push_back(to_dense(cand, w));
        grew = true;
        break;
      }
    }
    if (!grew)
      throw PairingDegenerateOnGm1(
          "isotropic completion stalled before half dimension");
  }
  for (const auto& coords : lag) {
    QVec v(g.dim, Rational(0));
    for (int s = 0; s < w; ++s)
      for (int i = 0; i < g.dim; ++i) v[i] += coords[s] * gm1[s][i];
    out.lagrangian.push_back(v);
  }

  out.m = out.lagrangian;
  for (const auto& [nval, vecs] : out.grading)
    if (nval <= -2) out.m.insert(out.m.end(), vecs.begin(), vecs.end());

  for (const auto& v : kernel_basis(g.ad(t.f)))
    out.centralizer_f.push_back(to_dense(v, g.dim));

  CheckReport rep;
  rep.scenario = "slodowy";
  rep.windowed = false;
  rep.verdict = Verdict::PASS;
  std::ostringstream os;

  Echelon mech = echelon_of(out.m);
  for (size_t i = 0; i < out.m.size() && rep.verdict == Verdict::PASS; ++i)
    for (size_t j = i + 1; j < out.m.size(); ++j) {
      QVec c = g.bracket(out.m[i], out.m[j]);
      if (!in_span(mech, c)) {
        rep.verdict = Verdict::FAIL;
        rep.witness = "m is not closed: [" + g.str(out.m[i]) + ", " +
                      g.str(out.m[j]) + "]";
        break;
      }
      if (chi_of(c) != 0) {
        rep.verdict = Verdict::FAIL;
        rep.witness = "chi does not vanish on [" + g.str(out.m[i]) + ", " +
                      g.str(out.m[j]) + "]";
        break;
      }
    }

  int dim_m = static_cast<int>(out.m.size());
  int dim_cf = static_cast<int>(out.centralizer_f.size());
  if (rep.verdict == Verdict::PASS && g.dim - 2 * dim_m != dim_cf) {
    rep.verdict = Verdict::FAIL;
    rep.witness = "dim g - 2 dim m = " + std::to_string(g.dim - 2 * dim_m) +
                  " but dim g^f = " + std::to_string(dim_cf);
  }

  os << "grading dims";
  for (const auto& [nval, vecs] : out.grading)
    os << " [" << nval << "]:" << vecs.size();
  os << "; dim m = " << dim_m << ", dim g^f = " << dim_cf
     << ", dim g - 2 dim m = " << (g.dim - 2 * dim_m)
     << "; chi vanishes on [m,m]";
  rep.statement = os.str();
  out.report = rep;
  return out;
}

}  // namespace sgq
