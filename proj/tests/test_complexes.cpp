#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "sgq/complexes.hpp"
#include "sgq/errors.hpp"

using namespace sgq;

namespace {

// Independent dense Gaussian elimination used as an oracle for the sparse
// routines.
int dense_rank(std::vector<std::vector<Rational>> m) {
  if (m.empty()) return 0;
  int rows = static_cast<int>(m.size());
  int cols = static_cast<int>(m[0].size());
  int rank_acc = 0;
  for (int c = 0; c < cols && rank_acc < rows; ++c) {
    int piv = -1;
    for (int r = rank_acc; r < rows; ++r)
      if (m[r][c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[rank_acc], m[piv]);
    for (int r = 0; r < rows; ++r) {
      if (r == rank_acc || m[r][c] == 0) continue;
      Rational f = m[r][c] / m[rank_acc][c];
      for (int cc = 0; cc < cols; ++cc) m[r][cc] -= f * m[rank_acc][cc];
    }
    ++rank_acc;
  }
  return rank_acc;
}

std::vector<std::vector<Rational>> to_dense(const SparseMat& a) {
  std::vector<std::vector<Rational>> m(a.rows,
                                       std::vector<Rational>(a.cols, 0));
  for (int j = 0; j < a.cols; ++j)
    for (const auto& [i, v] : a.col[j]) m[i][j] = v;
  return m;
}

SparseMat random_matrix(std::mt19937_64& rng, int rows, int cols,
                        int density_pct) {
  SparseMat a(rows, cols);
  std::uniform_int_distribution<int> pct(0, 99);
  std::uniform_int_distribution<int> val(-4, 4);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i)
      if (pct(rng) < density_pct) a.add_entry(i, j, val(rng));
  return a;
}

MixedComplex de_rham_line(bool laurent) {
  auto alg = AlgebraData::create(
      {{"x", 0, 0, laurent, 1}, {"dx", 1, 1, false, 1}},
      {}, laurent ? "O(Gm)" : "O(A1)");
  Derivation d(alg, "d", 1, 1, {{"x", Element::gen(alg, "dx")}});
  WeightOp op{"ddr", 1, 1, laurent ? 2 : 0,
              [d](const Element& e) { return d(e); }};
  return {alg, laurent ? "forms on Gm" : "forms on A1", {op}};
}

MixedComplex twisted_line(int potential_degree) {
  // Differential d + alpha where alpha = x^k dx.
  auto alg = AlgebraData::create({{"x", 0}, {"dx", 1, 1}}, {}, "O(A1)");
  Derivation d(alg, "d", 1, 1, {{"x", Element::gen(alg, "dx")}});
  Element alpha =
      Element::gen(alg, "x", potential_degree) * Element::gen(alg, "dx");
  WeightOp dop{"ddr", 1, 1, 0, [d](const Element& e) { return d(e); }};
  WeightOp aop{"alpha", 1, 1, potential_degree + 1,
               [alpha](const Element& e) { return alpha * e; }};
  return {alg, "twisted forms on A1", {dop, aop}};
}

Complex one_space(int degree, int dim, const std::string& prefix) {
  Complex c;
  c.deg_lo = degree;
  std::vector<std::string> lab;
  for (int i = 0; i < dim; ++i) lab.push_back(prefix + std::to_string(i));
  c.labels.push_back(lab);
  c.complete = true;
  c.name = prefix;
  return c;
}

}  // namespace

TEST_CASE("sparse rank matches dense oracle") {
  std::mt19937_64 rng(1001);
  for (int trial = 0; trial < 60; ++trial) {
    SparseMat a = random_matrix(rng, 1 + trial % 7, 1 + (trial * 3) % 8, 40);
    CHECK(rank(a) == dense_rank(to_dense(a)));
  }
}

TEST_CASE("kernel basis is correct and complete") {
  std::mt19937_64 rng(1002);
  for (int trial = 0; trial < 60; ++trial) {
    SparseMat a = random_matrix(rng, 2 + trial % 5, 2 + (trial * 7) % 6, 50);
    auto ker = kernel_basis(a);
    CHECK(static_cast<int>(ker.size()) == a.cols - rank(a));
    for (const auto& k : ker) {
      CHECK_FALSE(k.empty());
      CHECK(a.apply(k).empty());
    }
    // Independence: stack kernel vectors into a matrix of full column rank.
    SparseMat km(a.cols, static_cast<int>(ker.size()));
    for (int j = 0; j < km.cols; ++j) km.col[j] = ker[j];
    CHECK(rank(km) == km.cols);
  }
}

TEST_CASE("solve finds exact solutions and rejects unsolvable systems") {
  std::mt19937_64 rng(1003);
  std::uniform_int_distribution<int> val(-3, 3);
  for (int trial = 0; trial < 60; ++trial) {
    SparseMat a = random_matrix(rng, 2 + trial % 5, 2 + trial % 4, 45);
    SparseVec x0;
    for (int j = 0; j < a.cols; ++j) {
      int v = val(rng);
      if (v != 0) x0.emplace_back(j, v);
    }
    SparseVec b = a.apply(x0);
    auto x = solve(a, b);
    REQUIRE(x.has_value());
    CHECK(a.apply(*x) == b);

    SparseVec target;
    for (int i = 0; i < a.rows; ++i) {
      int v = val(rng);
      if (v != 0) target.emplace_back(i, v);
    }
    auto dense = to_dense(a);
    auto augmented = dense;
    for (int i = 0; i < a.rows; ++i) {
      Rational t = 0;
      for (const auto& [k, v] : target)
        if (k == i) t = v;
      augmented[i].push_back(t);
    }
    bool solvable = dense_rank(augmented) == dense_rank(dense);
    auto y = solve(a, target);
    CHECK(y.has_value() == solvable);
    if (y) CHECK(a.apply(*y) == target);
  }
}

TEST_CASE("cohomology of an explicit two step complex") {
  // Q^2 -> Q by (u, v) -> u + v.
  Complex c;
  c.deg_lo = 0;
  c.labels = {{"u", "v"}, {"w"}};
  SparseMat d(1, 2);
  d.add_entry(0, 0, 1);
  d.add_entry(0, 1, 1);
  c.diff = {d};
  c.verify_square_zero();
  auto h0 = cohomology(c, 0);
  auto h1 = cohomology(c, 1);
  CHECK(h0.dim == 1);
  CHECK(c.describe(0, h0.reps[0]) == "1 * u + -1 * v");
  CHECK(h1.dim == 0);
  CHECK(cohomology(c, 5).dim == 0);
}

TEST_CASE("line de rham realization has constant cohomology only") {
  Window w{-2, 2, 0, 2, 6};
  Realization r = realize(de_rham_line(false), w);
  CHECK(r.complex.complete);
  CHECK(r.complex.dim(0) == 7);  // 1, x, ..., x^6
  CHECK(r.complex.dim(1) == 6);  // dx, ..., x^5 dx
  auto h0 = cohomology(r.complex, 0);
  auto h1 = cohomology(r.complex, 1);
  CHECK(h0.dim == 1);
  CHECK(h0.definitive);
  CHECK(r.complex.describe(0, h0.reps[0]) == "1 * 1");
  CHECK(h1.dim == 0);

  Complex q = constants_complex();
  ChainMap unit = constants_into(q, r);
  auto res = is_quasi_iso(unit);
  CHECK(res.ok);
}

TEST_CASE("punctured line keeps its log class") {
  Window w{-2, 2, 0, 2, 6};
  Realization r = realize(de_rham_line(true), w);
  auto h0 = cohomology(r.complex, 0);
  auto h1 = cohomology(r.complex, 1);
  CHECK(h0.dim == 1);
  // The size bound grows with weight, so the top slice of one-forms has no
  // antiderivative inside the window; only the log class matters though,
  // and it sorts first.
  CHECK(h1.dim == 3);
  CHECK(r.complex.describe(1, h1.reps[0]) == "1 * x^-1 dx");

  const SparseMat* d0 = r.complex.diff_from(0);
  REQUIRE(d0 != nullptr);
  Element log_form = Element::gen(r.alg, "x", -1) * Element::gen(r.alg, "dx");
  auto logv = r.to_vector(log_form, nullptr);
  REQUIRE(logv.has_value());
  CHECK_FALSE(solve(*d0, *logv).has_value());
  Element exact_form = Element::gen(r.alg, "x", 3) * Element::gen(r.alg, "dx");
  auto exv = r.to_vector(exact_form, nullptr);
  REQUIRE(exv.has_value());
  auto pre = solve(*d0, *exv);
  REQUIRE(pre.has_value());
  CHECK(r.complex.describe(0, *pre) == "1/4 * x^4");

  Complex q = constants_complex();
  ChainMap unit = constants_into(q, r);
  auto res = is_quasi_iso(unit);
  CHECK_FALSE(res.ok);
  CHECK(res.witness.find("x^-1 dx") != std::string::npos);
}

TEST_CASE("twisted differentials concentrate cohomology in top degree") {
  Window w{-2, 2, 0, 2, 8};
  {
    Realization r = realize(twisted_line(1), w);
    CHECK(cohomology(r.complex, 0).dim == 0);
    CHECK(cohomology(r.complex, 1).dim == 1);
  }
  {
    Realization r = realize(twisted_line(2), w);
    CHECK(cohomology(r.complex, 0).dim == 0);
    CHECK(cohomology(r.complex, 1).dim == 2);
  }
}

TEST_CASE("square zero violations are caught exactly") {
  auto alg = AlgebraData::create(
      {{"x", 0}, {"y", 0}, {"dx", 1, 1}, {"dy", 1, 1}});
  Derivation d(alg, "d", 1, 1,
               {{"x", Element::gen(alg, "dx")}, {"y", Element::gen(alg, "dy")}});
  Element beta = Element::gen(alg, "y") * Element::gen(alg, "dx");
  WeightOp dop{"ddr", 1, 1, 0, [d](const Element& e) { return d(e); }};
  WeightOp bop{"beta", 1, 1, 2, [beta](const Element& e) { return beta * e; }};
  MixedComplex mc{alg, "bad twist", {dop, bop}};
  Window w{-1, 2, 0, 2, 3};
  CHECK_THROWS_AS(realize(mc, w), NotSquareZero);
}

TEST_CASE("mixed complex declarations are validated") {
  auto alg = AlgebraData::create({{"x", 0}, {"dx", 1, 1}});
  Derivation d(alg, "d", 1, 1, {{"x", Element::gen(alg, "dx")}});
  Window w{-1, 1, 0, 1, 3};

  WeightOp growing{"mult", 1, 0, 1,
                   [alg](const Element& e) {
                     return Element::gen(alg, "x") * Element::gen(alg, "dx") * e;
                   }};
  CHECK_THROWS_AS(realize({alg, "bad", {growing}}, w), BadParameter);

  WeightOp lying{"ddr", 1, 1, -1, [d](const Element& e) { return d(e); }};
  CHECK_THROWS_AS(realize({alg, "lying", {lying}}, w), BadParameter);

  auto unbounded = AlgebraData::create({{"t", 0, 0, false, 0}});
  CHECK_THROWS_AS(realize({unbounded, "unbounded", {}}, w), BadParameter);
}

TEST_CASE("maps escaping the window are refused") {
  Window w{-2, 2, 0, 2, 4};
  Realization r = realize(de_rham_line(false), w);
  Element xhigh = Element::gen(r.alg, "x", 5);
  CHECK_THROWS_AS(
      realize_map(r, r, [xhigh](const Element& e) { return xhigh * e; },
                  "shift"),
      WindowTooSmall);
}

TEST_CASE("round trip between elements and coordinates") {
  Window w{-2, 2, 0, 2, 5};
  Realization r = realize(de_rham_line(false), w);
  Element e = Element::gen(r.alg, "x", 2) * Element::gen(r.alg, "dx") * Rational(7) -
              Element::gen(r.alg, "dx") * Rational(1, 3);
  int deg = 99;
  auto v = r.to_vector(e, &deg);
  REQUIRE(v.has_value());
  CHECK(deg == 1);
  CHECK(r.to_element(1, *v) == e);
  Element outside = Element::gen(r.alg, "x", 50);
  CHECK_FALSE(r.to_vector(outside, nullptr).has_value());
}

TEST_CASE("fiber sequences of explicit vector spaces") {
  Complex a = one_space(0, 1, "a");
  Complex b = one_space(0, 2, "b");
  Complex c = one_space(0, 1, "c");

  ChainMap f{&a, &b, {}, "include"};
  SparseMat fm(2, 1);
  fm.add_entry(0, 0, 1);
  f.mats = {fm};

  ChainMap g{&b, &c, {}, "project"};
  SparseMat gm(1, 2);
  gm.add_entry(0, 1, 1);
  g.mats = {gm};

  auto res = is_fiber_sequence(f, g);
  CHECK(res.ok);

  ChainMap gzero{&b, &c, {}, "zero"};
  gzero.mats = {SparseMat(1, 2)};
  auto bad = is_fiber_sequence(f, gzero);
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.witness.empty());

  ChainMap gcomp{&b, &c, {}, "overlap"};
  SparseMat gc(1, 2);
  gc.add_entry(0, 0, 1);
  gcomp.mats = {gc};
  CHECK_THROWS_AS(is_fiber_sequence(f, gcomp), NonZeroComposite);
}

TEST_CASE("chain map compatibility is verified") {
  Complex a;
  a.deg_lo = 0;
  a.labels = {{"a0"}, {"a1"}};
  SparseMat da(1, 1);
  da.add_entry(0, 0, 1);
  a.diff = {da};

  Complex b = a;
  b.name = "b";

  ChainMap f{&a, &b, {}, "bad"};
  SparseMat f0(1, 1), f1(1, 1);
  f0.add_entry(0, 0, 1);
  f1.add_entry(0, 0, 2);
  f.mats = {f0, f1};
  CHECK_THROWS_AS(verify_chain_map(f), NotChainMap);
  CHECK_THROWS_AS(is_quasi_iso(f), NotChainMap);

  f.mats[1] = f0;
  auto res = is_quasi_iso(f);
  CHECK(res.ok);
}

TEST_CASE("windows touching the degree boundary give no certificates") {
  Window w{0, 1, 0, 2, 4};
  Realization r = realize(de_rham_line(false), w);
  CHECK_FALSE(r.complex.complete);
  CHECK_FALSE(cohomology(r.complex, 0).definitive);
  Complex q = constants_complex();
  ChainMap unit = constants_into(q, r);
  CHECK_THROWS_AS(is_quasi_iso(unit), WindowTooSmall);
}
