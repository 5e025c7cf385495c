#include "sgq/linalg.hpp"

#include <algorithm>

#include "sgq/errors.hpp"

namespace sgq {

SparseVec sparse_axpy(const SparseVec& a, const Rational& c, const SparseVec& b) {
  if (c == 0) return a;
  SparseVec out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, c * b[j].second);
      ++j;
    } else {
      Rational v = a[i].second + c * b[j].second;
      if (v != 0) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

SparseVec sparse_scale(const SparseVec& a, const Rational& c) {
  SparseVec out;
  if (c == 0) return out;
  out.reserve(a.size());
  for (const auto& [i, v] : a) out.emplace_back(i, v * c);
  return out;
}

void SparseMat::add_entry(int i, int j, const Rational& v) {
  if (v == 0) return;
  if (i < 0 || i >= rows || j < 0 || j >= cols)
    throw BadDimension("matrix entry out of range");
  auto& c = col[j];
  auto it = std::lower_bound(c.begin(), c.end(), i,
                             [](const auto& p, int k) { return p.first < k; });
  if (it != c.end() && it->first == i) {
    it->second += v;
    if (it->second == 0) c.erase(it);
  } else {
    c.insert(it, {i, v});
  }
}

Rational SparseMat::at(int i, int j) const {
  for (const auto& [k, v] : col[j])
    if (k == i) return v;
  return 0;
}

bool SparseMat::is_zero() const {
  for (const auto& c : col)
    if (!c.empty()) return false;
  return true;
}

SparseVec SparseMat::apply(const SparseVec& x) const {
  SparseVec out;
  for (const auto& [j, v] : x) {
    if (j < 0 || j >= cols) throw BadDimension("vector index out of range");
    out = sparse_axpy(out, v, col[j]);
  }
  return out;
}

SparseMat SparseMat::mul(const SparseMat& a, const SparseMat& b) {
  if (a.cols != b.rows) throw BadDimension("matrix product shape mismatch");
  SparseMat out(a.rows, b.cols);
  for (int j = 0; j < b.cols; ++j) out.col[j] = a.apply(b.col[j]);
  return out;
}

SparseMat SparseMat::identity(int n) {
  SparseMat out(n, n);
  for (int i = 0; i < n; ++i) out.col[i] = {{i, 1}};
  return out;
}

SparseVec Echelon::reduce(SparseVec v) const {
  // Eliminate one pivot-indexed entry at a time. Each step cancels that
  // entry exactly and only introduces larger indices, so this terminates.
  size_t k = 0;
  while (k < v.size()) {
    auto it = pivots_.find(v[k].first);
    if (it == pivots_.end()) {
      ++k;
      continue;
    }
    v = sparse_axpy(v, -v[k].second, rows_[it->second]);
  }
  return v;
}

bool Echelon::add(SparseVec v) {
  v = reduce(std::move(v));
  if (v.empty()) return false;
  Rational lead = v.front().second;
  if (lead != 1) v = sparse_scale(v, Rational(1) / lead);
  pivots_[v.front().first] = static_cast<int>(rows_.size());
  rows_.push_back(std::move(v));
  return true;
}

int rank(const SparseMat& a) {
  Echelon e;
  for (const auto& c : a.col) e.add(c);
  return e.rank();
}

namespace {

// Columns augmented with unit tails at indices rows..rows+cols-1 so that
// dependencies among columns can be read off from reduced tails.
struct AugmentedEliminator {
  int rows;
  Echelon ech;

  explicit AugmentedEliminator(const SparseMat& a) : rows(a.rows) {
    for (int j = 0; j < a.cols; ++j) {
      SparseVec v = a.col[j];
      v.emplace_back(rows + j, 1);
      ech.add(std::move(v));
    }
  }

  static bool real_part_zero(const SparseVec& v, int rows) {
    return v.empty() || v.front().first >= rows;
  }
};

SparseVec strip_tail(const SparseVec& v, int rows) {
  SparseVec out;
  for (const auto& [i, c] : v)
    if (i >= rows) out.emplace_back(i - rows, c);
  return out;
}

}  // namespace

std::vector<SparseVec> kernel_basis(const SparseMat& a) {
  std::vector<SparseVec> out;
  Echelon ech;
  for (int j = 0; j < a.cols; ++j) {
    SparseVec v = a.col[j];
    v.emplace_back(a.rows + j, 1);
    SparseVec r = ech.reduce(std::move(v));
    if (AugmentedEliminator::real_part_zero(r, a.rows)) {
      out.push_back(strip_tail(r, a.rows));
    } else {
      ech.add(std::move(r));
    }
  }
  return out;
}

std::optional<SparseVec> solve(const SparseMat& a, const SparseVec& b) {
  AugmentedEliminator el(a);
  SparseVec r = el.ech.reduce(b);
  if (!AugmentedEliminator::real_part_zero(r, a.rows)) return std::nullopt;
  SparseVec x = strip_tail(r, a.rows);
  for (auto& [i, c] : x) c = -c;
  return x;
}

}  // namespace sgq
