#pragma once

#include <map>
#include <optional>
#include <vector>

#include "sgq/rational.hpp"

namespace sgq {

// Sparse vector over the rationals: (index, value) pairs, indices strictly
// increasing, values nonzero.
using SparseVec = std::vector<std::pair<int, Rational>>;

SparseVec sparse_axpy(const SparseVec& a, const Rational& c, const SparseVec& b);
SparseVec sparse_scale(const SparseVec& a, const Rational& c);

// Column-major sparse rational matrix.
struct SparseMat {
  int rows = 0;
  int cols = 0;
  std::vector<SparseVec> col;

  SparseMat() = default;
  SparseMat(int r, int c) : rows(r), cols(c), col(c) {}

  void add_entry(int i, int j, const Rational& v);
  Rational at(int i, int j) const;
  bool is_zero() const;
  SparseVec apply(const SparseVec& x) const;  // sum_j x_j col_j
  static SparseMat mul(const SparseMat& a, const SparseMat& b);
  static SparseMat identity(int n);
};

// Incremental exact row echelon form. Rows are normalized to leading
// coefficient one; pivots are the smallest indices.
class Echelon {
 public:
  SparseVec reduce(SparseVec v) const;
  bool add(SparseVec v);  // true when the rank grew
  int rank() const { return static_cast<int>(rows_.size()); }
  const std::vector<SparseVec>& rows() const { return rows_; }

 private:
  std::map<int, int> pivots_;  // pivot index -> position in rows_
  std::vector<SparseVec> rows_;
};

int rank(const SparseMat& a);

// Basis of { x : A x = 0 } in column coordinates.
std::vector<SparseVec> kernel_basis(const SparseMat& a);

// Any solution of A x = b, or nothing when b is outside the column span.
std::optional<SparseVec> solve(const SparseMat& a, const SparseVec& b);

}  // namespace sgq
