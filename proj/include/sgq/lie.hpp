#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sgq/linalg.hpp"
#include "sgq/rational.hpp"
#include "sgq/report.hpp"

namespace sgq {

using QVec = std::vector<Rational>;
using QMat = std::vector<std::vector<Rational>>;

// A finite-dimensional Lie algebra over the rationals, presented by structure
// constants on a named basis. Antisymmetry and the Jacobi identity are
// verified at construction; a supplied pairing is verified invariant.
struct LieAlgebraData {
  int dim = 0;
  std::vector<std::string> basis;
  // constants[i][j] = coordinates of [e_i, e_j]
  std::vector<std::vector<QVec>> constants;
  std::optional<QMat> pairing;
  std::map<std::string, QVec> marked;

  int index_of(const std::string& name) const;
  QVec unit(int i) const;
  QVec bracket(const QVec& a, const QVec& b) const;
  SparseMat ad(const QVec& a) const;
  QMat killing() const;
  Rational pair(const QVec& a, const QVec& b) const;
  // The functional <a, -> in dual coordinates.
  QVec kappa(const QVec& a) const;
  std::string str(const QVec& v) const;
};

LieAlgebraData lie_algebra(std::vector<std::string> basis,
                           std::vector<std::vector<QVec>> constants,
                           std::optional<QMat> pairing = {});

LieAlgebraData sl2();
LieAlgebraData sl3();
LieAlgebraData gl2();
LieAlgebraData sp4();

struct Subalgebra {
  LieAlgebraData parent;
  std::vector<QVec> basis;
  bool is_parabolic_role = false;
  bool is_levi_role = false;
};

// Verifies closure under the bracket.
Subalgebra subalgebra(const LieAlgebraData& g, std::vector<QVec> basis,
                      bool parabolic_role = false, bool levi_role = false);

struct Sl2Triple {
  QVec e, h, f;
};

// Completes a nonzero nilpotent e to a triple {e, h, f} with [h,e] = 2e,
// [h,f] = -2f, [e,f] = h by exact linear solves.
Sl2Triple sl2_triple(const LieAlgebraData& g, const QVec& e);

// Exactness of l -> g -> g* -> l* where the middle map pairs against x and
// l must be exactly the stabilizer of x.
CheckReport coadjoint_exactness(const LieAlgebraData& g, const QVec& x,
                                const Subalgebra& l);

// Lagrangian-fibration verdict for the flag of subalgebras l inside p: equal
// complementary dimensions and an invertible induced pairing on g/p x p/l.
CheckReport levi_parabolic_check(const LieAlgebraData& g, const QVec& x,
                                 const Subalgebra& l, const Subalgebra& p);

struct SlodowyData {
  std::map<int, std::vector<QVec>> grading;
  std::vector<QVec> lagrangian;
  std::vector<QVec> m;
  std::vector<QVec> centralizer_f;
  CheckReport report;
};

// Grading by the semisimple element, the symplectic pairing chi([-,-]) on the
// (-1) part, a deterministic Lagrangian, the nilpotent subalgebra m and its
// dimension identity dim g - 2 dim m = dim g^f.
SlodowyData slodowy(const LieAlgebraData& g, const Sl2Triple& t);

}  // namespace sgq
