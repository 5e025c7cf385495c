#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sgq/algebra.hpp"
#include "sgq/linalg.hpp"

namespace sgq {

// Truncation window for realizing symbolic data as finite complexes.
// Monomials are kept when their degree lies in [deg_min, deg_max], their
// weight in [weight_min, weight_max] and their size within the per-weight
// bound derived from size_bound and the declared operator growth.
struct Window {
  int deg_min = -4;
  int deg_max = 4;
  int weight_min = 0;
  int weight_max = 6;
  int size_bound = 8;
  std::string str() const;
};

// Finite cochain complex of rational vector spaces with labeled bases.
// Slot k holds degree deg_lo + k; diff[k] maps slot k to slot k+1.
// complete means every degree outside the stored span is genuinely zero,
// otherwise cohomology at the boundary degrees is not trusted.
struct Complex {
  int deg_lo = 0;
  std::vector<std::vector<std::string>> labels;
  std::vector<SparseMat> diff;
  bool complete = true;
  std::string name;

  int slots() const { return static_cast<int>(labels.size()); }
  int deg_hi() const { return deg_lo + slots() - 1; }
  int slot_of(int degree) const { return degree - deg_lo; }
  bool has_degree(int degree) const {
    return degree >= deg_lo && degree <= deg_hi();
  }
  int dim(int degree) const;
  const SparseMat* diff_from(int degree) const;  // null when out of range

  // Degrees whose cohomology this complex can certify. Unbounded when
  // complete; otherwise the interior of the stored span.
  bool degree_definitive(int degree) const;

  void verify_square_zero() const;  // throws NotSquareZero
  std::string describe(int degree, const SparseVec& v) const;
};

struct CohomologyGroup {
  int degree = 0;
  int dim = 0;
  std::vector<SparseVec> reps;
  bool definitive = true;
};

// Kernel of the outgoing differential modulo the image of the incoming one.
// Representatives are reduced against the image and sorted by support size.
CohomologyGroup cohomology(const Complex& c, int degree);

// Degree-preserving map of complexes; mats are indexed by source slot and
// land in the target slot of the same absolute degree (zero when the target
// misses that degree).
struct ChainMap {
  const Complex* src = nullptr;
  const Complex* tgt = nullptr;
  std::vector<SparseMat> mats;
  std::string name;

  const SparseMat* mat_at(int degree) const;
};

void verify_chain_map(const ChainMap& f);  // throws NotChainMap

struct SequenceResult {
  bool ok = true;
  std::string witness;  // obstruction class when ok is false
};

// Acyclicity of the mapping cone over every certifiable degree.
// Throws WindowTooSmall when no degree at all can be certified.
SequenceResult is_quasi_iso(const ChainMap& f);

// f then g compose to zero and the total complex of src -> mid -> tgt is
// acyclic where certifiable. Throws NotChainMap / NonZeroComposite first.
SequenceResult is_fiber_sequence(const ChainMap& f, const ChainMap& g);

// One operator of a mixed structure: raises degree by delta_degree, weight
// by delta_weight (zero for the internal differential) and monomial size by
// at most max_delta_size.
struct WeightOp {
  std::string name;
  int delta_degree = 1;
  int delta_weight = 0;
  int max_delta_size = 0;
  std::function<Element(const Element&)> apply;
};

// Graded algebra together with a finite family of weight-graded operators
// whose total sum squares to zero.
struct MixedComplex {
  AlgebraPtr alg;
  std::string name;
  std::vector<WeightOp> ops;
};

// Finite model of a mixed complex over a window: basis, total differential
// and translation between elements and coordinate vectors.
struct Realization {
  AlgebraPtr alg;
  Window window;
  int slope = 0;
  Complex complex;
  std::vector<std::vector<Monomial>> basis;       // per slot
  std::map<Monomial, std::pair<int, int>> index;  // monomial -> (slot, row)

  Element to_element(int degree, const SparseVec& v) const;
  // Coordinates of a homogeneous-degree element; nothing when a term falls
  // outside the window basis.
  std::optional<SparseVec> to_vector(const Element& e, int* degree_out) const;
  int total_dim() const;
};

// Enumerates the window basis, builds the total differential and checks
// exactly, term by term on basis elements, that the weight components of
// the squared total differential vanish.
Realization realize(const MixedComplex& mc, const Window& w,
                    bool check_square_zero = true);

// Compiles a linear operator between two realizations into a chain map.
// Terms whose weight exceeds the target window are dropped when
// allow_weight_drop is set (quotient semantics); any other miss throws
// WindowTooSmall.
ChainMap realize_map(const Realization& src, const Realization& tgt,
                     const std::function<Element(const Element&)>& f,
                     std::string name, bool allow_weight_drop = true);

// The complex with a single rational class in degree zero.
Complex constants_complex();

// Chain map from constants into the degree-zero units of a realization.
ChainMap constants_into(const Complex& constants, const Realization& r);

}  // namespace sgq
