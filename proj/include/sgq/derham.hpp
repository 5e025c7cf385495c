#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sgq/algebra.hpp"
#include "sgq/complexes.hpp"

namespace sgq {

// Linear combination of words in generator names; usable before the algebra
// that interprets it exists.
using WordCombo = std::vector<std::pair<Rational, RelationSpec::Word>>;

struct CellGenerator {
  std::string name;
  int degree = 0;
  bool invertible = false;
  int size_weight = 1;
};

// A global frame of one-form generators replacing the coordinate forms dg.
// Needed when relations among the base coordinates would force relations
// among their differentials.
struct FrameSpec {
  std::vector<GeneratorSpec> gens;
  std::map<std::string, WordCombo> d_images;
};

struct AffineCell {
  std::string name;
  std::vector<CellGenerator> gens;
  std::vector<RelationSpec> relations;
  std::optional<FrameSpec> frame;
  // Optional internal differential (degree +1, weight 0), images by name.
  std::map<std::string, WordCombo> internal;
  int internal_growth = 0;
};

struct DeRhamAlgebra {
  AffineCell cell;
  AlgebraPtr alg;
  Derivation d;
  std::optional<Derivation> internal;
  std::map<std::string, std::string> form_of;
  int d_growth = 0;

  bool coordinate() const { return form_of.size() == cell.gens.size(); }
  std::vector<WeightOp> ops() const;
  MixedComplex mixed() const;
};

struct FormClass {
  int p = 0;  // weight
  int n = 0;  // degree as a p-form; cohomological degree is p + n
  std::vector<Element> tail;
};

// A vector field given by its coefficients on the coordinate fields,
// keyed by base generator name.
struct VectorField {
  std::string name;
  std::map<std::string, Element> components;
};

AffineCell affine_cell(std::string name, std::vector<CellGenerator> gens);
AffineCell affine_space(int m);
AffineCell torus_cell(int k);
AffineCell sl2_cell(const std::string& suffix = "");
AffineCell product_cell(const AffineCell& a, const AffineCell& b,
                        std::string name = "");

DeRhamAlgebra de_rham(const AffineCell& cell);

FormClass classify_form(const Element& e);

Element dlog(const DeRhamAlgebra& dr, const Element& f);

Realization twisted_de_rham(const DeRhamAlgebra& dr, const Element& alpha,
                            const Window& w);

Derivation contraction(const DeRhamAlgebra& dr, const VectorField& v);
Derivation lie_operator(const DeRhamAlgebra& dr, const VectorField& v);
Element lie_derivative(const DeRhamAlgebra& dr, const VectorField& v,
                       const Element& e);

using MatrixOfForms = std::array<std::array<Element, 2>, 2>;

enum class MaurerCartanSide { left, right };

MatrixOfForms maurer_cartan(const DeRhamAlgebra& dr,
                            MaurerCartanSide side,
                            const std::string& suffix = "");

}  // namespace sgq
