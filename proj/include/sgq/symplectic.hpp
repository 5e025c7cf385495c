#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sgq/derham.hpp"
#include "sgq/report.hpp"

namespace sgq {

struct SymplecticCell {
  DeRhamAlgebra dr;
  std::vector<std::string> base;
  std::vector<std::string> fiber;
  Element lambda;
  Element omega;
  int shift = 0;
};

SymplecticCell shifted_cotangent(const AffineCell& base, int n);
SymplecticCell magnetic_cotangent(const DeRhamAlgebra& base_dr,
                                  const Element& b_form);
SymplecticCell derived_critical_locus(const DeRhamAlgebra& base_dr,
                                      const Element& potential);
SymplecticCell twisted_cotangent(const DeRhamAlgebra& base_dr,
                                 const Element& alpha, int n);

// Splits a one-form into coefficients of the weight-one generators:
// alpha = sum_h out[h] * h with each out[h] of weight 0.
std::map<std::string, Element> one_form_components(const Element& alpha);

// Matrix of the pairing v -> iota_v omega in the generator bases; entry
// (h, g) is the dh-component of iota_{d/dg} omega.
std::vector<std::vector<Element>> omega_sharp_matrix(const DeRhamAlgebra& dr,
                                                     const Element& omega);

Element determinant(const std::vector<std::vector<Element>>& m);
bool is_unit(const Element& e);

CheckReport check_nondegenerate(const DeRhamAlgebra& dr, const Element& omega);
CheckReport check_nondegenerate(const SymplecticCell& cell);

CheckReport check_lagrangian_fibration(const SymplecticCell& cell,
                                       const std::vector<std::string>& projection,
                                       const Window& w);

CheckReport parity_obstruction(const std::map<int, int>& tangent_dims,
                               const std::optional<std::map<int, int>>& fiber_dims,
                               int n);

CheckReport liouville_pullback_check(const DeRhamAlgebra& base_dr,
                                     const Element& alpha,
                                     std::optional<int> shift = {});

}  // namespace sgq
