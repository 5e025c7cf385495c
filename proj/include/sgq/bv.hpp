#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sgq/symplectic.hpp"

namespace sgq {

// Odd cotangent space of an affine space: coordinates x_i in degree 0 and
// fibers p_i in degree -1, together with the plain de Rham algebra of the
// base. Semidensities are spanned by f(x,p) * dx_1...dx_m.
struct OddCotangent {
  int m = 1;
  SymplecticCell cot;
  DeRhamAlgebra base;
  Element omega_vol;  // dx_1...dx_m upstairs
  Element base_vol;   // dx_1...dx_m downstairs
  std::vector<std::string> xs, ps, dxs, dps;
};

OddCotangent odd_cotangent(int m);

// True when every term is f(x,p) times the coordinate volume form.
bool is_semidensity(const OddCotangent& oc, const Element& e);

// Sum over i of d/dx_i d/dp_i, acting on semidensities. Throws
// NotSemidensity on anything else.
Element bv_laplacian(const OddCotangent& oc, const Element& semidensity);

// Odd Fourier transform from forms on the base to semidensities upstairs,
// g dx_S -> sign * g p_{S^c} vol, normalized so the de Rham differential
// goes to the divergence operator. Linear, not multiplicative.
Element odd_fourier(const OddCotangent& oc, const Element& form);
Element odd_fourier_inverse(const OddCotangent& oc, const Element& density);

// Transport of the de Rham differential through the odd Fourier transform.
Element divergence(const OddCotangent& oc, const Element& polyvector);

// Failure of the Laplacian to be a derivation on weight-zero functions:
// {f,g} = lap(fg) - lap(f) g - (-1)^{|f|} f lap(g).
Element bv_bracket(const OddCotangent& oc, const Element& f, const Element& g);

using ElementFn = std::function<Element(const Element&)>;

// Deformation retract with all five maps kept as exact symbolic operators.
// The realizations fix the window bases the identities are quantified over
// and carry the truncated matrices of the two differentials; the symbolic
// maps themselves never truncate, so every verified identity is exact.
struct DeformationRetract {
  OddCotangent space;
  Realization big;
  Realization small;
  ElementFn incl;     // small -> big
  ElementFn proj;     // big -> small
  ElementFn hom;      // big -> big, degree -1
  ElementFn big_d;    // differential upstairs
  ElementFn small_d;  // differential downstairs
  bool completed = false;
};

// Checks p i = 1, i p - 1 = d h + h d, h h = 0, h i = 0, p h = 0 and that
// i and p are chain maps, by exact evaluation on every window basis
// element. Throws RetractBroken naming the first failing identity and the
// element witnessing it.
void verify_retract(const DeformationRetract& r);

struct Perturbation {
  std::string name;
  ElementFn delta;  // degree +1 on big
  // Certified K with (delta h)^K = 0; the series for any element must die
  // within K applications or perturb throws CertificateInvalid.
  int nilpotence_bound = 1;
};

// Homological perturbation: transfers big differential d + delta to the
// small side via A = sum_k (delta h)^k delta, evaluated exactly per
// element. Re-verifies every retract identity on the result and refreshes
// the truncated differential matrices of both realizations.
DeformationRetract perturb(const DeformationRetract& r, const Perturbation& del);

// Retract of forms on the odd cotangent space onto forms on the base along
// the fiber Euler field; h divides the contraction by the fiber weight.
DeformationRetract sdr_euler(int m, bool completed, const Window& w);

// Retract of forms with the Koszul differential lambda * (dp wedge dx) onto
// semidensities with the zero differential; h inverts the Koszul operator
// through the grading operator built from the fiberwise double contraction.
DeformationRetract sdr_severa(int m, const Rational& lambda, const Window& w);

// route "euler": perturbs by omega wedge, expects the induced differential
// to stay the de Rham differential bit for bit. route "severa": perturbs by
// lambda d, expects lambda times the BV Laplacian. Cross-checks cohomology
// of the two sides. completed must match the route's convergence needs.
CheckReport verify_bv_equivalence(int m, const std::string& route,
                                  const Rational& lambda, const Window& w,
                                  bool completed);

// Weightwise prequantization check on a (-1)-shifted cell: f0 a unit,
// hs[k] the weight k+1 correction of cohomological degree zero, omega a
// closed 2-form. Verifies (internal + d + omega wedge)(f0 exp(sum hs)) = 0
// both directly and through the termwise connection equations, which must
// agree. Truncation beyond the window weight turns PASS into INCONCLUSIVE.
CheckReport check_m1_prequantization(const DeRhamAlgebra& dr, const Element& f0,
                                     const std::vector<Element>& hs,
                                     const Element& omega, const Window& w);

}  // namespace sgq
