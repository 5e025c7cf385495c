#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgq/derham.hpp"
#include "sgq/lie.hpp"
#include "sgq/report.hpp"
#include "sgq/symplectic.hpp"

namespace sgq {

// A symplectic cell with an infinitesimal action of g, a moment map given
// componentwise on the basis of g, and optional single-chart prequantum data:
// a global connection one-form and the equivariance functions beta.
struct HamiltonianDatum {
  SymplecticCell cell;
  LieAlgebraData g;
  std::vector<VectorField> action;
  std::vector<Element> moment;
  std::optional<Element> connection;
  std::vector<Element> beta;
  std::vector<std::string> fibration;
};

// Validates that the action is a Lie algebra map on basis pairs.
HamiltonianDatum hamiltonian_datum(SymplecticCell cell, LieAlgebraData g,
                                   std::vector<VectorField> action,
                                   std::vector<Element> moment);

// The scaling action of the one-dimensional torus on the cotangent space of
// the affine line, with its prequantum chart data.
HamiltonianDatum scaling_datum();
// Left translations on the cotangent space of the one-dimensional torus.
HamiltonianDatum torus_translation_datum();

// iota_{a(x)} omega = sign * d mu(x) for every basis element, bit-exactly.
CheckReport moment_check(const HamiltonianDatum& X, int sign = 1);

// Equivariant de Rham algebra: forms on the cell tensored with a polynomial
// generator t_a of degree 2 per basis element of g, internal differential
// extended by sum_a t_a iota_{a(e_a)}. Verifies on the window basis that the
// square of the total differential is sum_a t_a L_{a(e_a)}, hence zero on
// invariants.
struct CartanModel {
  AlgebraPtr alg;
  std::vector<std::string> ts;
  AlgebraMap include;
  Derivation d;
  Derivation internal;
  MixedComplex mixed() const;
};

CartanModel cartan_model(const HamiltonianDatum& X, const Window& w);

// Single-chart prequantization: dA = omega, iota_a A + mu = beta, A vanishes
// on the fiber directions of the chosen fibration, and the fibration itself
// is Lagrangian on the window.
CheckReport equivariant_prequantization_check(const HamiltonianDatum& X,
                                              const Window& w, int sign = 1);

// The three multiplicative identities of the invariant-pairing data on the
// group cell: closedness of the degree-three invariant, the primitive
// identity for the two-form on the double product, and the cocycle identity
// on the triple product. pairing scales the trace form; h_scale deliberately
// mis-scales the three-form to exercise the failure path.
CheckReport bg_multiplicativity(const Rational& pairing = 1,
                                const Rational& h_scale = 1);

// Searches for a Laurent one-form primitive of omega with every exponent
// bounded by box in absolute value.
std::optional<Element> primitive_in_box(const DeRhamAlgebra& dr,
                                        const Element& omega, int box);

// The log-log two-form on the two-torus is closed but has no Laurent
// primitive at any exponent bound up to sweep_to.
CheckReport gm_nonexactness(int sweep_to = 8);

}  // namespace sgq
