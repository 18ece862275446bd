#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bdsim/coset_geometry.hpp"
#include "bdsim/lie_algebra.hpp"
#include "bdsim/linalg.hpp"

namespace bdsim {

// A unitary irreducible representation of the symmetry group together with the
// unit vectors whose matrix-element rows descend to functions on the coset.
struct IrrepSpec {
  std::string label;
  int dim = 0;
  std::vector<CMat> J;          // action of each generator, anti-hermitian
  std::vector<CVec> spherical;  // annihilated by every isotropy generator
};

// [J_A,J_B] = f^C_AB J_C, anti-hermiticity, and isotropy-invariance of the
// spherical vectors.
ValidationReport validate_irrep(const LieAlgebraSpec& spec, const IrrepSpec& irrep);

IrrepSpec su2_ladder_irrep(const LieAlgebraSpec& spec, int twice_spin);
IrrepSpec su3_fundamental_irrep(const LieAlgebraSpec& spec);
IrrepSpec trivial_irrep(const LieAlgebraSpec& spec);

CMat algebra_action(const IrrepSpec& irrep, const VecA& coeffs);
CMat rep_element(const IrrepSpec& irrep, const VecA& coeffs);

// Image of the coset section exp(y^a Q_a).
CMat coset_rep_element(const IrrepSpec& irrep, const LieAlgebraSpec& spec, const VecA& y);

// Sum over generators of J_A J_A in the inner-product-orthonormal basis.
CMat casimir_matrix(const IrrepSpec& irrep);

// Max over chart directions of || d/dy^mu D - e^A_mu J_A D || with a central
// finite difference on the left factor.
double derivative_identity_residual(const IrrepSpec& irrep, const CosetChart& chart, const VecA& y,
                                    double step = 1e-6);

struct CosetQuadrature {
  Mat nodes;    // one chart point per row
  Vec weights;  // include the invariant density
  double volume = 0.0;
};

// Gauss-Legendre radius times uniform angle, two-dimensional charts only.
CosetQuadrature polar_quadrature(const CosetChart& chart, int n_radial = 48, int n_angular = 64);

// Tensor Gauss-Legendre grid restricted to the chart ball. Diagnostic grade:
// the restriction boundary limits convergence.
CosetQuadrature product_quadrature(const CosetChart& chart, int points_per_dim);

// phi(y) = sum_rho v_rho^dag D(L_y) c(:,rho) for coefficient columns c.
cplx synthesize_value(const IrrepSpec& irrep, const CMat& D, const CMat& c);

// Coefficients (dim x n_spherical) recovering phi from synthesize_value.
CMat expand_on_coset(const IrrepSpec& irrep, const LieAlgebraSpec& spec,
                     const CosetQuadrature& quad, const std::function<cplx(const VecA&)>& phi);

// Relative node-space L2 error after expanding and re-synthesizing phi over a
// set of irreps.
double aliasing_residual(const std::vector<const IrrepSpec*>& irreps, const LieAlgebraSpec& spec,
                         const CosetQuadrature& quad, const std::function<cplx(const VecA&)>& phi);

}  // namespace bdsim
