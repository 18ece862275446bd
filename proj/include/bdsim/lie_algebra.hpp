#pragma once

#include <string>
#include <vector>

#include "bdsim/linalg.hpp"

namespace bdsim {

// Lie algebra data with a reductive split adapted to a single orbit type.
// Index blocks: H_idx spans the isotropy subalgebra, Khat_idx the centralizer
// directions surviving in the structure group, Lbar_idx the remaining coset
// directions. Coset ordering downstream is always Khat then Lbar.
struct LieAlgebraSpec {
  int dim_G = 0;
  std::vector<double> f;        // f^C_AB flattened as (C*dim_G + A)*dim_G + B
  std::vector<CMat> generators;  // anti-Hermitian Q_A, one per algebra index
  std::vector<int> H_idx;
  std::vector<int> Khat_idx;
  std::vector<int> Lbar_idx;
  Mat inner_product;  // SPD bilinear form on algebra indices

  double fc(int C, int A, int B) const { return f[(static_cast<size_t>(C) * dim_G + A) * dim_G + B]; }
  double& fc(int C, int A, int B) { return f[(static_cast<size_t>(C) * dim_G + A) * dim_G + B]; }

  int coset_dim() const { return static_cast<int>(Khat_idx.size() + Lbar_idx.size()); }
  // Coset index list, Khat block first.
  std::vector<int> coset_idx() const;

  // ad(X)^A_B = X^C f^A_CB
  MatA ad(const VecA& X) const;
  // Σ_A c^A Q_A
  CMat algebra_element(const VecA& c) const;
  // -tr(ad ad), scaled so the first diagonal entry is 1
  static Mat normalized_killing_form(const LieAlgebraSpec& spec);
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool passed = false;
  const CheckResult* find(const std::string& name) const;
};

// Runs every structural invariant: antisymmetry, Jacobi, generator
// commutators vs f, closure of the reductive split, unimodularity,
// block-orthogonality of the inner product. Malformed index partitions
// (overlap, omission, out-of-range) throw StructuralError instead of
// appearing as failed checks.
ValidationReport validate_decomposition(const LieAlgebraSpec& spec);

// exp(Σ c^A Q_A) in the faithful representation.
CMat group_exp(const LieAlgebraSpec& spec, const VecA& coefficients);

// D^A_B with g Q_B g^{-1} = Σ_A D^A_B Q_A, via Gram decomposition onto the
// generator basis. g must be unitary to 1e-8.
MatA adjoint_matrix(const LieAlgebraSpec& spec, const CMat& g);

}  // namespace bdsim
