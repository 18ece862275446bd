#pragma once

#include <vector>

#include "bdsim/bundle_model.hpp"
#include "bdsim/representation.hpp"
#include "bdsim/sde.hpp"

namespace bdsim {

// Precomputed generator data for accumulating the matrix weight along a base
// path. J_coset follows the chart ordering (structure-group block first), and
// JJ caches the pairwise products entering the quadratic drift term.
struct ReducedGenerator {
  const IrrepSpec* irrep = nullptr;
  std::vector<CMat> J_coset;
  std::vector<CMat> J_khat;
  std::vector<std::vector<CMat>> JJ;
};

ReducedGenerator make_reduced_generator(const IrrepSpec& irrep, const LieAlgebraSpec& spec);

// Generator of the averaged weight: 0.5 mu^2 kappa (g^{ab} J_a J_b
// + h^{ij} A_i A_j J J - divA J) evaluated at x. E[M_t] solves dE/dt = lambda_full E
// when the coefficients are x-independent.
CMat lambda_full(const ReducedGenerator& rg, const BundleModel& model, double mu2_kappa,
                 const Vec& x);

// Drift matrix of one filter factor: the quadratic connection term is absent
// because the factor carries the realized noise instead.
CMat lambda_tilde(const ReducedGenerator& rg, const BundleModel& model, double mu2_kappa,
                  const Vec& x);

// -(A noise_dx)^b J_b over structure-group channels. noise_dx is the realized
// base increment from the path hooks and already carries mu sqrt(kappa).
CMat theta_contraction(const ReducedGenerator& rg, const BundleModel& model, const Vec& x,
                       const Vec& noise_dx);

// exp(lambda_tilde dt + theta) for one step.
CMat filter_factor(const ReducedGenerator& rg, const BundleModel& model,
                   const SimulationParams& prm, const Vec& x, const Vec& noise_dx);

// Applies one step to the running weight; the new factor multiplies on the left.
CMat filter_step(const ReducedGenerator& rg, const BundleModel& model,
                 const SimulationParams& prm, const Vec& x, const Vec& noise_dx, const CMat& M);

}  // namespace bdsim
