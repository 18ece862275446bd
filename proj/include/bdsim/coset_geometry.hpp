#pragma once

#include <array>

#include "bdsim/lie_algebra.hpp"

namespace bdsim {

// Single exponential-coordinate chart on the coset fiber. Coordinates are
// ordered Khat block first, then Lbar. radius_cutoff is the hard trust
// boundary for frame evaluation; integrators re-center well inside it.
struct CosetChart {
  const LieAlgebraSpec* spec = nullptr;
  double safe_radius = 0.0;
  double radius_cutoff = 0.0;  // default 0.9 * safe_radius

  int coset_dim() const { return spec->coset_dim(); }
};

CosetChart make_chart(const LieAlgebraSpec& spec, double safe_radius, double cutoff_fraction = 0.9);

// All y-dependent geometric data at one chart point.
struct CosetFrame {
  VecA y;
  CMat L;        // exp(y^a Q_a) in the faithful representation
  MatA e_full;   // dL L^{-1} coefficients, dim_G x coset_dim
  MatA e_co;     // coset-row block of e_full
  MatA e_recip;  // inverse of e_co
  MatA D_adj;    // adjoint matrix of L
  MatA D_bar;    // coset columns of D_adj^{-1}, dim_G x coset_dim
  MatA phi;      // D_bar * e_co
  MatA killing;  // e_recip * (coset rows of D_adj), coset_dim x dim_G
  MatA proj;     // D_bar * (coset rows of D_adj)
  double det_e = 0.0;
  std::array<MatA, kMaxDim> de_full;  // per coordinate: d(e_full)/dy^nu
  std::array<MatA, kMaxDim> dK;       // per coordinate: d(killing)/dy^nu
};

// Production route: one eigendecomposition of ad(X) with divided-difference
// derivatives. Falls back to the series route when ad(X) is not antisymmetric.
CosetFrame frame_at(const CosetChart& chart, const VecA& y);

// Reference route: differential-of-exponential series in the faithful
// representation, decomposed onto the generator basis; derivatives by central
// differences. Slower; used as the independent oracle.
CosetFrame frame_at_series(const CosetChart& chart, const VecA& y);

struct FiberMetric {
  MatA gamma;
  MatA gamma_inv;
  double det = 0.0;
};

FiberMetric fiber_metric(const CosetFrame& frame, const MatA& g_coset);

struct DriftContractions {
  VecA gamma_F;  // gamma^{mu nu} F^alpha_{mu nu}
  VecA haa_F;    // (h A A e e)^{mu nu} F^alpha_{mu nu}
};

// Contract the curvature-like tensor F^alpha_{mu nu} = -phi^A_mu d_nu K^alpha_A
// with two symmetric bilinear forms without materializing F.
DriftContractions f_tensor_contractions(const CosetFrame& frame, const MatA& gamma_inv,
                                        const MatA& haa);

// Explicit F assembly for oracle comparisons: result[alpha](mu, nu).
std::vector<MatA> f_tensor(const CosetFrame& frame);

// Residual of -gamma^{mu nu} F^alpha_{mu nu} against the divergence-form
// drift (1/sqrt(det gamma)) d_beta (sqrt(det gamma) gamma^{alpha beta}),
// the identity the drift simplification rests on. Finite differences, step h.
double gamma_f_divergence_residual(const CosetChart& chart, const VecA& y, const MatA& g_coset,
                                   double h = 1e-5);

// Split g = exp(h-coefficients) * L_y for right-coset bookkeeping.
struct CosetSplit {
  VecA y;
  VecA h_coeffs;  // length dim_G, supported on H indices
  int iterations = 0;
};

CosetSplit coset_split(const CosetChart& chart, const CMat& g);

// Principal-branch log of a unitary group element, decomposed onto the
// generator basis.
VecA log_coefficients(const LieAlgebraSpec& spec, const CMat& g);

// Coefficients c with sum c^A Q_A closest to M under the trace pairing.
VecA decompose_onto_generators(const LieAlgebraSpec& spec, const CMat& M);

}  // namespace bdsim
