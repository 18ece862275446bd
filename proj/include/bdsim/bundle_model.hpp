#pragma once

#include <cstdint>
#include <functional>

#include "bdsim/coset_geometry.hpp"

namespace bdsim {

struct Box {
  Vec lo, hi;
  bool contains(const Vec& x) const {
    for (int i = 0; i < x.size(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }
};

// Base manifold chart. dim may be zero (coset-only models); then h is unused.
struct BaseChart {
  int dim = 0;
  std::function<Mat(const Vec&)> h;
  Box domain;

  Mat h_at(const Vec& x) const { return dim ? h(x) : Mat(0, 0); }
};

// Connection coefficients A^bhat_i(x), one row per Khat direction. The
// optional callback supplies (1/W) d_i(W h^{ij} A_j) analytically.
struct ConnectionField {
  std::function<Mat(const Vec&)> A;
  std::function<Vec(const Vec&)> div_callback;
};

struct HorizontalAlgebraMetric {
  std::function<MatA(const Vec&)> g;
};

struct KaluzaKleinMetric {
  Mat G;      // full (base+coset) metric, base block first
  Mat G_inv;  // closed-form inverse
  double det = 0.0;
  Mat B;  // B^alpha_i, coset x base
  FiberMetric fiber;
  Mat h, h_inv;
  double det_h = 1.0;
};

// Joint metric with blocks (h + B^T gamma B, B^T gamma; gamma B, gamma).
KaluzaKleinMetric assemble_metric(const BaseChart& base, const ConnectionField& conn,
                                  const HorizontalAlgebraMetric& gmet, const CosetFrame& frame,
                                  const Vec& x);

// Infinitesimal isotropy-invariance residual of a fiber metric matrix.
double adh_invariance_residual(const LieAlgebraSpec& spec, const MatA& g_coset);

// Max residual over sampled domain points.
double invariance_report(const BaseChart& base, const HorizontalAlgebraMetric& gmet,
                         const LieAlgebraSpec& spec, int samples, uint64_t seed);

// (1/W) d_i (W h^{ij} A^bhat_j) with W = sqrt(det h det g); central
// differences unless the connection supplies the analytic callback.
Vec connection_divergence(const BaseChart& base, const ConnectionField& conn,
                          const HorizontalAlgebraMetric& gmet, const Vec& x, double step = 1e-5);

// (1/W) d_n (h^{ni} W), the base-sector divergence drift without its
// 0.5 mu^2 kappa prefactor.
Vec base_divergence_drift(const BaseChart& base, const HorizontalAlgebraMetric& gmet, const Vec& x,
                          double step = 1e-5);

// Everything the dynamics needs: chart, base fields, and the optional
// base-only potential entering the exponential weight.
struct BundleModel {
  const LieAlgebraSpec* spec = nullptr;
  CosetChart chart;
  BaseChart base;
  ConnectionField conn;
  HorizontalAlgebraMetric gmet;
  std::function<double(const Vec&)> potential;

  int khat_dim() const { return static_cast<int>(spec->Khat_idx.size()); }
  double potential_at(const Vec& x) const { return potential ? potential(x) : 0.0; }
};

}  // namespace bdsim
