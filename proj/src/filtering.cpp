#include "bdsim/filtering.hpp"

namespace bdsim {

ReducedGenerator make_reduced_generator(const IrrepSpec& irrep, const LieAlgebraSpec& spec) {
  if (static_cast<int>(irrep.J.size()) != spec.dim_G)
    throw StructuralError("irrep generator count does not match the algebra");
  ReducedGenerator rg;
  rg.irrep = &irrep;
  for (int a : spec.coset_idx()) rg.J_coset.push_back(irrep.J[a]);
  for (int a : spec.Khat_idx) rg.J_khat.push_back(irrep.J[a]);
  const int nc = static_cast<int>(rg.J_coset.size());
  rg.JJ.resize(nc);
  for (int a = 0; a < nc; ++a) {
    rg.JJ[a].reserve(nc);
    for (int b = 0; b < nc; ++b) rg.JJ[a].push_back(rg.J_coset[a] * rg.J_coset[b]);
  }
  return rg;
}

namespace {

CMat quadratic_term(const ReducedGenerator& rg, const MatA& g_inv) {
  const int d = rg.irrep->dim;
  const int nc = static_cast<int>(rg.J_coset.size());
  CMat out = CMat::Zero(d, d);
  for (int a = 0; a < nc; ++a)
    for (int b = 0; b < nc; ++b) out += g_inv(a, b) * rg.JJ[a][b];
  return out;
}

CMat divergence_term(const ReducedGenerator& rg, const BundleModel& model, const Vec& x) {
  const int d = rg.irrep->dim;
  CMat out = CMat::Zero(d, d);
  const int nk = static_cast<int>(rg.J_khat.size());
  if (nk == 0 || model.base.dim == 0) return out;
  Vec dv = connection_divergence(model.base, model.conn, model.gmet, x);
  for (int b = 0; b < nk; ++b) out -= dv[b] * rg.J_khat[b];
  return out;
}

}  // namespace

CMat lambda_full(const ReducedGenerator& rg, const BundleModel& model, double mu2_kappa,
                 const Vec& x) {
  MatA g = model.gmet.g(x);
  CMat out = quadratic_term(rg, g.inverse()) + divergence_term(rg, model, x);
  const int nk = static_cast<int>(rg.J_khat.size());
  if (nk > 0 && model.base.dim > 0) {
    MatA A = model.conn.A(x);
    MatA h_inv = model.base.h_at(x).inverse();
    MatA S = A * h_inv * A.transpose();
    for (int a = 0; a < nk; ++a)
      for (int b = 0; b < nk; ++b) out += S(a, b) * rg.J_khat[a] * rg.J_khat[b];
  }
  return 0.5 * mu2_kappa * out;
}

CMat lambda_tilde(const ReducedGenerator& rg, const BundleModel& model, double mu2_kappa,
                  const Vec& x) {
  MatA g = model.gmet.g(x);
  return 0.5 * mu2_kappa * (quadratic_term(rg, g.inverse()) + divergence_term(rg, model, x));
}

CMat theta_contraction(const ReducedGenerator& rg, const BundleModel& model, const Vec& x,
                       const Vec& noise_dx) {
  const int d = rg.irrep->dim;
  CMat out = CMat::Zero(d, d);
  const int nk = static_cast<int>(rg.J_khat.size());
  if (nk == 0 || model.base.dim == 0) return out;
  MatA A = model.conn.A(x);
  VecA w = A * noise_dx;
  for (int b = 0; b < nk; ++b) out -= w[b] * rg.J_khat[b];
  return out;
}

CMat filter_factor(const ReducedGenerator& rg, const BundleModel& model,
                   const SimulationParams& prm, const Vec& x, const Vec& noise_dx) {
  CMat exponent = lambda_tilde(rg, model, prm.mu2_kappa, x) * prm.dt +
                  theta_contraction(rg, model, x, noise_dx);
  return matrix_exp(exponent);
}

CMat filter_step(const ReducedGenerator& rg, const BundleModel& model,
                 const SimulationParams& prm, const Vec& x, const Vec& noise_dx, const CMat& M) {
  return filter_factor(rg, model, prm, x, noise_dx) * M;
}

}  // namespace bdsim
