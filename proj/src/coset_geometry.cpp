#include "bdsim/coset_geometry.hpp"

#include <cmath>

namespace bdsim {

namespace {

cplx phi_fn(cplx z) {
  if (std::abs(z) < 1e-4)
    return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)));
  return (std::exp(z) - 1.0) / z;
}

cplx phi_deriv(cplx z) {
  if (std::abs(z) < 1e-4)
    return 0.5 + z * (1.0 / 3.0 + z * (1.0 / 8.0 + z * (1.0 / 30.0 + z / 144.0)));
  return (std::exp(z) * (z - 1.0) + 1.0) / (z * z);
}

cplx phi_dd(cplx a, cplx b) {
  if (std::abs(a - b) < 1e-6) return phi_deriv(0.5 * (a + b));
  return (phi_fn(a) - phi_fn(b)) / (a - b);
}

cplx exp_dd(cplx a, cplx b) {
  cplx w = 0.5 * (a - b);
  cplx sinch = std::abs(w) < 1e-4 ? 1.0 + w * w * (1.0 / 6.0 + w * w / 120.0)
                                  : std::sinh(w) / w;
  return std::exp(0.5 * (a + b)) * sinch;
}

VecA embed_coset(const LieAlgebraSpec& spec, const std::vector<int>& cidx, const VecA& y) {
  VecA c = VecA::Zero(spec.dim_G);
  for (int m = 0; m < static_cast<int>(cidx.size()); ++m) c[cidx[m]] = y[m];
  return c;
}

void check_domain(const CosetChart& chart, const VecA& y) {
  if (!chart.spec) throw StructuralError("chart has no algebra");
  if (y.size() != chart.coset_dim()) throw StructuralError("coordinate vector has wrong length");
  if (!y.allFinite()) throw DomainError("non-finite coset coordinates");
  if (y.norm() >= chart.radius_cutoff)
    throw ChartDomainError("coset point outside chart ball: |y| = " + std::to_string(y.norm()) +
                           " >= " + std::to_string(chart.radius_cutoff));
}

// Algebraic completion shared by both routes once e_full, D_adj, L are known.
void finish_frame(const CosetChart& chart, CosetFrame& f) {
  const auto& spec = *chart.spec;
  const int nG = spec.dim_G, nc = chart.coset_dim();
  const auto cidx = spec.coset_idx();

  f.e_co.resize(nc, nc);
  for (int a = 0; a < nc; ++a) f.e_co.row(a) = f.e_full.row(cidx[a]);
  Eigen::PartialPivLU<MatA> lu(f.e_co);
  f.det_e = lu.determinant();
  if (std::abs(f.det_e) < 1e-10)
    throw DomainError("degenerate coset frame: det = " + std::to_string(f.det_e));
  f.e_recip = lu.inverse();

  MatA D_inv = f.D_adj.inverse();
  f.D_bar.resize(nG, nc);
  for (int a = 0; a < nc; ++a) f.D_bar.col(a) = D_inv.col(cidx[a]);
  MatA D_coset_rows(nc, nG);
  for (int a = 0; a < nc; ++a) D_coset_rows.row(a) = f.D_adj.row(cidx[a]);
  f.killing = f.e_recip * D_coset_rows;
  f.phi = f.D_bar * f.e_co;
  f.proj = f.D_bar * D_coset_rows;
}

struct SeriesCore {
  CMat L;
  MatA e_full;
  MatA D_adj;
};

SeriesCore series_core(const CosetChart& chart, const VecA& y) {
  const auto& spec = *chart.spec;
  const int nG = spec.dim_G, nc = chart.coset_dim();
  const auto cidx = spec.coset_idx();
  VecA c = embed_coset(spec, cidx, y);
  SeriesCore out;
  CMat X = spec.algebra_element(c);
  out.L = matrix_exp(X);
  out.e_full.resize(nG, nc);
  for (int m = 0; m < nc; ++m) {
    CMat term = spec.generators[cidx[m]];
    CMat acc = term;
    double fact = 1.0;
    for (int k = 1; k <= 60; ++k) {
      term = X * term - term * X;
      fact *= (k + 1);
      acc += term / fact;
      if (max_abs(CMat(term)) / fact < 1e-17) break;
    }
    out.e_full.col(m) = decompose_onto_generators(spec, acc);
  }
  out.D_adj = adjoint_matrix(spec, out.L);
  return out;
}

}  // namespace

CosetChart make_chart(const LieAlgebraSpec& spec, double safe_radius, double cutoff_fraction) {
  if (safe_radius <= 0 || cutoff_fraction <= 0 || cutoff_fraction > 1)
    throw StructuralError("chart radii must be positive");
  return CosetChart{&spec, safe_radius, safe_radius * cutoff_fraction};
}

VecA decompose_onto_generators(const LieAlgebraSpec& spec, const CMat& M) {
  const int n = spec.dim_G;
  Mat G(n, n);
  Vec rhs(n);
  for (int A = 0; A < n; ++A) {
    for (int B = 0; B < n; ++B)
      G(A, B) = (spec.generators[A].adjoint() * spec.generators[B]).trace().real();
    rhs[A] = (spec.generators[A].adjoint() * M).trace().real();
  }
  Vec sol = G.ldlt().solve(rhs);
  VecA out(n);
  for (int A = 0; A < n; ++A) out[A] = sol[A];
  return out;
}

VecA log_coefficients(const LieAlgebraSpec& spec, const CMat& g) {
  Eigen::ComplexEigenSolver<CMat> es(g);
  if (es.info() != Eigen::Success) throw DomainError("log: eigendecomposition failed");
  CVec lam = es.eigenvalues();
  CVec loglam(lam.size());
  for (int k = 0; k < lam.size(); ++k) loglam[k] = std::log(lam[k]);
  CMat W = es.eigenvectors() * loglam.asDiagonal() * es.eigenvectors().inverse();
  return decompose_onto_generators(spec, W);
}

CosetFrame frame_at(const CosetChart& chart, const VecA& y) {
  check_domain(chart, y);
  const auto& spec = *chart.spec;
  const int nG = spec.dim_G, nc = chart.coset_dim();
  const auto cidx = spec.coset_idx();
  VecA c = embed_coset(spec, cidx, y);
  MatA A = spec.ad(c);
  if (max_abs(Mat(A + A.transpose())) > 1e-12) return frame_at_series(chart, y);

  CosetFrame f;
  f.y = y;
  f.L = matrix_exp(CMat(spec.algebra_element(c)));

  // i*ad(X) is Hermitian; all analytic functions of ad(X) and their
  // directional derivatives come from one eigendecomposition.
  CMatA H = cplx(0, 1) * A.cast<cplx>();
  Eigen::SelfAdjointEigenSolver<CMatA> es(H);
  if (es.info() != Eigen::Success) throw DomainError("frame eigendecomposition failed");
  const VecA theta = es.eigenvalues();
  const CMatA U = es.eigenvectors();
  CVecA lam(nG), phiv(nG), expv(nG);
  for (int k = 0; k < nG; ++k) {
    lam[k] = cplx(0, -theta[k]);
    phiv[k] = phi_fn(lam[k]);
    expv[k] = std::exp(lam[k]);
  }
  CMatA Phi = U * phiv.asDiagonal() * U.adjoint();
  CMatA Dc = U * expv.asDiagonal() * U.adjoint();
  f.D_adj = Dc.real();
  f.e_full.resize(nG, nc);
  for (int m = 0; m < nc; ++m) f.e_full.col(m) = Phi.col(cidx[m]).real();
  finish_frame(chart, f);

  CMatA Mphi(nG, nG), Mexp(nG, nG);
  for (int i = 0; i < nG; ++i)
    for (int j = 0; j < nG; ++j) {
      Mphi(i, j) = phi_dd(lam[i], lam[j]);
      Mexp(i, j) = exp_dd(lam[i], lam[j]);
    }
  MatA D_coset_rows(nc, nG);
  for (int a = 0; a < nc; ++a) D_coset_rows.row(a) = f.D_adj.row(cidx[a]);
  for (int nu = 0; nu < nc; ++nu) {
    MatA E = MatA::Zero(nG, nG);
    for (int Ai = 0; Ai < nG; ++Ai)
      for (int B = 0; B < nG; ++B) E(Ai, B) = spec.fc(Ai, cidx[nu], B);
    CMatA T = U.adjoint() * E.cast<cplx>() * U;
    CMatA dPhi = U * Mphi.cwiseProduct(T) * U.adjoint();
    CMatA dD = U * Mexp.cwiseProduct(T) * U.adjoint();
    MatA dPhir = dPhi.real();
    MatA dDr = dD.real();
    MatA de_full(nG, nc), de_co(nc, nc), dD_rows(nc, nG);
    for (int m = 0; m < nc; ++m) de_full.col(m) = dPhir.col(cidx[m]);
    for (int a = 0; a < nc; ++a) {
      de_co.row(a) = de_full.row(cidx[a]);
      dD_rows.row(a) = dDr.row(cidx[a]);
    }
    MatA de_recip = -f.e_recip * de_co * f.e_recip;
    f.de_full[nu] = de_full;
    f.dK[nu] = de_recip * D_coset_rows + f.e_recip * dD_rows;
  }
  return f;
}

CosetFrame frame_at_series(const CosetChart& chart, const VecA& y) {
  check_domain(chart, y);
  const int nc = chart.coset_dim();
  SeriesCore core = series_core(chart, y);
  CosetFrame f;
  f.y = y;
  f.L = core.L;
  f.e_full = core.e_full;
  f.D_adj = core.D_adj;
  finish_frame(chart, f);

  const double h = 1e-6;
  const auto cidx = chart.spec->coset_idx();
  const int nG = chart.spec->dim_G;
  MatA D_coset_rows(nc, nG);
  for (int a = 0; a < nc; ++a) D_coset_rows.row(a) = f.D_adj.row(cidx[a]);
  for (int nu = 0; nu < nc; ++nu) {
    VecA yp = y, ym = y;
    yp[nu] += h;
    ym[nu] -= h;
    SeriesCore cp = series_core(chart, yp);
    SeriesCore cm = series_core(chart, ym);
    f.de_full[nu] = (cp.e_full - cm.e_full) / (2 * h);
    MatA de_co(nc, nc), dD_rows(nc, nG);
    MatA dD = (cp.D_adj - cm.D_adj) / (2 * h);
    for (int a = 0; a < nc; ++a) {
      de_co.row(a) = f.de_full[nu].row(cidx[a]);
      dD_rows.row(a) = dD.row(cidx[a]);
    }
    MatA de_recip = -f.e_recip * de_co * f.e_recip;
    f.dK[nu] = de_recip * D_coset_rows + f.e_recip * dD_rows;
  }
  return f;
}

FiberMetric fiber_metric(const CosetFrame& frame, const MatA& g_coset) {
  const int nc = static_cast<int>(frame.e_co.rows());
  if (g_coset.rows() != nc || !g_coset.isApprox(g_coset.transpose(), 1e-10))
    throw DomainError("fiber metric: g must be symmetric on coset indices");
  Eigen::LLT<MatA> llt(g_coset);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<MatA> es(g_coset);
    throw MetricError("fiber metric: g not positive-definite, smallest eigenvalue " +
                      std::to_string(es.eigenvalues().minCoeff()));
  }
  FiberMetric out;
  out.gamma = frame.e_co.transpose() * g_coset * frame.e_co;
  MatA g_inv = llt.solve(MatA::Identity(nc, nc));
  out.gamma_inv = frame.e_recip * g_inv * frame.e_recip.transpose();
  out.det = g_coset.determinant() * frame.det_e * frame.det_e;
  return out;
}

DriftContractions f_tensor_contractions(const CosetFrame& frame, const MatA& gamma_inv,
                                        const MatA& haa) {
  const int nc = static_cast<int>(frame.e_co.rows());
  if (!gamma_inv.isApprox(gamma_inv.transpose(), 1e-8))
    throw DomainError("f_tensor_contractions: gamma_inv must be symmetric");
  DriftContractions out;
  auto contract = [&](const MatA& S) {
    VecA b = VecA::Zero(nc);
    if (S.size() == 0) return b;
    MatA Uphi = frame.phi * S;  // (A, nu)
    for (int nu = 0; nu < nc; ++nu) b -= frame.dK[nu] * Uphi.col(nu);
    return b;
  };
  out.gamma_F = contract(gamma_inv);
  out.haa_F = haa.size() ? contract(haa) : VecA(VecA::Zero(nc));
  return out;
}

std::vector<MatA> f_tensor(const CosetFrame& frame) {
  const int nc = static_cast<int>(frame.e_co.rows());
  std::vector<MatA> F(nc, MatA::Zero(nc, nc));
  for (int al = 0; al < nc; ++al)
    for (int mu = 0; mu < nc; ++mu)
      for (int nu = 0; nu < nc; ++nu) {
        double s = 0.0;
        for (int A = 0; A < frame.phi.rows(); ++A) s += frame.phi(A, mu) * frame.dK[nu](al, A);
        F[al](mu, nu) = -s;
      }
  return F;
}

double gamma_f_divergence_residual(const CosetChart& chart, const VecA& y, const MatA& g_coset,
                                   double h) {
  CosetFrame f = frame_at(chart, y);
  FiberMetric fm = fiber_metric(f, g_coset);
  DriftContractions dc = f_tensor_contractions(f, fm.gamma_inv, MatA());
  const int nc = chart.coset_dim();
  VecA div = VecA::Zero(nc);
  double sg0 = std::sqrt(fm.det);
  for (int be = 0; be < nc; ++be) {
    VecA yp = y, ym = y;
    yp[be] += h;
    ym[be] -= h;
    FiberMetric fp = fiber_metric(frame_at(chart, yp), g_coset);
    FiberMetric fmm = fiber_metric(frame_at(chart, ym), g_coset);
    div += (std::sqrt(fp.det) * fp.gamma_inv.col(be) - std::sqrt(fmm.det) * fmm.gamma_inv.col(be)) /
           (2 * h);
  }
  div /= sg0;
  return (div + dc.gamma_F).cwiseAbs().maxCoeff();
}

CosetSplit coset_split(const CosetChart& chart, const CMat& g) {
  const auto& spec = *chart.spec;
  const int nG = spec.dim_G, nc = chart.coset_dim();
  const auto cidx = spec.coset_idx();
  CosetSplit out;
  out.y = VecA::Zero(nc);
  for (int it = 1; it <= 80; ++it) {
    VecA c = embed_coset(spec, cidx, out.y);
    CMat Ly = matrix_exp(CMat(spec.algebra_element(c)));
    CMat M = g * Ly.adjoint();
    VecA W = log_coefficients(spec, M);
    VecA wc = VecA::Zero(nG);
    double worst = 0.0;
    for (int m = 0; m < nc; ++m) {
      wc[cidx[m]] = W[cidx[m]];
      worst = std::max(worst, std::abs(W[cidx[m]]));
    }
    if (worst < 1e-13) {
      out.h_coeffs = W;
      for (int m = 0; m < nc; ++m) out.h_coeffs[cidx[m]] = 0.0;
      out.iterations = it;
      return out;
    }
    CMat next = matrix_exp(CMat(spec.algebra_element(wc))) * Ly;
    VecA Z = log_coefficients(spec, next);
    for (int m = 0; m < nc; ++m) out.y[m] = Z[cidx[m]];
  }
  throw DomainError("coset split did not converge");
}

}  // namespace bdsim
