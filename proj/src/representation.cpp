#include "bdsim/representation.hpp"

#include <cmath>

namespace bdsim {

namespace {

void check_irrep_sizes(const LieAlgebraSpec& spec, const IrrepSpec& irrep) {
  if (irrep.dim <= 0) throw StructuralError("irrep dimension must be positive");
  if (static_cast<int>(irrep.J.size()) != spec.dim_G)
    throw StructuralError("irrep needs one matrix per generator");
  for (const auto& J : irrep.J)
    if (J.rows() != irrep.dim || J.cols() != irrep.dim)
      throw StructuralError("irrep matrix size mismatch");
  for (const auto& v : irrep.spherical)
    if (v.size() != irrep.dim) throw StructuralError("spherical vector size mismatch");
}

// orthonormal kernel of the stacked isotropy action, phase-fixed so the
// largest component of each vector is real positive
std::vector<CVec> isotropy_kernel(const LieAlgebraSpec& spec, const std::vector<CMat>& J, int dim) {
  if (spec.H_idx.empty()) {
    std::vector<CVec> out;
    for (int i = 0; i < dim; ++i) out.push_back(CVec::Unit(dim, i));
    return out;
  }
  CMat stack(static_cast<int>(spec.H_idx.size()) * dim, dim);
  for (size_t k = 0; k < spec.H_idx.size(); ++k)
    stack.middleRows(static_cast<int>(k) * dim, dim) = J[spec.H_idx[k]];
  Eigen::JacobiSVD<CMat> svd(stack, Eigen::ComputeFullV);
  std::vector<CVec> out;
  for (int i = 0; i < dim; ++i) {
    double sigma = i < svd.singularValues().size() ? svd.singularValues()[i] : 0.0;
    if (sigma > 1e-10) continue;
    CVec v = svd.matrixV().col(i);
    int arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    v *= std::conj(v[arg]) / std::abs(v[arg]);
    out.push_back(v);
  }
  return out;
}

struct GaussLegendre {
  Vec nodes, weights;
};

GaussLegendre gauss_legendre(int n) {
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < n; ++k) {
        double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.nodes[i] = -x;
    gl.weights[i] = w;
    gl.nodes[n - 1 - i] = x;
    gl.weights[n - 1 - i] = w;
  }
  return gl;
}

CosetChart full_radius(const CosetChart& chart) {
  CosetChart c = chart;
  c.radius_cutoff = c.safe_radius;
  return c;
}

// rows (v_rho^dag D)_i stacked over spherical vectors, one block per node
CMat spherical_rows(const IrrepSpec& irrep, const LieAlgebraSpec& spec,
                    const CosetQuadrature& quad) {
  const int ns = static_cast<int>(irrep.spherical.size());
  const int nk = static_cast<int>(quad.nodes.rows());
  CMat rows(nk * ns, irrep.dim);
  for (int k = 0; k < nk; ++k) {
    CMat D = coset_rep_element(irrep, spec, quad.nodes.row(k).transpose());
    for (int r = 0; r < ns; ++r)
      rows.row(k * ns + r) = irrep.spherical[r].adjoint() * D;
  }
  return rows;
}

}  // namespace

ValidationReport validate_irrep(const LieAlgebraSpec& spec, const IrrepSpec& irrep) {
  check_irrep_sizes(spec, irrep);
  ValidationReport report;

  double worst = 0.0;
  std::string detail;
  for (int a = 0; a < spec.dim_G; ++a)
    for (int b = a + 1; b < spec.dim_G; ++b) {
      CMat target = CMat::Zero(irrep.dim, irrep.dim);
      for (int c = 0; c < spec.dim_G; ++c) target += spec.fc(c, a, b) * irrep.J[c];
      double r = max_abs(CMat(irrep.J[a] * irrep.J[b] - irrep.J[b] * irrep.J[a] - target));
      if (r > worst) {
        worst = r;
        detail = "[J_" + std::to_string(a) + ",J_" + std::to_string(b) + "]";
      }
    }
  report.checks.push_back({"rep_commutators", worst < 1e-10, worst, detail});

  worst = 0.0;
  for (const auto& J : irrep.J) worst = std::max(worst, max_abs(CMat(J + J.adjoint())));
  report.checks.push_back({"rep_antihermitian", worst < 1e-12, worst, ""});

  worst = 0.0;
  for (int h : spec.H_idx)
    for (const auto& v : irrep.spherical)
      worst = std::max(worst, CVec(irrep.J[h] * v).cwiseAbs().maxCoeff());
  report.checks.push_back({"spherical_invariance", worst < 1e-12, worst, ""});

  worst = 0.0;
  for (size_t i = 0; i < irrep.spherical.size(); ++i)
    for (size_t j = 0; j < irrep.spherical.size(); ++j) {
      cplx g = irrep.spherical[i].dot(irrep.spherical[j]);
      worst = std::max(worst, std::abs(g - (i == j ? cplx(1, 0) : cplx(0, 0))));
    }
  report.checks.push_back({"spherical_orthonormal", worst < 1e-12, worst, ""});

  report.passed = true;
  for (const auto& c : report.checks) report.passed = report.passed && c.passed;
  return report;
}

IrrepSpec su2_ladder_irrep(const LieAlgebraSpec& spec, int twice_spin) {
  if (spec.dim_G != 3) throw StructuralError("ladder construction needs a three-generator algebra");
  if (twice_spin < 0) throw StructuralError("negative spin");
  const int dim = twice_spin + 1;
  const double l = 0.5 * twice_spin;
  CMat Sz = CMat::Zero(dim, dim), Sp = CMat::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) Sz(k, k) = l - k;  // descending magnetic number
  for (int k = 1; k < dim; ++k) {
    double m = l - k;
    Sp(k - 1, k) = std::sqrt(l * (l + 1) - m * (m + 1));
  }
  CMat Sm = Sp.adjoint();
  const cplx I(0, 1);
  IrrepSpec irrep;
  irrep.label = "spin" + std::to_string(twice_spin) + "half";
  if (twice_spin % 2 == 0) irrep.label = "spin" + std::to_string(twice_spin / 2);
  irrep.dim = dim;
  irrep.J = {-I * 0.5 * (Sp + Sm), -0.5 * (Sp - Sm), -I * Sz};
  irrep.spherical = isotropy_kernel(spec, irrep.J, dim);
  return irrep;
}

IrrepSpec su3_fundamental_irrep(const LieAlgebraSpec& spec) {
  if (spec.dim_G != 8 || spec.generators.empty())
    throw StructuralError("fundamental construction needs the eight defining generators");
  IrrepSpec irrep;
  irrep.label = "fund";
  irrep.dim = static_cast<int>(spec.generators[0].rows());
  for (const auto& Q : spec.generators) irrep.J.push_back(Q);
  irrep.spherical = isotropy_kernel(spec, irrep.J, irrep.dim);
  return irrep;
}

IrrepSpec trivial_irrep(const LieAlgebraSpec& spec) {
  IrrepSpec irrep;
  irrep.label = "trivial";
  irrep.dim = 1;
  irrep.J.assign(spec.dim_G, CMat::Zero(1, 1));
  CVec one(1);
  one << cplx(1, 0);
  irrep.spherical = {one};
  return irrep;
}

CMat algebra_action(const IrrepSpec& irrep, const VecA& coeffs) {
  if (coeffs.size() != static_cast<int>(irrep.J.size()))
    throw StructuralError("coefficient count does not match generator count");
  CMat out = CMat::Zero(irrep.dim, irrep.dim);
  for (int a = 0; a < coeffs.size(); ++a) out += coeffs[a] * irrep.J[a];
  return out;
}

CMat rep_element(const IrrepSpec& irrep, const VecA& coeffs) {
  return matrix_exp(CMat(algebra_action(irrep, coeffs)));
}

CMat coset_rep_element(const IrrepSpec& irrep, const LieAlgebraSpec& spec, const VecA& y) {
  auto cidx = spec.coset_idx();
  if (y.size() != static_cast<int>(cidx.size()))
    throw StructuralError("chart point size mismatch");
  VecA coeffs = VecA::Zero(spec.dim_G);
  for (size_t a = 0; a < cidx.size(); ++a) coeffs[cidx[a]] = y[a];
  return rep_element(irrep, coeffs);
}

CMat casimir_matrix(const IrrepSpec& irrep) {
  CMat out = CMat::Zero(irrep.dim, irrep.dim);
  for (const auto& J : irrep.J) out += J * J;
  return out;
}

double derivative_identity_residual(const IrrepSpec& irrep, const CosetChart& chart, const VecA& y,
                                    double step) {
  auto frame = frame_at(chart, y);
  CMat D = coset_rep_element(irrep, *chart.spec, y);
  double worst = 0.0;
  for (int mu = 0; mu < chart.coset_dim(); ++mu) {
    VecA hi = y, lo = y;
    hi[mu] += step;
    lo[mu] -= step;
    CMat fd = (coset_rep_element(irrep, *chart.spec, hi) - coset_rep_element(irrep, *chart.spec, lo)) /
              (2 * step);
    CMat model = CMat::Zero(irrep.dim, irrep.dim);
    for (int A = 0; A < chart.spec->dim_G; ++A) model += frame.e_full(A, mu) * irrep.J[A];
    worst = std::max(worst, max_abs(CMat(fd - model * D)));
  }
  return worst;
}

CosetQuadrature polar_quadrature(const CosetChart& chart, int n_radial, int n_angular) {
  if (chart.coset_dim() != 2)
    throw StructuralError("polar quadrature needs a two-dimensional chart");
  auto full = full_radius(chart);
  auto gl = gauss_legendre(n_radial);
  const double R = chart.safe_radius;
  CosetQuadrature quad;
  quad.nodes.resize(n_radial * n_angular, 2);
  quad.weights.resize(n_radial * n_angular);
  int k = 0;
  for (int i = 0; i < n_radial; ++i) {
    double r = 0.5 * R * (gl.nodes[i] + 1.0);
    double wr = 0.5 * R * gl.weights[i];
    for (int j = 0; j < n_angular; ++j, ++k) {
      double th = 2.0 * M_PI * j / n_angular;
      VecA y(2);
      y << r * std::cos(th), r * std::sin(th);
      quad.nodes.row(k) = y.transpose();
      quad.weights[k] = wr * r * (2.0 * M_PI / n_angular) * std::abs(frame_at(full, y).det_e);
    }
  }
  quad.volume = quad.weights.sum();
  return quad;
}

CosetQuadrature product_quadrature(const CosetChart& chart, int points_per_dim) {
  const int nc = chart.coset_dim();
  auto full = full_radius(chart);
  auto gl = gauss_legendre(points_per_dim);
  const double R = chart.safe_radius;
  std::vector<VecA> kept;
  std::vector<double> wkept;
  std::vector<int> idx(nc, 0);
  while (true) {
    VecA y(nc);
    double w = 1.0;
    for (int d = 0; d < nc; ++d) {
      y[d] = R * gl.nodes[idx[d]];
      w *= R * gl.weights[idx[d]];
    }
    if (y.norm() < R) {
      kept.push_back(y);
      wkept.push_back(w * std::abs(frame_at(full, y).det_e));
    }
    int d = 0;
    while (d < nc && ++idx[d] == points_per_dim) idx[d++] = 0;
    if (d == nc) break;
  }
  CosetQuadrature quad;
  quad.nodes.resize(static_cast<int>(kept.size()), nc);
  quad.weights.resize(static_cast<int>(kept.size()));
  for (size_t k = 0; k < kept.size(); ++k) {
    quad.nodes.row(static_cast<int>(k)) = kept[k].transpose();
    quad.weights[static_cast<int>(k)] = wkept[k];
  }
  quad.volume = quad.weights.sum();
  return quad;
}

cplx synthesize_value(const IrrepSpec& irrep, const CMat& D, const CMat& c) {
  if (c.rows() != irrep.dim || c.cols() != static_cast<int>(irrep.spherical.size()))
    throw StructuralError("coefficient block size mismatch");
  cplx out = 0.0;
  for (int r = 0; r < c.cols(); ++r)
    out += (irrep.spherical[r].adjoint() * D * c.col(r)).value();
  return out;
}

CMat expand_on_coset(const IrrepSpec& irrep, const LieAlgebraSpec& spec,
                     const CosetQuadrature& quad, const std::function<cplx(const VecA&)>& phi) {
  const int ns = static_cast<int>(irrep.spherical.size());
  CMat c = CMat::Zero(irrep.dim, ns);
  CMat rows = spherical_rows(irrep, spec, quad);
  for (int k = 0; k < quad.nodes.rows(); ++k) {
    cplx p = phi(quad.nodes.row(k).transpose());
    for (int r = 0; r < ns; ++r)
      c.col(r) += quad.weights[k] * p * rows.row(k * ns + r).conjugate().transpose();
  }
  return c * (irrep.dim / quad.volume);
}

double aliasing_residual(const std::vector<const IrrepSpec*>& irreps, const LieAlgebraSpec& spec,
                         const CosetQuadrature& quad, const std::function<cplx(const VecA&)>& phi) {
  const int nk = static_cast<int>(quad.nodes.rows());
  CVec target(nk);
  for (int k = 0; k < nk; ++k) target[k] = phi(quad.nodes.row(k).transpose());
  CVec rebuilt = CVec::Zero(nk);
  for (const auto* irrep : irreps) {
    CMat c = expand_on_coset(*irrep, spec, quad, phi);
    CMat rows = spherical_rows(*irrep, spec, quad);
    const int ns = static_cast<int>(irrep->spherical.size());
    for (int k = 0; k < nk; ++k)
      for (int r = 0; r < ns; ++r) rebuilt[k] += (rows.row(k * ns + r) * c.col(r)).value();
  }
  double num = 0.0, den = 0.0;
  for (int k = 0; k < nk; ++k) {
    num += quad.weights[k] * std::norm(target[k] - rebuilt[k]);
    den += quad.weights[k] * std::norm(target[k]);
  }
  return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace bdsim
