#include "bdsim/bundle_model.hpp"

#include <cmath>
#include <random>

namespace bdsim {

namespace {

void check_spd(const Mat& m, const char* label) {
  if (m.size() == 0) return;
  if (!m.isApprox(m.transpose(), 1e-10)) throw MetricError(std::string(label) + " not symmetric");
  Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    throw MetricError(std::string(label) + " not positive-definite, smallest eigenvalue " +
                      std::to_string(es.eigenvalues().minCoeff()));
  }
}

double sqrt_weight(const BaseChart& base, const HorizontalAlgebraMetric& gmet, const Vec& x) {
  double det_h = base.dim ? base.h(x).determinant() : 1.0;
  double det_g = gmet.g ? gmet.g(x).determinant() : 1.0;
  return std::sqrt(det_h * det_g);
}

}  // namespace

KaluzaKleinMetric assemble_metric(const BaseChart& base, const ConnectionField& conn,
                                  const HorizontalAlgebraMetric& gmet, const CosetFrame& frame,
                                  const Vec& x) {
  const int nb = base.dim;
  const int nc = static_cast<int>(frame.e_co.rows());
  KaluzaKleinMetric out;
  out.h = base.h_at(x);
  check_spd(out.h, "base metric");
  out.h_inv = nb ? Mat(out.h.inverse()) : Mat(0, 0);
  out.det_h = nb ? out.h.determinant() : 1.0;
  out.fiber = fiber_metric(frame, gmet.g(x));

  Mat A = conn.A ? conn.A(x) : Mat::Zero(0, nb);
  const int nk = static_cast<int>(A.rows());
  out.B = Mat::Zero(nc, nb);
  if (nk && nb) out.B = frame.e_recip.leftCols(nk) * A;

  out.G = Mat::Zero(nb + nc, nb + nc);
  Mat gamma = out.fiber.gamma;
  if (nb) {
    out.G.topLeftCorner(nb, nb) = out.h + out.B.transpose() * gamma * out.B;
    out.G.topRightCorner(nb, nc) = out.B.transpose() * gamma;
    out.G.bottomLeftCorner(nc, nb) = gamma * out.B;
  }
  out.G.bottomRightCorner(nc, nc) = gamma;

  out.G_inv = Mat::Zero(nb + nc, nb + nc);
  if (nb) {
    out.G_inv.topLeftCorner(nb, nb) = out.h_inv;
    out.G_inv.topRightCorner(nb, nc) = -out.h_inv * out.B.transpose();
    out.G_inv.bottomLeftCorner(nc, nb) = -out.B * out.h_inv;
    out.G_inv.bottomRightCorner(nc, nc) =
        Mat(out.fiber.gamma_inv) + out.B * out.h_inv * out.B.transpose();
  } else {
    out.G_inv = out.fiber.gamma_inv;
  }
  out.det = out.det_h * out.fiber.det;
  return out;
}

double adh_invariance_residual(const LieAlgebraSpec& spec, const MatA& g_coset) {
  const auto cidx = spec.coset_idx();
  const int nc = static_cast<int>(cidx.size());
  double worst = 0.0;
  for (int h : spec.H_idx)
    for (int a = 0; a < nc; ++a)
      for (int b = 0; b < nc; ++b) {
        double s = 0.0;
        for (int c = 0; c < nc; ++c)
          s += spec.fc(cidx[c], h, cidx[a]) * g_coset(c, b) +
               spec.fc(cidx[c], h, cidx[b]) * g_coset(a, c);
        worst = std::max(worst, std::abs(s));
      }
  return worst;
}

double invariance_report(const BaseChart& base, const HorizontalAlgebraMetric& gmet,
                         const LieAlgebraSpec& spec, int samples, uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  const int n = base.dim ? samples : 1;
  for (int k = 0; k < n; ++k) {
    Vec x(base.dim);
    for (int i = 0; i < base.dim; ++i) {
      std::uniform_real_distribution<double> u(base.domain.lo[i], base.domain.hi[i]);
      x[i] = u(rng);
    }
    worst = std::max(worst, adh_invariance_residual(spec, gmet.g(x)));
  }
  return worst;
}

Vec connection_divergence(const BaseChart& base, const ConnectionField& conn,
                          const HorizontalAlgebraMetric& gmet, const Vec& x, double step) {
  if (conn.div_callback) return conn.div_callback(x);
  if (!conn.A || !base.dim) return Vec::Zero(conn.A ? conn.A(x).rows() : 0);
  const int nb = base.dim;
  const int nk = static_cast<int>(conn.A(x).rows());
  Vec out = Vec::Zero(nk);
  auto flux = [&](const Vec& xx) {
    // W h^{ij} A_j as an (nk x nb) array
    Mat hin = base.h(xx).inverse();
    return Mat(sqrt_weight(base, gmet, xx) * conn.A(xx) * hin.transpose());
  };
  for (int i = 0; i < nb; ++i) {
    Vec xp = x, xm = x;
    xp[i] += step;
    xm[i] -= step;
    out += (flux(xp).col(i) - flux(xm).col(i)) / (2 * step);
  }
  return out / sqrt_weight(base, gmet, x);
}

Vec base_divergence_drift(const BaseChart& base, const HorizontalAlgebraMetric& gmet, const Vec& x,
                          double step) {
  const int nb = base.dim;
  Vec out = Vec::Zero(nb);
  if (!nb) return out;
  auto flux = [&](const Vec& xx) { return Mat(sqrt_weight(base, gmet, xx) * base.h(xx).inverse()); };
  for (int n = 0; n < nb; ++n) {
    Vec xp = x, xm = x;
    xp[n] += step;
    xm[n] -= step;
    out += (flux(xp).row(n) - flux(xm).row(n)).transpose() / (2 * step);
  }
  return out / sqrt_weight(base, gmet, x);
}

}  // namespace bdsim
