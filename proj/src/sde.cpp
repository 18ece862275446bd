#include "bdsim/sde.hpp"

#include <algorithm>
#include <cmath>

namespace bdsim {

namespace {

MatA coset_rows(const LieAlgebraSpec& spec, const MatA& full) {
  auto cidx = spec.coset_idx();
  const int nc = static_cast<int>(cidx.size());
  MatA out(nc, full.cols());
  for (int a = 0; a < nc; ++a) out.row(a) = full.row(cidx[a]);
  return out;
}

double half_log_det(double d) { return 0.5 * std::log(d); }

}  // namespace

int total_steps(const SimulationParams& prm) {
  if (prm.dt <= 0) throw StructuralError("dt must be positive");
  if (prm.T < 0) throw StructuralError("negative horizon");
  return static_cast<int>(std::llround(prm.T / prm.dt));
}

std::vector<uint64_t> checkpoint_steps(const SimulationParams& prm) {
  const uint64_t n = static_cast<uint64_t>(total_steps(prm));
  std::vector<uint64_t> out;
  if (prm.checkpoints.empty()) {
    out.push_back(n);
    return out;
  }
  for (double t : prm.checkpoints) {
    long long s = std::llround(t / prm.dt);
    if (s < 0 || static_cast<uint64_t>(s) > n)
      throw StructuralError("checkpoint outside the simulated horizon");
    out.push_back(static_cast<uint64_t>(s));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Vec base_drift(const BundleModel& model, const SimulationParams& prm, const Vec& x) {
  if (!model.base.dim) return Vec(0);
  return 0.5 * prm.mu2_kappa * base_divergence_drift(model.base, model.gmet, x, prm.fd_step);
}

VecA fiber_drift(const BundleModel& model, const SimulationParams& prm, const Vec& x,
                 const CosetFrame& frame) {
  const int nc = static_cast<int>(frame.e_co.rows());
  const int nk = model.khat_dim();
  const int nb = model.base.dim;
  FiberMetric fm = fiber_metric(frame, model.gmet.g(x));

  MatA haa;
  VecA lifted_div = VecA::Zero(nc);
  if (nk && nb) {
    Mat A = model.conn.A ? model.conn.A(x) : Mat::Zero(nk, nb);
    MatA B = frame.e_recip.leftCols(nk) * A;
    MatA hin = model.base.h(x).inverse();
    haa = B * hin * B.transpose();
    Vec div = connection_divergence(model.base, model.conn, model.gmet, x, prm.fd_step);
    lifted_div = frame.e_recip.leftCols(nk) * div;
  }
  DriftContractions dc = f_tensor_contractions(frame, fm.gamma_inv, haa);
  return 0.5 * prm.mu2_kappa * (-lifted_div - dc.gamma_F - dc.haa_F);
}

Vec joint_divergence_drift(const BundleModel& model, const SimulationParams& prm, const Vec& x,
                           const VecA& y, bool pure_fd) {
  const int nb = model.base.dim;
  const int nc = model.chart.coset_dim();
  const int nk = model.khat_dim();
  const int n = nb + nc;
  const double fd = prm.fd_step;
  CosetFrame frame = frame_at(model.chart, y);
  KaluzaKleinMetric kk = assemble_metric(model.base, model.conn, model.gmet, frame, x);

  Vec b = Vec::Zero(n);
  for (int j = 0; j < nb; ++j) {
    Vec xp = x, xm = x;
    xp[j] += fd;
    xm[j] -= fd;
    auto kp = assemble_metric(model.base, model.conn, model.gmet, frame, xp);
    auto km = assemble_metric(model.base, model.conn, model.gmet, frame, xm);
    b += (kp.G_inv.row(j) - km.G_inv.row(j)).transpose() / (2 * fd);
    double dlog = (half_log_det(kp.det) - half_log_det(km.det)) / (2 * fd);
    b += kk.G_inv.row(j).transpose() * dlog;
  }

  if (pure_fd) {
    for (int nu = 0; nu < nc; ++nu) {
      VecA yp = y, ym = y;
      yp[nu] += fd;
      ym[nu] -= fd;
      auto kp = assemble_metric(model.base, model.conn, model.gmet, frame_at(model.chart, yp), x);
      auto km = assemble_metric(model.base, model.conn, model.gmet, frame_at(model.chart, ym), x);
      b += (kp.G_inv.row(nb + nu) - km.G_inv.row(nb + nu)).transpose() / (2 * fd);
      double dlog = (half_log_det(kp.det) - half_log_det(km.det)) / (2 * fd);
      b += kk.G_inv.row(nb + nu).transpose() * dlog;
    }
    return 0.5 * prm.mu2_kappa * b;
  }

  MatA g = model.gmet.g(x);
  Mat A = (nk && nb && model.conn.A) ? model.conn.A(x) : Mat::Zero(nk, nb);
  MatA e_co = frame.e_co;
  for (int nu = 0; nu < nc; ++nu) {
    MatA de_co = coset_rows(*model.spec, frame.de_full[nu]);
    MatA dgamma = de_co.transpose() * g * e_co + e_co.transpose() * g * de_co;
    Mat dG = Mat::Zero(n, n);
    if (nb) {
      MatA de_recip = -frame.e_recip * de_co * frame.e_recip;
      Mat dB = de_recip.leftCols(nk) * A;
      const Mat& B = kk.B;
      Mat gamma = kk.fiber.gamma;
      dG.topLeftCorner(nb, nb) = dB.transpose() * gamma * B + B.transpose() * Mat(dgamma) * B +
                                 B.transpose() * gamma * dB;
      dG.topRightCorner(nb, nc) = dB.transpose() * gamma + B.transpose() * Mat(dgamma);
      dG.bottomLeftCorner(nc, nb) = dG.topRightCorner(nb, nc).transpose();
    }
    dG.bottomRightCorner(nc, nc) = dgamma;
    Mat dGinv = -kk.G_inv * dG * kk.G_inv;
    b += dGinv.row(nb + nu).transpose();
    double dlog = (frame.e_recip * de_co).trace();
    b += kk.G_inv.row(nb + nu).transpose() * dlog;
  }
  return 0.5 * prm.mu2_kappa * b;
}

double generator_apply(const BundleModel& model, const SimulationParams& prm, DriftMode mode,
                       const std::function<double(const Vec&, const VecA&)>& observable,
                       const Vec& x, const VecA& y, double fd_phi) {
  const int nb = model.base.dim;
  const int nc = model.chart.coset_dim();
  const int nk = model.khat_dim();
  const int n = nb + nc;

  auto eval = [&](const Vec& dx) {
    Vec xx = x + dx.head(nb);
    VecA yy = y + dx.tail(nc);
    return observable(xx, yy);
  };

  Vec grad(n);
  Mat hess(n, n);
  const double h = fd_phi;
  const double phi0 = eval(Vec::Zero(n));
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e[i] = h;
    double pp = eval(e), pm = eval(-e);
    grad[i] = (pp - pm) / (2 * h);
    hess(i, i) = (pp - 2 * phi0 + pm) / (h * h);
    for (int j = i + 1; j < n; ++j) {
      Vec f = Vec::Zero(n);
      f[j] = h;
      double v = (eval(e + f) - eval(e - f) - eval(-e + f) + eval(-e - f)) / (4 * h * h);
      hess(i, j) = hess(j, i) = v;
    }
  }

  Vec b(n);
  Mat a(n, n);
  CosetFrame frame = frame_at(model.chart, y);
  if (mode == DriftMode::production) {
    b.head(nb) = base_drift(model, prm, x);
    b.tail(nc) = fiber_drift(model, prm, x, frame);
    MatA g = model.gmet.g(x);
    MatA Yf = frame.e_recip * noise_factor(MatA(g.inverse()));
    Mat yy = Yf * Yf.transpose();
    if (nb) {
      MatA hin = model.base.h(x).inverse();
      MatA X = noise_factor(hin);
      Mat xx = X * X.transpose();
      Mat B = Mat::Zero(nc, nb);
      if (nk && model.conn.A) B = frame.e_recip.leftCols(nk) * model.conn.A(x);
      a.topLeftCorner(nb, nb) = xx;
      a.topRightCorner(nb, nc) = -xx * B.transpose();
      a.bottomLeftCorner(nc, nb) = -B * xx;
      a.bottomRightCorner(nc, nc) = yy + B * xx * B.transpose();
    } else {
      a = yy;
    }
  } else {
    b = joint_divergence_drift(model, prm, x, y);
    a = assemble_metric(model.base, model.conn, model.gmet, frame, x).G_inv;
  }
  return b.dot(grad) + 0.5 * prm.mu2_kappa * (a.array() * hess.array()).sum();
}

XStep x_advance(const BundleModel& model, const SimulationParams& prm, const NoiseSource& rng,
                uint64_t path, uint64_t step, const Vec& x) {
  XStep out;
  const int nb = model.base.dim;
  if (!nb) {
    out.noise = out.x_pred = out.x_next = Vec(0);
    return out;
  }
  const double sqmk = std::sqrt(prm.mu2_kappa);
  const double sqdt = std::sqrt(prm.dt);
  Vec bx = base_drift(model, prm, x);
  MatA hin = model.base.h(x).inverse();
  MatA X = noise_factor(hin);
  Vec z = rng.normals(path, step, nb, 0) * sqdt;
  out.noise = sqmk * (X * z);
  out.x_pred = x + bx * prm.dt + out.noise;
  Vec bx_p = base_drift(model, prm, out.x_pred);
  out.x_next = x + 0.5 * (bx + bx_p) * prm.dt + out.noise;
  return out;
}

PathOutcome simulate_full_path(const BundleModel& model, const SimulationParams& prm,
                               uint64_t path, const Vec& x0, const FullPathHooks& hooks) {
  const int nb = model.base.dim;
  const int nc = model.chart.coset_dim();
  const int nk = model.khat_dim();
  const uint64_t n = static_cast<uint64_t>(total_steps(prm));
  auto cps = checkpoint_steps(prm);
  const double sqmk = std::sqrt(prm.mu2_kappa);
  const double sqdt = std::sqrt(prm.dt);
  NoiseSource rng(prm.seed);

  Vec x = x0;
  VecA y = VecA::Zero(nc);
  double v_int = 0.0;
  size_t cp = 0;
  PathOutcome out;

  for (uint64_t k = 0;; ++k) {
    while (cp < cps.size() && cps[cp] == k) {
      if (hooks.checkpoint) hooks.checkpoint(static_cast<int>(cp), x, y, v_int);
      ++cp;
    }
    if (k == n) break;
    if (y.norm() > 0.5 * model.chart.radius_cutoff) {
      if (hooks.recenter) hooks.recenter(y);
      y.setZero();
      ++out.recenterings;
    }
    v_int += model.potential_at(x) * prm.dt;
    try {
      if (!prm.unsimplified_drift) {
        CosetFrame frame = frame_at(model.chart, y);
        XStep xs = x_advance(model, prm, rng, path, k, x);
        VecA zf = rng.normals(path, k, nc, static_cast<uint32_t>(nb)) * sqdt;
        MatA g = model.gmet.g(x);
        MatA Yf = frame.e_recip * noise_factor(MatA(g.inverse()));
        VecA noise_y = sqmk * (Yf * zf);
        if (nk && nb && model.conn.A)
          noise_y -= frame.e_recip.leftCols(nk) * (model.conn.A(x) * VecA(xs.noise));
        VecA by = fiber_drift(model, prm, x, frame);
        VecA y_pred = y + by * prm.dt + noise_y;
        CosetFrame frame_p = frame_at(model.chart, y_pred);
        VecA by_p = fiber_drift(model, prm, nb ? xs.x_pred : x, frame_p);
        y += 0.5 * (by + by_p) * prm.dt + noise_y;
        if (nb) x = xs.x_next;
      } else {
        CosetFrame frame = frame_at(model.chart, y);
        KaluzaKleinMetric kk = assemble_metric(model.base, model.conn, model.gmet, frame, x);
        MatA L = noise_factor(MatA(kk.G_inv));
        Vec z(nb + nc);
        for (int i = 0; i < nb + nc; ++i)
          z[i] = rng.normal(path, k, static_cast<uint32_t>(i)) * sqdt;
        Vec w = sqmk * (L * z);
        Vec b = joint_divergence_drift(model, prm, x, y);
        Vec x_pred = x + b.head(nb) * prm.dt + w.head(nb);
        VecA y_pred = y + b.tail(nc) * prm.dt + w.tail(nc);
        Vec b_p = joint_divergence_drift(model, prm, x_pred, y_pred);
        x += 0.5 * (b.head(nb) + b_p.head(nb)) * prm.dt + w.head(nb);
        y += 0.5 * (b.tail(nc) + b_p.tail(nc)) * prm.dt + VecA(w.tail(nc));
      }
    } catch (const DomainError&) {
      out.aborted = true;
    } catch (const MetricError&) {
      out.aborted = true;
    } catch (const FactorizationError&) {
      out.aborted = true;
    }
    if (!out.aborted && nb && model.base.domain.lo.size() == nb &&
        !model.base.domain.contains(x))
      out.aborted = true;
    if (out.aborted) break;
    ++out.steps_run;
  }
  return out;
}

PathOutcome simulate_base_path(const BundleModel& model, const SimulationParams& prm,
                               uint64_t path, const Vec& x0, const BasePathHooks& hooks) {
  const int nb = model.base.dim;
  const uint64_t n = static_cast<uint64_t>(total_steps(prm));
  auto cps = checkpoint_steps(prm);
  NoiseSource rng(prm.seed);

  Vec x = x0;
  double v_int = 0.0;
  size_t cp = 0;
  PathOutcome out;

  for (uint64_t k = 0;; ++k) {
    while (cp < cps.size() && cps[cp] == k) {
      if (hooks.checkpoint) hooks.checkpoint(static_cast<int>(cp), x, v_int);
      ++cp;
    }
    if (k == n) break;
    v_int += model.potential_at(x) * prm.dt;
    try {
      XStep xs = x_advance(model, prm, rng, path, k, x);
      if (hooks.on_step) hooks.on_step(k, x, xs.noise);
      if (nb) x = xs.x_next;
    } catch (const DomainError&) {
      out.aborted = true;
    } catch (const MetricError&) {
      out.aborted = true;
    } catch (const FactorizationError&) {
      out.aborted = true;
    }
    if (!out.aborted && nb && model.base.domain.lo.size() == nb &&
        !model.base.domain.contains(x))
      out.aborted = true;
    if (out.aborted) break;
    ++out.steps_run;
  }
  return out;
}

}  // namespace bdsim
