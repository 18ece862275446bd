#pragma once

#include <cmath>

#include "bdsim/lie_algebra.hpp"

namespace fixtures {

using bdsim::cplx;

// Totally antisymmetric assignment: f^{c}_{ab} = v plus all signed permutations.
inline void add_f_triple(bdsim::LieAlgebraSpec& s, int a, int b, int c, double v) {
  const int p[6][3] = {{a, b, c}, {b, c, a}, {c, a, b}, {b, a, c}, {a, c, b}, {c, b, a}};
  const double sg[6] = {1, 1, 1, -1, -1, -1};
  for (int k = 0; k < 6; ++k) s.fc(p[k][2], p[k][0], p[k][1]) = sg[k] * v;
}

// su(2): Q_A = -(i/2) sigma_A, f^C_AB = eps_ABC, isotropy = span{Q_3}.
inline bdsim::LieAlgebraSpec su2_spec() {
  bdsim::LieAlgebraSpec s;
  s.dim_G = 3;
  s.f.assign(27, 0.0);
  add_f_triple(s, 0, 1, 2, 1.0);
  const cplx i(0, 1);
  bdsim::CMat s1(2, 2), s2(2, 2), s3(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, -i, i, 0;
  s3 << 1, 0, 0, -1;
  s.generators = {-0.5 * i * s1, -0.5 * i * s2, -0.5 * i * s3};
  s.H_idx = {2};
  s.Khat_idx = {};
  s.Lbar_idx = {0, 1};
  s.inner_product = bdsim::LieAlgebraSpec::normalized_killing_form(s);
  return s;
}

// su(3): Q_A = -(i/2) lambda_A, isotropy = upper su(2) block,
// Khat = hypercharge direction, Lbar = the four off-block directions.
inline bdsim::LieAlgebraSpec su3_spec() {
  bdsim::LieAlgebraSpec s;
  s.dim_G = 8;
  s.f.assign(8 * 8 * 8, 0.0);
  const double r3 = std::sqrt(3.0) / 2.0;
  add_f_triple(s, 0, 1, 2, 1.0);
  add_f_triple(s, 0, 3, 6, 0.5);
  add_f_triple(s, 0, 4, 5, -0.5);
  add_f_triple(s, 1, 3, 5, 0.5);
  add_f_triple(s, 1, 4, 6, 0.5);
  add_f_triple(s, 2, 3, 4, 0.5);
  add_f_triple(s, 2, 5, 6, -0.5);
  add_f_triple(s, 3, 4, 7, r3);
  add_f_triple(s, 5, 6, 7, r3);
  const cplx i(0, 1);
  const double q3 = 1.0 / std::sqrt(3.0);
  std::vector<bdsim::CMat> lam(8, bdsim::CMat::Zero(3, 3));
  lam[0] << 0, 1, 0, 1, 0, 0, 0, 0, 0;
  lam[1] << 0, -i, 0, i, 0, 0, 0, 0, 0;
  lam[2] << 1, 0, 0, 0, -1, 0, 0, 0, 0;
  lam[3] << 0, 0, 1, 0, 0, 0, 1, 0, 0;
  lam[4] << 0, 0, -i, 0, 0, 0, i, 0, 0;
  lam[5] << 0, 0, 0, 0, 0, 1, 0, 1, 0;
  lam[6] << 0, 0, 0, 0, 0, -i, 0, i, 0;
  lam[7] << q3, 0, 0, 0, q3, 0, 0, 0, -2 * q3;
  s.generators.resize(8);
  for (int A = 0; A < 8; ++A) s.generators[A] = -0.5 * i * lam[A];
  s.H_idx = {0, 1, 2};
  s.Khat_idx = {7};
  s.Lbar_idx = {3, 4, 5, 6};
  s.inner_product = bdsim::LieAlgebraSpec::normalized_killing_form(s);
  return s;
}

}  // namespace fixtures
