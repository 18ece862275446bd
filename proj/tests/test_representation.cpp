#include <doctest.h>

#include <cmath>

#include "bdsim/representation.hpp"
#include "fixtures.hpp"

using namespace bdsim;
using fixtures::su2_spec;
using fixtures::su3_spec;

namespace {
const cplx I(0, 1);
}

TEST_CASE("ladder and fundamental constructions validate") {
  auto su2 = su2_spec();
  for (int ts : {1, 2, 3, 4}) {
    auto irrep = su2_ladder_irrep(su2, ts);
    auto report = validate_irrep(su2, irrep);
    INFO(irrep.label);
    CHECK(report.passed);
    CHECK(irrep.dim == ts + 1);
    CHECK(irrep.spherical.size() == (ts % 2 ? 0u : 1u));
  }
  auto su3 = su3_spec();
  auto fund = su3_fundamental_irrep(su3);
  CHECK(validate_irrep(su3, fund).passed);
  CHECK(fund.dim == 3);
  REQUIRE(fund.spherical.size() == 1);
}

TEST_CASE("casimir values and isotropy-invariant vectors") {
  auto su2 = su2_spec();
  for (int ts : {1, 2, 4}) {
    double l = 0.5 * ts;
    CMat cas = casimir_matrix(su2_ladder_irrep(su2, ts));
    CHECK(max_abs(CMat(cas + l * (l + 1) * CMat::Identity(ts + 1, ts + 1))) < 1e-12);
  }
  auto spin1 = su2_ladder_irrep(su2, 2);
  CHECK((spin1.spherical[0] - CVec::Unit(3, 1)).cwiseAbs().maxCoeff() < 1e-12);
  // transverse pair alone: the eigenvalues feeding the coset-average decay
  CMat trans = spin1.J[0] * spin1.J[0] + spin1.J[1] * spin1.J[1];
  Vec diag13(3);
  diag13 << 1.0, 2.0, 1.0;
  CHECK(max_abs(CMat(trans + Mat(diag13.asDiagonal()).cast<cplx>())) < 1e-12);

  auto su3 = su3_spec();
  auto fund = su3_fundamental_irrep(su3);
  CHECK(max_abs(CMat(casimir_matrix(fund) + (4.0 / 3.0) * CMat::Identity(3, 3))) < 1e-12);
  CHECK((fund.spherical[0] - CVec::Unit(3, 2)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((CVec(fund.J[7] * fund.spherical[0]) - (I / std::sqrt(3.0)) * fund.spherical[0])
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("rep elements are unitary and match the defining exponential") {
  auto su2 = su2_spec();
  auto half = su2_ladder_irrep(su2, 1);
  VecA c(3);
  c << 0.4, -0.7, 0.3;
  CHECK(max_abs(CMat(rep_element(half, c) - group_exp(su2, c))) < 1e-12);

  auto su3 = su3_spec();
  auto fund = su3_fundamental_irrep(su3);
  VecA y(5);
  y << 0.5, -0.3, 0.2, 0.6, -0.4;
  VecA full = VecA::Zero(8);
  auto cidx = su3.coset_idx();
  for (int a = 0; a < 5; ++a) full[cidx[a]] = y[a];
  CHECK(max_abs(CMat(coset_rep_element(fund, su3, y) - group_exp(su3, full))) < 1e-12);

  auto spin2 = su2_ladder_irrep(su2, 4);
  CMat D = rep_element(spin2, c);
  CHECK(max_abs(CMat(D * D.adjoint() - CMat::Identity(5, 5))) < 1e-12);
  CHECK(std::abs(D.determinant() - cplx(1, 0)) < 1e-10);
  CHECK(max_abs(CMat(rep_element(spin2, c) * rep_element(spin2, VecA(-c)) -
                     CMat::Identity(5, 5))) < 1e-12);
}

TEST_CASE("isotropy rotation acts diagonally with integer phases") {
  auto su2 = su2_spec();
  auto spin1 = su2_ladder_irrep(su2, 2);
  double th = 0.77;
  VecA c = VecA::Zero(3);
  c[2] = th;
  CMat D = rep_element(spin1, c);
  CVec expect(3);
  expect << std::exp(-I * th), cplx(1, 0), std::exp(I * th);
  CHECK(max_abs(CMat(D - CMat(expect.asDiagonal()))) < 1e-12);
}

TEST_CASE("left generator factorization of chart derivatives") {
  auto su2 = su2_spec();
  auto chart2 = make_chart(su2, M_PI);
  VecA y2(2);
  y2 << 0.8, -0.5;
  CHECK(derivative_identity_residual(su2_ladder_irrep(su2, 2), chart2, y2) < 1e-8);
  CHECK(derivative_identity_residual(su2_ladder_irrep(su2, 4), chart2, y2) < 1e-8);

  auto su3 = su3_spec();
  auto chart3 = make_chart(su3, 3.0);
  auto fund = su3_fundamental_irrep(su3);
  VecA y3(5);
  y3 << 0.5, -0.3, 0.2, 0.6, -0.4;
  CHECK(derivative_identity_residual(fund, chart3, y3) < 1e-8);

  // placing the generator sum on the right instead does not reproduce the
  // derivative away from the origin
  auto frame = frame_at(chart3, y3);
  CMat D = coset_rep_element(fund, su3, y3);
  double step = 1e-6, worst = 0.0;
  for (int mu = 0; mu < 5; ++mu) {
    VecA hi = y3, lo = y3;
    hi[mu] += step;
    lo[mu] -= step;
    CMat fd =
        (coset_rep_element(fund, su3, hi) - coset_rep_element(fund, su3, lo)) / (2 * step);
    CMat model = CMat::Zero(3, 3);
    for (int A = 0; A < 8; ++A) model += frame.e_full(A, mu) * fund.J[A];
    worst = std::max(worst, max_abs(CMat(fd - D * model)));
  }
  CHECK(worst > 1e-3);
}

TEST_CASE("polar quadrature integrates the invariant volume") {
  auto su2 = su2_spec();
  auto chart = make_chart(su2, M_PI);
  auto quad = polar_quadrature(chart);
  CHECK(quad.volume == doctest::Approx(4.0 * M_PI).epsilon(1e-8));
  CHECK(quad.nodes.rows() == 48 * 64);
  CHECK(quad.weights.minCoeff() > 0.0);

  auto su3 = su3_spec();
  CHECK_THROWS_AS(polar_quadrature(make_chart(su3, 3.0)), StructuralError);
}

TEST_CASE("expansion recovers synthesis coefficients and rejects cross terms") {
  auto su2 = su2_spec();
  auto chart = make_chart(su2, M_PI);
  auto quad = polar_quadrature(chart);
  auto spin1 = su2_ladder_irrep(su2, 2);
  auto spin2 = su2_ladder_irrep(su2, 4);

  CMat c1(3, 1), c2(5, 1);
  c1 << cplx(0.3, 0.1), cplx(-0.2, 0.0), cplx(0.5, -0.4);
  c2 << cplx(0.1, 0.0), cplx(0.0, 0.2), cplx(-0.3, 0.1), cplx(0.25, 0.0), cplx(0.0, -0.15);

  auto phi = [&](const VecA& y) {
    CMat D1 = coset_rep_element(spin1, su2, y);
    CMat D2 = coset_rep_element(spin2, su2, y);
    return synthesize_value(spin1, D1, c1) + synthesize_value(spin2, D2, c2);
  };

  CMat r1 = expand_on_coset(spin1, su2, quad, phi);
  CMat r2 = expand_on_coset(spin2, su2, quad, phi);
  CHECK(max_abs(CMat(r1 - c1)) < 1e-8);
  CHECK(max_abs(CMat(r2 - c2)) < 1e-8);

  CHECK(aliasing_residual({&spin1, &spin2}, su2, quad, phi) < 1e-8);

  // dropping one component from the basis shows up as a large residual
  CHECK(aliasing_residual({&spin1}, su2, quad, phi) > 0.1);
}

TEST_CASE("restricted tensor grid approximates the same volume") {
  auto su2 = su2_spec();
  auto chart = make_chart(su2, M_PI);
  auto quad = product_quadrature(chart, 48);
  CHECK(quad.volume == doctest::Approx(4.0 * M_PI).epsilon(1e-3));
}

TEST_CASE("malformed representation inputs are rejected") {
  auto su2 = su2_spec();
  CHECK_THROWS_AS(su2_ladder_irrep(su2, -1), StructuralError);
  auto spin1 = su2_ladder_irrep(su2, 2);
  CHECK_THROWS_AS(algebra_action(spin1, VecA::Zero(2)), StructuralError);
  CHECK_THROWS_AS(synthesize_value(spin1, CMat::Identity(3, 3), CMat::Zero(3, 2)),
                  StructuralError);
  auto su3 = su3_spec();
  CHECK_THROWS_AS(su2_ladder_irrep(su3, 2), StructuralError);
  auto broken = spin1;
  broken.J[0](0, 0) += 0.05;
  CHECK_FALSE(validate_irrep(su2, broken).passed);
}
