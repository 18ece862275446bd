#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bdsim/estimator.hpp"
#include "fixtures.hpp"

using namespace bdsim;
using fixtures::su2_spec;
using fixtures::su3_spec;

namespace {

MatA block_g() {
  MatA g = MatA::Identity(5, 5) * 0.9;
  g(0, 0) = 1.3;
  return g;
}

BundleModel sphere_model(const LieAlgebraSpec& spec) {
  BundleModel m;
  m.spec = &spec;
  m.chart = make_chart(spec, M_PI);
  m.base.dim = 0;
  m.gmet.g = [](const Vec&) { return MatA(MatA::Identity(2, 2)); };
  return m;
}

BundleModel flat_model(const LieAlgebraSpec& spec, double half_width = 8.0) {
  BundleModel m;
  m.spec = &spec;
  m.chart = make_chart(spec, 3.0);
  m.base.dim = 2;
  m.base.h = [](const Vec&) { return Mat::Identity(2, 2); };
  m.base.domain.lo = Vec::Constant(2, -half_width);
  m.base.domain.hi = Vec::Constant(2, half_width);
  m.conn.A = [](const Vec& x) {
    Mat A(1, 2);
    A << 0.3 + 0.2 * x[0] - 0.1 * x[1], -0.2 + 0.15 * x[0] + 0.25 * x[1];
    return A;
  };
  m.conn.div_callback = [](const Vec&) { return Vec::Constant(1, 0.45); };
  m.gmet.g = [](const Vec&) { return block_g(); };
  return m;
}

Observable trivial_observable(const LieAlgebraSpec& spec,
                              std::function<cplx(const Vec&)> value) {
  Observable obs;
  obs.irreps = {trivial_irrep(spec)};
  obs.y0 = VecA::Zero(spec.coset_dim());
  obs.coefficients = [value](int, const Vec& x) {
    CMat c(1, 1);
    c(0, 0) = value(x);
    return c;
  };
  return obs;
}

Observable spin1_observable(const LieAlgebraSpec& spec, const VecA& y0) {
  Observable obs;
  obs.irreps = {su2_ladder_irrep(spec, 2)};
  obs.y0 = y0;
  CVec c(3);
  c << cplx(0.3, 0.1), cplx(1.0, 0.0), cplx(-0.2, 0.4);
  obs.coefficients = [c](int, const Vec&) { return CMat(c); };
  return obs;
}

}  // namespace

TEST_CASE("unit observable is reproduced exactly by both lanes") {
  auto spec = su2_spec();
  auto m = sphere_model(spec);
  auto obs = trivial_observable(spec, [](const Vec&) { return cplx(1.0, 0.0); });
  SimulationParams prm;
  prm.dt = 1e-2;
  prm.T = 0.3;
  prm.paths = 16;
  auto full = estimate_full(m, obs, prm, Vec(0));
  auto red = estimate_reduced(m, obs, prm, Vec(0));
  REQUIRE(full.times.size() == 1);
  CHECK(full.times[0] == doctest::Approx(0.3));
  for (int p = 0; p < prm.paths; ++p) {
    CHECK(full.values[0][p] == cplx(1.0, 0.0));
    CHECK(red.values[0][p] == cplx(1.0, 0.0));
    CHECK(full.valid[0][p] == 1);
  }
  CHECK(full.means[0] == cplx(1.0, 0.0));
  CHECK(full.ses[0] == 0.0);
  CHECK(full.aborted_paths == 0);
}

TEST_CASE("constant potential multiplies every value by its exponential weight") {
  auto spec = su3_spec();
  auto m = flat_model(spec);
  auto obs = trivial_observable(
      spec, [](const Vec& x) { return cplx(1.0 + 0.2 * x[0], 0.1 * x[1]); });
  SimulationParams prm;
  prm.dt = 1e-3;
  prm.T = 0.25;
  prm.paths = 12;
  Vec x0(2);
  x0 << 0.5, -0.3;

  auto bare = estimate_reduced(m, obs, prm, x0);
  m.potential = [](const Vec&) { return 0.7; };
  auto weighted = estimate_reduced(m, obs, prm, x0);
  auto weighted_full = estimate_full(m, obs, prm, x0);
  const double w = std::exp(-0.7 * prm.T);
  for (int p = 0; p < prm.paths; ++p) {
    REQUIRE(bare.valid[0][p] == 1);
    CHECK(std::abs(weighted.values[0][p] - w * bare.values[0][p]) <
          1e-12 * std::abs(bare.values[0][p]));
    CHECK(weighted_full.values[0][p] == weighted.values[0][p]);
  }
}

TEST_CASE("invariant observable makes the lanes agree bitwise per path") {
  auto spec = su3_spec();
  auto m = flat_model(spec);
  auto obs = trivial_observable(
      spec, [](const Vec& x) { return cplx(x[0] * x[0] + 0.3 * x[1], -0.4 * x[0]); });
  SimulationParams prm;
  prm.dt = 1e-3;
  prm.T = 0.2;
  prm.paths = 24;
  prm.checkpoints = {0.0, 0.1, 0.2};
  prm.seed = 5;
  Vec x0(2);
  x0 << 0.2, 0.1;
  auto full = estimate_full(m, obs, prm, x0);
  auto red = estimate_reduced(m, obs, prm, x0);
  REQUIRE(full.times.size() == 3);
  for (size_t cp = 0; cp < 3; ++cp)
    for (int p = 0; p < prm.paths; ++p) {
      CHECK(full.valid[cp][p] == red.valid[cp][p]);
      CHECK(full.values[cp][p] == red.values[cp][p]);
    }
  CHECK(full.aborted_paths == red.aborted_paths);
}

TEST_CASE("initial checkpoint reads the folded fiber offset") {
  auto spec = su2_spec();
  auto m = sphere_model(spec);
  VecA y0(2);
  y0 << 0.7, -0.4;
  auto obs = spin1_observable(spec, y0);
  SimulationParams prm;
  prm.dt = 1e-2;
  prm.T = 0.1;
  prm.paths = 3;
  prm.checkpoints = {0.0};
  auto full = estimate_full(m, obs, prm, Vec(0));
  auto red = estimate_reduced(m, obs, prm, Vec(0));

  CMat D0 = coset_rep_element(obs.irreps[0], spec, y0);
  cplx expected = synthesize_value(obs.irreps[0], D0, obs.coefficients(0, Vec(0)));
  for (int p = 0; p < prm.paths; ++p) {
    CHECK(std::abs(full.values[0][p] - expected) < 1e-14);
    CHECK(std::abs(red.values[0][p] - expected) < 1e-14);
  }
  CHECK(full.ses[0] == 0.0);
}

TEST_CASE("standard error shrinks like the square root of the path count") {
  auto spec = su2_spec();
  auto m = sphere_model(spec);
  auto obs = spin1_observable(spec, VecA::Zero(2));
  SimulationParams prm;
  prm.dt = 1e-2;
  prm.T = 0.3;
  prm.paths = 200;
  auto small = estimate_full(m, obs, prm, Vec(0));
  prm.paths = 800;
  auto large = estimate_full(m, obs, prm, Vec(0));
  REQUIRE(small.ses[0] > 0.0);
  double ratio = small.ses[0] / large.ses[0];
  CHECK(ratio > 1.4);
  CHECK(ratio < 2.8);
}

TEST_CASE("swapped transport word is a real control only off the identity fiber") {
  auto spec = su3_spec();
  auto m = flat_model(spec);
  Observable obs;
  obs.irreps = {su3_fundamental_irrep(spec)};
  VecA y0(5);
  y0 << 0.4, 0.3, -0.2, 0.1, 0.25;
  obs.y0 = y0;
  obs.coefficients = [](int, const Vec& x) {
    CVec c(3);
    c << cplx(0.5 + 0.3 * x[0], 0.1), cplx(-0.2, 0.4 * x[1]), cplx(0.8, -0.3 * x[0]);
    return CMat(c);
  };
  SimulationParams prm;
  prm.dt = 1e-3;
  prm.T = 0.1;
  prm.paths = 1;
  Vec x0(2);
  x0 << 0.5, -0.2;
  auto def = estimate_reduced(m, obs, prm, x0, false);
  auto alt = estimate_reduced(m, obs, prm, x0, true);
  CHECK(std::abs(def.values[0][0] - alt.values[0][0]) > 1e-6);

  obs.y0 = VecA::Zero(5);
  auto def0 = estimate_reduced(m, obs, prm, x0, false);
  auto alt0 = estimate_reduced(m, obs, prm, x0, true);
  CHECK(def0.values[0][0] == alt0.values[0][0]);
}

TEST_CASE("score for a known mean gap") {
  double z = z_score(cplx(1.0, 0.0), std::sqrt(0.001), cplx(0.9, 0.0), std::sqrt(0.001));
  CHECK(z == doctest::Approx(2.2360679774997896).epsilon(1e-12));
  CHECK(z_score(cplx(0.5, 0.5), 0.0, cplx(0.5, 0.5), 0.0) == 0.0);
  CHECK(std::isinf(z_score(cplx(0.5, 0.5), 0.0, cplx(0.5, 0.6), 0.0)));
}

TEST_CASE("complex field formatting round trips") {
  CHECK(parse_complex("1.5-2.25j") == cplx(1.5, -2.25));
  CHECK(parse_complex("-1e-3-2e-4j") == cplx(-1e-3, -2e-4));
  CHECK(parse_complex("0+0j") == cplx(0.0, 0.0));
  cplx v(1.2345678901234567e-7, -3.0000000000000001e-9);
  CHECK(parse_complex(format_complex(v)) == v);
  CHECK_THROWS_AS(parse_complex("abc"), StructuralError);
  CHECK_THROWS_AS(parse_complex("1.5"), StructuralError);
  CHECK_THROWS_AS(parse_complex("j"), StructuralError);
}

TEST_CASE("csv round trip and intersection scoring") {
  RunResult run;
  run.times = {0.0, 0.5};
  run.values = {{cplx(1, 0), cplx(2, 0), cplx(3, 0)},
                {cplx(0.5, -0.25), cplx(1.25e-7, 3e-9), cplx(-2, 1)}};
  run.valid = {{1, 1, 1}, {1, 1, 0}};

  std::stringstream ss;
  write_run_csv(ss, run, "00deadbeef015a5a", 42);
  CsvRun back = read_run_csv(ss);
  CHECK(back.config_hash == "00deadbeef015a5a");
  CHECK(back.seed == 42);
  REQUIRE(back.times.size() == 2);
  REQUIRE(back.rows[0].size() == 3);
  CHECK(back.rows[0].at(1).value == cplx(2, 0));
  CHECK(back.rows[1].at(1).value == cplx(1.25e-7, 3e-9));
  CHECK(back.rows[1].at(2).ok == false);

  auto self = compare_runs(back, back);
  REQUIRE(self.size() == 2);
  CHECK(self[0].z == 0.0);
  CHECK(self[0].n == 3);
  CHECK(self[1].n == 2);

  RunResult other = run;
  other.values[0] = {cplx(2, 0), cplx(3, 0), cplx(4, 0)};
  other.valid[0] = {1, 1, 0};
  std::stringstream so;
  write_run_csv(so, other, "00deadbeef015a5a", 43);
  CsvRun ob = read_run_csv(so);
  auto cmp = compare_runs(back, ob);
  // intersection {0,1}: means 1.5 vs 2.5, each se 0.5
  CHECK(cmp[0].n == 2);
  CHECK(cmp[0].mean_a == cplx(1.5, 0.0));
  CHECK(cmp[0].mean_b == cplx(2.5, 0.0));
  CHECK(cmp[0].se_a == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(cmp[0].z == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("paths leaving the box are dropped from both lanes alike") {
  auto spec = su3_spec();
  auto m = flat_model(spec, 0.35);
  auto obs = trivial_observable(
      spec, [](const Vec& x) { return cplx(x[0] + 1.0, x[1]); });
  SimulationParams prm;
  prm.dt = 1e-3;
  prm.T = 0.2;
  prm.paths = 40;
  prm.seed = 9;
  Vec x0(2);
  x0 << 0.0, 0.0;
  auto full = estimate_full(m, obs, prm, x0);
  auto red = estimate_reduced(m, obs, prm, x0);
  CHECK(full.aborted_paths > 0);
  CHECK(full.aborted_paths < static_cast<uint64_t>(prm.paths));
  CHECK(full.aborted_paths == red.aborted_paths);
  for (int p = 0; p < prm.paths; ++p) CHECK(full.valid[0][p] == red.valid[0][p]);

  std::stringstream sa, sb;
  write_run_csv(sa, full, "aa", 9);
  write_run_csv(sb, red, "aa", 9);
  CsvRun ra = read_run_csv(sa), rb = read_run_csv(sb);
  auto cmp = compare_runs(ra, rb);
  CHECK(cmp[0].n == static_cast<uint64_t>(prm.paths) - full.aborted_paths);
  CHECK(cmp[0].z == 0.0);
}
