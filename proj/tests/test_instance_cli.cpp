#include <doctest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bdsim/instance.hpp"

using namespace bdsim;

namespace {

Sections parse_text(const std::string& text) {
  std::istringstream is(text);
  return parse_ini(is);
}

Sections drop_section(Sections s, const std::string& name) {
  for (auto it = s.begin(); it != s.end(); ++it)
    if (it->name == name) {
      s.erase(it);
      break;
    }
  return s;
}

Section& section_of(Sections& s, const std::string& name) {
  for (auto& sec : s)
    if (sec.name == name) return sec;
  throw std::runtime_error("missing " + name);
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(SIMCLI_PATH) + " " + args;
  int st = std::system(cmd.c_str());
  REQUIRE(st != -1);
  return WEXITSTATUS(st);
}

const std::string kSrc = BDSIM_SOURCE_DIR;

}  // namespace

TEST_CASE("configuration text survives a dump and parse cycle") {
  for (auto make : {su2_coset_sections, flat_const_sections, hopf_sections}) {
    Sections s = make();
    Sections back = parse_text(dump_ini(s));
    CHECK(back == s);
  }
  Sections commented = parse_text("# banner\n[one]\nk = v # trailing\n\r\n[two]\n a = 1 \n");
  REQUIRE(commented.size() == 2);
  CHECK(commented[0].entries[0].value == "v");
  CHECK(commented[1].entries[0] == KeyValue{"a", "1"});
}

TEST_CASE("plane instance realizes with every callback wired") {
  InstanceConfig cfg = realize(flat_const_sections());
  CHECK(cfg.name == "flat_const");
  CHECK(cfg.spec->dim_G == 8);
  REQUIRE(cfg.spec->Khat_idx.size() == 1);
  CHECK(cfg.spec->Khat_idx[0] == 7);
  CHECK(cfg.model.spec == cfg.spec.get());
  CHECK(validate_decomposition(*cfg.spec).passed);

  Vec x(2);
  x << 1.0, 2.0;
  CHECK(max_abs(Mat(cfg.model.base.h(x) - Mat::Identity(2, 2))) == 0.0);
  Mat A = cfg.model.conn.A(x);
  CHECK(A(0, 0) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(A(0, 1) == doctest::Approx(0.45).epsilon(1e-15));
  REQUIRE(cfg.model.conn.div_callback);
  CHECK(cfg.model.conn.div_callback(x)[0] == 0.45);
  MatA g = cfg.model.gmet.g(x);
  CHECK(g(0, 0) == 1.3);
  CHECK(g(4, 4) == 0.9);
  CHECK(cfg.model.potential_at(x) == doctest::Approx(0.25).epsilon(1e-15));

  CHECK(cfg.x0[0] == 0.5);
  CHECK(cfg.observable.y0.size() == 5);
  CHECK(cfg.observable.y0[4] == 0.25);
  REQUIRE(cfg.observable.irreps.size() == 1);
  const IrrepSpec& ir = cfg.observable.irreps[0];
  CHECK(ir.label == "fund");
  CHECK(validate_irrep(*cfg.spec, ir).passed);
  CHECK(max_abs(CMat(ir.J[3] - cfg.spec->generators[3])) == 0.0);
  CHECK(ir.spherical[0][2] == cplx(1.0, 0.0));

  CMat c = cfg.observable.coefficients(0, x);
  CHECK(c(0, 0) == cplx(0.8, 0.1));
  CHECK(c(1, 0) == cplx(-0.2, 0.8));
  CHECK(c(2, 0) == cplx(0.8, -0.3));

  CHECK(cfg.params.dt == 0.001);
  CHECK(cfg.params.T == 0.5);
  CHECK(cfg.params.paths == 10000);
  REQUIRE(cfg.params.checkpoints.size() == 2);
  CHECK(cfg.params.checkpoints[1] == 0.5);
}

TEST_CASE("fiber-only instance pins the transverse pair drift") {
  InstanceConfig cfg = realize(su2_coset_sections());
  CHECK(cfg.model.base.dim == 0);
  CHECK(cfg.x0.size() == 0);
  CHECK(cfg.model.chart.safe_radius == doctest::Approx(M_PI));
  const IrrepSpec& ir = cfg.observable.irreps[0];
  CHECK(validate_irrep(*cfg.spec, ir).passed);
  CHECK(ir.spherical[0][1] == cplx(1.0, 0.0));

  ReducedGenerator rg = make_reduced_generator(ir, *cfg.spec);
  CMat lam = lambda_tilde(rg, cfg.model, cfg.params.mu2_kappa, Vec(0));
  CMat expected = CMat::Zero(3, 3);
  expected(0, 0) = -0.5;
  expected(1, 1) = -1.0;
  expected(2, 2) = -0.5;
  CHECK(max_abs(CMat(lam - expected)) < 1e-12);

  CMat c = cfg.observable.coefficients(0, Vec(0));
  CHECK(c(1, 0) == cplx(1.0, 0.0));
}

TEST_CASE("curved instance uses the builtin base and connection") {
  InstanceConfig cfg = realize(hopf_sections());
  Vec origin = Vec::Zero(2), x(2);
  x << 1.0, 0.0;
  CHECK(cfg.model.base.h(origin)(0, 0) == doctest::Approx(4.0));
  CHECK(cfg.model.base.h(x)(0, 0) == doctest::Approx(1.0));
  Mat A = cfg.model.conn.A(x);
  CHECK(A(0, 0) == 0.0);
  CHECK(A(0, 1) == doctest::Approx(0.8));
  REQUIRE(cfg.model.conn.div_callback);
  CHECK(cfg.model.conn.div_callback(x)[0] == 0.0);
  CHECK(!cfg.model.potential);
  CHECK(cfg.params.paths == 4000);
}

TEST_CASE("malformed configurations are rejected with structural errors") {
  CHECK_THROWS_AS(realize(drop_section(flat_const_sections(), "algebra")), StructuralError);
  CHECK_THROWS_AS(realize(drop_section(flat_const_sections(), "params")), StructuralError);

  Sections bad_f = flat_const_sections();
  section_of(bad_f, "algebra").entries.push_back({"f", "9 1 2 1"});
  CHECK_THROWS_AS(realize(bad_f), StructuralError);

  Sections bad_c = flat_const_sections();
  section_of(bad_c, "irrep").entries.push_back({"c", "1 1 0.5"});
  CHECK_THROWS_AS(realize(bad_c), StructuralError);

  Sections bad_g = flat_const_sections();
  section_of(bad_g, "metric_g").entries.push_back({"g", "1 1 -5"});
  CHECK_THROWS_AS(realize(bad_g), StructuralError);

  Sections bad_box = flat_const_sections();
  for (auto& kv : section_of(bad_box, "base").entries)
    if (kv.key == "hi") kv.value = "-8 8";
  CHECK_THROWS_AS(realize(bad_box), StructuralError);

  Sections bad_gen = flat_const_sections();
  auto& alg = section_of(bad_gen, "algebra").entries;
  for (auto it = alg.begin(); it != alg.end(); ++it)
    if (it->key == "generator") {
      alg.erase(it);
      break;
    }
  CHECK_THROWS_AS(realize(bad_gen), StructuralError);

  Sections bad_y0 = flat_const_sections();
  for (auto& kv : section_of(bad_y0, "initial").entries)
    if (kv.key == "y0") kv.value = "0 0";
  CHECK_THROWS_AS(realize(bad_y0), StructuralError);

  CHECK_THROWS_AS(parse_text("k = v\n[late]\n"), StructuralError);
  CHECK_THROWS_AS(parse_text("[open\nk = v\n"), StructuralError);
}

TEST_CASE("byte hash matches reference vectors") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("ab") != fnv1a_hex("ba"));
}

TEST_CASE("shipped instance files equal their builders byte for byte") {
  CHECK(read_file(kSrc + "/instances/su2_coset.ini") == dump_ini(su2_coset_sections()));
  CHECK(read_file(kSrc + "/instances/flat_const.ini") == dump_ini(flat_const_sections()));
  CHECK(read_file(kSrc + "/instances/hopf.ini") == dump_ini(hopf_sections()));
}

TEST_CASE("realized fiber-only instance runs end to end") {
  InstanceConfig cfg = realize(su2_coset_sections());
  cfg.params.paths = 30;
  cfg.params.T = 0.05;
  cfg.params.checkpoints = {0.05};
  RunResult run = estimate_full(cfg.model, cfg.observable, cfg.params, cfg.x0);
  CHECK(run.aborted_paths == 0);
  for (int p = 0; p < cfg.params.paths; ++p) CHECK(std::isfinite(run.values[0][p].real()));
}

TEST_CASE("command line drives check, simulation, and comparison") {
  const std::string cfg = kSrc + "/instances/flat_const.ini";
  CHECK(run_cli("check --config " + cfg + " > /dev/null 2>&1") == 0);
  CHECK(run_cli("check --config /nonexistent.ini > /dev/null 2>&1") == 2);
  CHECK(run_cli("spectrum --config " + kSrc + "/instances/su2_coset.ini > /dev/null 2>&1") == 0);
  CHECK(run_cli("definitely-not-a-command > /dev/null 2>&1") == 2);

  const std::string common = " --config " + cfg + " --paths 40 --seed 3 --out ";
  CHECK(run_cli("simulate-reduced" + common + "cli_a.csv 2> /dev/null") == 0);
  CHECK(run_cli("simulate-reduced" + common + "cli_b.csv 2> /dev/null") == 0);
  CHECK(read_file("cli_a.csv") == read_file("cli_b.csv"));
  CHECK(run_cli("simulate-reduced --config " + cfg +
                " --paths 40 --seed 3 2> /dev/null > cli_stdout.csv") == 0);
  CHECK(read_file("cli_stdout.csv") == read_file("cli_a.csv"));
  CHECK(run_cli("simulate-reduced --config " + cfg +
                " --paths 40 --seed 4 --out cli_c.csv 2> /dev/null") == 0);
  CHECK(read_file("cli_c.csv") != read_file("cli_a.csv"));

  std::istringstream is(read_file("cli_a.csv"));
  CsvRun run = read_run_csv(is);
  CHECK(run.seed == 3);
  CHECK(run.config_hash == fnv1a_hex(read_file(cfg)));
  REQUIRE(run.times.size() == 2);
  CHECK(run.rows[0].size() == 40);

  CHECK(run_cli("compare cli_a.csv cli_b.csv > /dev/null 2>&1") == 0);

  std::ofstream fa("cli_x.csv"), fb("cli_y.csv");
  fa << "# config_hash=f\n# seed=1\npath,t,value,valid\n";
  fb << "# config_hash=f\n# seed=2\npath,t,value,valid\n";
  for (int p = 0; p < 10; ++p) {
    double eps = 0.01 * ((p % 3) - 1);
    fa << p << ",0.5," << format_complex(cplx(1.0 + eps, 0.0)) << ",1\n";
    fb << p << ",0.5," << format_complex(cplx(1.5 + eps, 0.0)) << ",1\n";
  }
  fa.close();
  fb.close();
  CHECK(run_cli("compare cli_x.csv cli_y.csv > /dev/null 2>&1") == 1);
}

TEST_CASE("full simulation through the command line stays reproducible") {
  const std::string cfg = kSrc + "/instances/flat_const.ini";
  const std::string common =
      " --config " + cfg + " --paths 25 --dt 0.005 --seed 11 --out ";
  CHECK(run_cli("simulate-full" + common + "cli_f1.csv 2> /dev/null") == 0);
  CHECK(run_cli("simulate-full" + common + "cli_f2.csv 2> /dev/null") == 0);
  CHECK(read_file("cli_f1.csv") == read_file("cli_f2.csv"));
  CHECK(run_cli("simulate-full" + common + "cli_f3.csv --flag-unsimplified-drift 2> /dev/null") ==
        0);
  CHECK(read_file("cli_f3.csv") != read_file("cli_f1.csv"));
}
