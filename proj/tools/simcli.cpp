#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>

#include "bdsim/instance.hpp"

using namespace bdsim;

namespace {

struct Overrides {
  CLI::Option* seed = nullptr;
  CLI::Option* paths = nullptr;
  CLI::Option* dt = nullptr;
  uint64_t seed_v = 0;
  int paths_v = 0;
  double dt_v = 0.0;

  void attach(CLI::App* cmd) {
    seed = cmd->add_option("--seed", seed_v, "override the run seed");
    paths = cmd->add_option("--paths", paths_v, "override the path count");
    dt = cmd->add_option("--dt", dt_v, "override the step size");
  }
  void apply(SimulationParams& prm) const {
    if (seed->count()) prm.seed = seed_v;
    if (paths->count()) prm.paths = paths_v;
    if (dt->count()) prm.dt = dt_v;
  }
};

void print_check_line(const CheckResult& c) {
  std::printf("%s %s residual=%.3g%s%s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.residual,
              c.detail.empty() ? "" : " ", c.detail.c_str());
}

int run_check(const std::string& config) {
  InstanceConfig cfg = load_instance(config);
  bool ok = true;

  ValidationReport alg = validate_decomposition(*cfg.spec);
  for (const auto& c : alg.checks) print_check_line(c);
  ok = ok && alg.passed;

  for (const auto& ir : cfg.observable.irreps) {
    ValidationReport rep = validate_irrep(*cfg.spec, ir);
    for (const auto& c : rep.checks) {
      std::printf("%s %s[%s] residual=%.3g\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                  ir.label.c_str(), c.residual);
      ok = ok && c.passed;
    }
  }

  double inv = invariance_report(cfg.model.base, cfg.model.gmet, *cfg.spec, 25, 123);
  bool inv_ok = inv < 1e-8;
  std::printf("%s metric_invariance residual=%.3g\n", inv_ok ? "PASS" : "FAIL", inv);
  ok = ok && inv_ok;

  VecA y = VecA::Zero(cfg.spec->coset_dim());
  if (y.size() > 0) y[0] = 0.5 * cfg.model.chart.radius_cutoff;
  CosetFrame frame = frame_at(cfg.model.chart, y);
  bool frame_ok = frame.det_e > 0.0;
  std::printf("%s chart_frame det_e=%.6g\n", frame_ok ? "PASS" : "FAIL", frame.det_e);
  ok = ok && frame_ok;

  bool metric_ok = true;
  std::string why;
  try {
    assemble_metric(cfg.model.base, cfg.model.conn, cfg.model.gmet, frame, cfg.x0);
  } catch (const std::exception& e) {
    metric_ok = false;
    why = e.what();
  }
  std::printf("%s metric_assembly%s%s\n", metric_ok ? "PASS" : "FAIL", why.empty() ? "" : " ",
              why.c_str());
  ok = ok && metric_ok;

  return ok ? 0 : 1;
}

void emit_csv(const RunResult& run, const std::string& config, const SimulationParams& prm,
              const std::string& out_path) {
  std::string hash = fnv1a_hex(read_file(config));
  if (out_path.empty()) {
    write_run_csv(std::cout, run, hash, prm.seed);
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw StructuralError("cannot write " + out_path);
    write_run_csv(f, run, hash, prm.seed);
  }
  for (size_t i = 0; i < run.times.size(); ++i)
    std::fprintf(stderr, "t=%g mean=%s se=%.6g\n", run.times[i],
                 format_complex(run.means[i]).c_str(), run.ses[i]);
  std::fprintf(stderr, "aborted_paths=%llu of %llu\n",
               static_cast<unsigned long long>(run.aborted_paths),
               static_cast<unsigned long long>(run.values.empty() ? 0 : run.values[0].size()));
}

int run_compare(const std::string& a_path, const std::string& b_path, double z_max) {
  std::istringstream sa(read_file(a_path)), sb(read_file(b_path));
  CsvRun a = read_run_csv(sa), b = read_run_csv(sb);
  if (a.config_hash != b.config_hash)
    std::fprintf(stderr, "note: config hashes differ (%s vs %s)\n", a.config_hash.c_str(),
                 b.config_hash.c_str());
  bool ok = true;
  for (const auto& c : compare_runs(a, b)) {
    bool below = c.z < z_max;
    ok = ok && below;
    std::printf("%s t=%g n=%llu mean_a=%s mean_b=%s z=%.4g\n", below ? "PASS" : "FAIL", c.time,
                static_cast<unsigned long long>(c.n), format_complex(c.mean_a).c_str(),
                format_complex(c.mean_b).c_str(), c.z);
  }
  return ok ? 0 : 1;
}

int run_spectrum(const std::string& config) {
  InstanceConfig cfg = load_instance(config);
  for (const auto& ir : cfg.observable.irreps) {
    ReducedGenerator rg = make_reduced_generator(ir, *cfg.spec);
    CMat full = lambda_full(rg, cfg.model, cfg.params.mu2_kappa, cfg.x0);
    CMat tilde = lambda_tilde(rg, cfg.model, cfg.params.mu2_kappa, cfg.x0);
    Eigen::ComplexEigenSolver<CMat> ef(full), et(tilde);
    std::printf("irrep %s dim %d\n", ir.label.c_str(), ir.dim);
    for (int i = 0; i < ir.dim; ++i)
      std::printf("  averaged_drift eig %s\n", format_complex(ef.eigenvalues()[i]).c_str());
    for (int i = 0; i < ir.dim; ++i)
      std::printf("  factor_drift   eig %s\n", format_complex(et.eigenvalues()[i]).c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bundle diffusion simulator and verification harness"};
  app.require_subcommand(1);

  std::string config, out_path, a_path, b_path;
  double z_max = 3.0;
  bool unsimplified = false, alt_ordering = false;

  CLI::App* check = app.add_subcommand("check", "validate a configuration");
  check->add_option("--config", config, "instance file")->required();

  CLI::App* full = app.add_subcommand("simulate-full", "joint bundle simulation");
  full->add_option("--config", config, "instance file")->required();
  full->add_option("--out", out_path, "output csv (default stdout)");
  full->add_flag("--flag-unsimplified-drift", unsimplified,
                 "integrate the divergence-form drift instead of the production drift");
  Overrides full_ov;
  full_ov.attach(full);

  CLI::App* reduced = app.add_subcommand("simulate-reduced", "base process with matrix weight");
  reduced->add_option("--config", config, "instance file")->required();
  reduced->add_option("--out", out_path, "output csv (default stdout)");
  reduced->add_flag("--flag-alt-ordering", alt_ordering,
                    "swap the weight past the initial fiber offset (wrong-word control)");
  Overrides red_ov;
  red_ov.attach(reduced);

  CLI::App* compare = app.add_subcommand("compare", "score two csv runs");
  compare->add_option("a", a_path, "first csv")->required();
  compare->add_option("b", b_path, "second csv")->required();
  compare->add_option("--z-max", z_max, "failure threshold");

  CLI::App* spectrum = app.add_subcommand("spectrum", "weight drift eigenvalues at x0");
  spectrum->add_option("--config", config, "instance file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(check)) return run_check(config);
    if (app.got_subcommand(compare)) return run_compare(a_path, b_path, z_max);
    if (app.got_subcommand(spectrum)) return run_spectrum(config);

    InstanceConfig cfg = load_instance(config);
    if (app.got_subcommand(full)) {
      full_ov.apply(cfg.params);
      cfg.params.unsimplified_drift = unsimplified;
      RunResult run = estimate_full(cfg.model, cfg.observable, cfg.params, cfg.x0);
      emit_csv(run, config, cfg.params, out_path);
      return 0;
    }
    red_ov.apply(cfg.params);
    RunResult run = estimate_reduced(cfg.model, cfg.observable, cfg.params, cfg.x0, alt_ordering);
    emit_csv(run, config, cfg.params, out_path);
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
