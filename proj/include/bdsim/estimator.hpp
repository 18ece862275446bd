#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "bdsim/filtering.hpp"

namespace bdsim {

// Spectral observable phi(x, y) = sum over irreps and invariant channels of
// v_rho^dag D^lambda(L_y) c^lambda_rho(x). Owns its irrep copies so the
// coefficient callback can rely on stable indices.
struct Observable {
  std::vector<IrrepSpec> irreps;
  // dim x n_spherical coefficient block for irrep `index` at base point x
  std::function<CMat(int index, const Vec& x)> coefficients;
  VecA y0;  // fiber offset of the initial point; folded into the transport word
};

struct RunResult {
  std::vector<double> times;
  std::vector<std::vector<cplx>> values;  // [checkpoint][path]
  std::vector<std::vector<char>> valid;   // [checkpoint][path]
  std::vector<cplx> means;                // over valid paths
  std::vector<double> ses;
  uint64_t aborted_paths = 0;
};

// Simulates the joint bundle process and reads out the observable with the
// Feynman-Kac weight exp(-int V). Checkpoint anchors absorb recenterings.
RunResult estimate_full(const BundleModel& model, const Observable& obs,
                        const SimulationParams& prm, const Vec& x0);

// Simulates the base marginal only and transports the observable with the
// accumulated matrix weight. alt_ordering swaps the weight past the initial
// fiber offset and is a deliberate wrong-word control.
RunResult estimate_reduced(const BundleModel& model, const Observable& obs,
                           const SimulationParams& prm, const Vec& x0, bool alt_ordering = false);

double z_score(cplx mean_a, double se_a, cplx mean_b, double se_b);

struct CsvRow {
  cplx value;
  bool ok = false;
};

struct CsvRun {
  std::string config_hash;
  uint64_t seed = 0;
  std::vector<double> times;
  std::vector<std::map<uint64_t, CsvRow>> rows;  // per time, keyed by path
};

void write_run_csv(std::ostream& os, const RunResult& run, const std::string& config_hash,
                   uint64_t seed);
CsvRun read_run_csv(std::istream& is);
std::string format_complex(cplx v);
cplx parse_complex(const std::string& text);

struct CheckpointComparison {
  double time = 0.0;
  uint64_t n = 0;  // paths valid in both runs
  cplx mean_a, mean_b;
  double se_a = 0.0, se_b = 0.0;
  double z = 0.0;
};

// Per-checkpoint agreement over the intersection of valid paths.
std::vector<CheckpointComparison> compare_runs(const CsvRun& a, const CsvRun& b);

}  // namespace bdsim
