#include "bdsim/estimator.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>

namespace bdsim {

namespace {

void finalize(RunResult& run) {
  const size_t ncp = run.times.size();
  run.means.assign(ncp, cplx(0, 0));
  run.ses.assign(ncp, 0.0);
  for (size_t cp = 0; cp < ncp; ++cp) {
    cplx sum(0, 0);
    uint64_t n = 0;
    for (size_t p = 0; p < run.values[cp].size(); ++p)
      if (run.valid[cp][p]) {
        sum += run.values[cp][p];
        ++n;
      }
    if (n == 0) continue;
    cplx mean = sum / double(n);
    double ss = 0.0;
    for (size_t p = 0; p < run.values[cp].size(); ++p)
      if (run.valid[cp][p]) ss += std::norm(run.values[cp][p] - mean);
    run.means[cp] = mean;
    run.ses[cp] = n > 1 ? std::sqrt(ss / double(n - 1) / double(n)) : 0.0;
  }
}

RunResult empty_run(const SimulationParams& prm) {
  RunResult run;
  for (uint64_t k : checkpoint_steps(prm)) run.times.push_back(double(k) * prm.dt);
  run.values.assign(run.times.size(), std::vector<cplx>(prm.paths, cplx(0, 0)));
  run.valid.assign(run.times.size(), std::vector<char>(prm.paths, 0));
  return run;
}

}  // namespace

RunResult estimate_full(const BundleModel& model, const Observable& obs,
                        const SimulationParams& prm, const Vec& x0) {
  if (obs.irreps.empty()) throw StructuralError("observable carries no irreps");
  RunResult run = empty_run(prm);
  const int nlam = static_cast<int>(obs.irreps.size());
  std::vector<CMat> D0(nlam);
  for (int l = 0; l < nlam; ++l) D0[l] = coset_rep_element(obs.irreps[l], *model.spec, obs.y0);

  for (uint64_t p = 0; p < static_cast<uint64_t>(prm.paths); ++p) {
    std::vector<CMat> anchors(D0.begin(), D0.end());
    FullPathHooks hooks;
    hooks.recenter = [&](const VecA& y) {
      for (int l = 0; l < nlam; ++l)
        anchors[l] = coset_rep_element(obs.irreps[l], *model.spec, y) * anchors[l];
    };
    hooks.checkpoint = [&](int index, const Vec& x, const VecA& y, double v_int) {
      cplx val(0, 0);
      for (int l = 0; l < nlam; ++l) {
        CMat D = coset_rep_element(obs.irreps[l], *model.spec, y) * anchors[l];
        val += synthesize_value(obs.irreps[l], D, obs.coefficients(l, x));
      }
      run.values[index][p] = std::exp(-v_int) * val;
      run.valid[index][p] = 1;
    };
    PathOutcome out = simulate_full_path(model, prm, p, x0, hooks);
    if (out.aborted) ++run.aborted_paths;
  }
  finalize(run);
  return run;
}

RunResult estimate_reduced(const BundleModel& model, const Observable& obs,
                           const SimulationParams& prm, const Vec& x0, bool alt_ordering) {
  if (obs.irreps.empty()) throw StructuralError("observable carries no irreps");
  RunResult run = empty_run(prm);
  const int nlam = static_cast<int>(obs.irreps.size());
  std::vector<ReducedGenerator> rgs;
  std::vector<CMat> D0(nlam);
  for (int l = 0; l < nlam; ++l) {
    rgs.push_back(make_reduced_generator(obs.irreps[l], *model.spec));
    D0[l] = coset_rep_element(obs.irreps[l], *model.spec, obs.y0);
  }
  // without a base there is no noise contraction: one factor serves every step
  const bool static_factor = model.base.dim == 0;
  std::vector<CMat> F_const;
  if (static_factor)
    for (int l = 0; l < nlam; ++l)
      F_const.push_back(matrix_exp(CMat(lambda_tilde(rgs[l], model, prm.mu2_kappa, Vec(0)) * prm.dt)));

  for (uint64_t p = 0; p < static_cast<uint64_t>(prm.paths); ++p) {
    std::vector<CMat> M(nlam);
    for (int l = 0; l < nlam; ++l) M[l] = CMat::Identity(obs.irreps[l].dim, obs.irreps[l].dim);
    BasePathHooks hooks;
    hooks.on_step = [&](uint64_t, const Vec& x, const Vec& dz) {
      for (int l = 0; l < nlam; ++l)
        M[l] = static_factor ? CMat(F_const[l] * M[l]) : filter_step(rgs[l], model, prm, x, dz, M[l]);
    };
    hooks.checkpoint = [&](int index, const Vec& x, double v_int) {
      cplx val(0, 0);
      for (int l = 0; l < nlam; ++l) {
        CMat W = alt_ordering ? CMat(D0[l] * M[l]) : CMat(M[l] * D0[l]);
        val += synthesize_value(obs.irreps[l], W, obs.coefficients(l, x));
      }
      run.values[index][p] = std::exp(-v_int) * val;
      run.valid[index][p] = 1;
    };
    PathOutcome out = simulate_base_path(model, prm, p, x0, hooks);
    if (out.aborted) ++run.aborted_paths;
  }
  finalize(run);
  return run;
}

double z_score(cplx mean_a, double se_a, cplx mean_b, double se_b) {
  double d = std::abs(mean_a - mean_b);
  double denom = std::sqrt(se_a * se_a + se_b * se_b);
  if (denom == 0.0) return d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return d / denom;
}

std::string format_complex(cplx v) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gj", v.real(), v.imag());
  return buf;
}

cplx parse_complex(const std::string& text) {
  if (text.size() < 2 || text.back() != 'j')
    throw StructuralError("malformed complex value: " + text);
  size_t split = std::string::npos;
  for (size_t i = 1; i + 1 < text.size(); ++i) {
    char c = text[i];
    if ((c == '+' || c == '-') && text[i - 1] != 'e' && text[i - 1] != 'E') split = i;
  }
  if (split == std::string::npos) throw StructuralError("malformed complex value: " + text);
  double re = std::stod(text.substr(0, split));
  double im = std::stod(text.substr(split, text.size() - split - 1));
  return cplx(re, im);
}

void write_run_csv(std::ostream& os, const RunResult& run, const std::string& config_hash,
                   uint64_t seed) {
  os << "# config_hash=" << config_hash << "\n";
  os << "# seed=" << seed << "\n";
  os << "path,t,value,valid\n";
  const size_t ncp = run.times.size();
  const size_t np = ncp ? run.values[0].size() : 0;
  char tb[40];
  for (size_t p = 0; p < np; ++p)
    for (size_t cp = 0; cp < ncp; ++cp) {
      std::snprintf(tb, sizeof tb, "%.17g", run.times[cp]);
      cplx v = run.valid[cp][p] ? run.values[cp][p] : cplx(0, 0);
      os << p << ',' << tb << ',' << format_complex(v) << ',' << int(run.valid[cp][p]) << "\n";
    }
}

namespace {

size_t time_index(CsvRun& run, double t) {
  for (size_t i = 0; i < run.times.size(); ++i)
    if (std::abs(run.times[i] - t) < 1e-12) return i;
  run.times.push_back(t);
  run.rows.emplace_back();
  return run.times.size() - 1;
}

}  // namespace

CsvRun read_run_csv(std::istream& is) {
  CsvRun run;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      size_t eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      std::string val = line.substr(eq + 1);
      while (!key.empty() && key.front() == ' ') key.erase(key.begin());
      while (!key.empty() && key.back() == ' ') key.pop_back();
      if (key == "config_hash") run.config_hash = val;
      if (key == "seed") run.seed = std::stoull(val);
      continue;
    }
    if (line.rfind("path,", 0) == 0) continue;
    std::string field[4];
    int nf = 0;
    size_t start = 0;
    for (size_t i = 0; i <= line.size(); ++i)
      if (i == line.size() || line[i] == ',') {
        if (nf >= 4) throw StructuralError("too many columns: " + line);
        field[nf++] = line.substr(start, i - start);
        start = i + 1;
      }
    if (nf != 4) throw StructuralError("expected four columns: " + line);
    uint64_t path = std::stoull(field[0]);
    size_t idx = time_index(run, std::stod(field[1]));
    run.rows[idx][path] = CsvRow{parse_complex(field[2]), field[3] == "1"};
  }
  return run;
}

std::vector<CheckpointComparison> compare_runs(const CsvRun& a, const CsvRun& b) {
  if (a.times.size() != b.times.size())
    throw StructuralError("runs disagree on the number of checkpoints");
  std::vector<CheckpointComparison> out;
  for (size_t i = 0; i < a.times.size(); ++i) {
    size_t j = b.times.size();
    for (size_t k = 0; k < b.times.size(); ++k)
      if (std::abs(b.times[k] - a.times[i]) < 1e-9) {
        j = k;
        break;
      }
    if (j == b.times.size()) throw StructuralError("no matching checkpoint time in second run");

    std::vector<cplx> va, vb;
    for (const auto& [path, row] : a.rows[i]) {
      if (!row.ok) continue;
      auto it = b.rows[j].find(path);
      if (it == b.rows[j].end() || !it->second.ok) continue;
      va.push_back(row.value);
      vb.push_back(it->second.value);
    }
    if (va.empty()) throw StructuralError("no common valid paths at a checkpoint");

    CheckpointComparison c;
    c.time = a.times[i];
    c.n = va.size();
    cplx sa(0, 0), sb(0, 0);
    for (size_t k = 0; k < va.size(); ++k) {
      sa += va[k];
      sb += vb[k];
    }
    c.mean_a = sa / double(c.n);
    c.mean_b = sb / double(c.n);
    double ssa = 0.0, ssb = 0.0;
    for (size_t k = 0; k < va.size(); ++k) {
      ssa += std::norm(va[k] - c.mean_a);
      ssb += std::norm(vb[k] - c.mean_b);
    }
    if (c.n > 1) {
      c.se_a = std::sqrt(ssa / double(c.n - 1) / double(c.n));
      c.se_b = std::sqrt(ssb / double(c.n - 1) / double(c.n));
    }
    c.z = z_score(c.mean_a, c.se_a, c.mean_b, c.se_b);
    out.push_back(c);
  }
  return out;
}

}  // namespace bdsim
