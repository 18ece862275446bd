#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bdsim/bundle_model.hpp"
#include "bdsim/noise.hpp"

namespace bdsim {

struct SimulationParams {
  double dt = 1e-3;
  double T = 0.5;
  double mu2_kappa = 1.0;
  uint64_t seed = 1;
  int paths = 1000;
  bool unsimplified_drift = false;
  std::vector<double> checkpoints;  // empty means {T}
  double fd_step = 1e-5;            // base-coordinate differences
};

int total_steps(const SimulationParams& prm);
// step counts at which readouts fire, sorted; 0 is the initial state
std::vector<uint64_t> checkpoint_steps(const SimulationParams& prm);

// production drifts (prefactor 0.5 mu^2 kappa included)
Vec base_drift(const BundleModel& model, const SimulationParams& prm, const Vec& x);
VecA fiber_drift(const BundleModel& model, const SimulationParams& prm, const Vec& x,
                 const CosetFrame& frame);

// joint drift in divergence form on the assembled metric; y-derivatives are
// analytic unless pure_fd, base derivatives always central differences
Vec joint_divergence_drift(const BundleModel& model, const SimulationParams& prm, const Vec& x,
                           const VecA& y, bool pure_fd = false);

enum class DriftMode { production, divergence_form };

// second-order generator applied to a scalar observable, derivatives of the
// observable by central differences with step fd_phi
double generator_apply(const BundleModel& model, const SimulationParams& prm, DriftMode mode,
                       const std::function<double(const Vec&, const VecA&)>& observable,
                       const Vec& x, const VecA& y, double fd_phi = 1e-4);

// one shared base step: both lanes advance x through exactly these operations
struct XStep {
  Vec noise;   // applied noise increment (filter contraction target)
  Vec x_pred;  // Euler predictor point
  Vec x_next;
};
XStep x_advance(const BundleModel& model, const SimulationParams& prm, const NoiseSource& rng,
                uint64_t path, uint64_t step, const Vec& x);

struct PathOutcome {
  bool aborted = false;
  uint64_t steps_run = 0;
  int recenterings = 0;
};

struct FullPathHooks {
  // y is the pre-reset chart point; receiver folds it into its anchor
  std::function<void(const VecA& y)> recenter;
  std::function<void(int index, const Vec& x, const VecA& y, double v_integral)> checkpoint;
};

struct BasePathHooks {
  std::function<void(uint64_t step, const Vec& x_left, const Vec& noise_dx)> on_step;
  std::function<void(int index, const Vec& x, double v_integral)> checkpoint;
};

// joint (x, y) path from the chart origin; initial fiber position lives in the
// caller's anchor
PathOutcome simulate_full_path(const BundleModel& model, const SimulationParams& prm,
                               uint64_t path, const Vec& x0, const FullPathHooks& hooks);

// base marginal only, bitwise identical x to the full lane under the same seed
PathOutcome simulate_base_path(const BundleModel& model, const SimulationParams& prm,
                               uint64_t path, const Vec& x0, const BasePathHooks& hooks);

}  // namespace bdsim
