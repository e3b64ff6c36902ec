#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "greyhull/dataset.hpp"
#include "greyhull/identification.hpp"
#include "greyhull/presets.hpp"
#include "greyhull/scenario.hpp"

namespace greyhull::testing {

/// Small noise-free dataset simulated under `truth` for the given preset.
inline std::vector<Trajectory> synthetic_set(const VesselPreset& preset, const KeyParams& truth,
                                             std::size_t count, std::uint64_t seed,
                                             std::size_t knots = 120) {
  const auto specs = sample_scenarios(preset, count, seed, 0.7, knots, 1.0);
  return generate_dataset(preset, specs, truth, NoiseSpec{}, seed).dataset.trajectories;
}

inline FitProblem make_problem(const VesselPreset& preset, std::vector<Trajectory> data,
                               const KeyParams& p_init) {
  FitProblem problem;
  problem.dataset = std::move(data);
  problem.config = preset.config;
  problem.p_init = p_init;
  problem.constraints = ConstraintSet::standard(max_surge(problem.dataset));
  return problem;
}

/// Straight-line trajectory with constant surge speed along +x.
inline Trajectory straight_line(std::size_t knots, double speed, double dt = 1.0) {
  Trajectory t;
  t.dt = dt;
  for (std::size_t k = 0; k <= knots; ++k) {
    VesselState s;
    s.x = speed * dt * static_cast<double>(k);
    s.u = speed;
    t.states.push_back(s);
    if (k < knots) t.inputs.push_back({});
  }
  return t;
}

/// Random trajectory pair with a non-degenerate measured side.
inline std::pair<Trajectory, Trajectory> random_pair(std::mt19937_64& rng, std::size_t knots) {
  std::uniform_real_distribution<double> pos(-500.0, 500.0);
  std::uniform_real_distribution<double> ang(-3.14159, 3.14159);
  std::uniform_real_distribution<double> vel(-3.0, 6.0);
  std::uniform_real_distribution<double> yaw(-0.03, 0.03);
  Trajectory a, b;
  for (std::size_t k = 0; k <= knots; ++k) {
    VesselState s{pos(rng), pos(rng), ang(rng), vel(rng), vel(rng), yaw(rng), 0.0, 0.0};
    VesselState t{pos(rng), pos(rng), ang(rng), vel(rng), vel(rng), yaw(rng), 0.0, 0.0};
    if (k == 0) t = s;
    a.states.push_back(s);
    b.states.push_back(t);
    if (k < knots) {
      a.inputs.push_back({});
      b.inputs.push_back({});
    }
  }
  return {a, b};
}

}  // namespace greyhull::testing
