#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "greyhull/identification.hpp"
#include "greyhull/key_params.hpp"
#include "greyhull/vessel_config.hpp"
#include "greyhull/vessel_state.hpp"

namespace greyhull {

/// Per-dimension distances over (x, y, psi, u, v, r).
using ChannelVector = std::array<double, kPoseVelocityDim>;

/// Mean absolute deviation per dimension over knots 1..K, heading wrapped.
ChannelVector manhattan_distance(const Trajectory& measured, const Trajectory& predicted);

/// Nondimensional vessel distance (percent scale). Normalizers come from the
/// measured trajectory; throws DegenerateScenarioError if they vanish.
double cvdm(const Trajectory& measured, const Trajectory& predicted,
            double max_yaw_rate = kDefaultMaxYawRate);

struct TrajectoryComparison {
  ChannelVector md{};
  double cvdm = 0.0;
  double path_length = 0.0;
  double mean_speed = 0.0;
  double max_yaw_rate = kDefaultMaxYawRate;
};

TrajectoryComparison compare(const Trajectory& measured, const Trajectory& predicted,
                             double max_yaw_rate = kDefaultMaxYawRate);

struct ScenarioEvaluation {
  std::size_t index = 0;  // position in the test set
  TrajectoryComparison baseline;
  TrajectoryComparison fitted;
  /// 100 (MD_b - MD_f) / MD_b; empty where MD_b == 0.
  std::array<std::optional<double>, kPoseVelocityDim> md_improvement{};
  std::optional<double> average_improvement;  // mean over usable channels
  std::optional<double> cvdm_improvement;
  std::vector<std::string> flags;
  Trajectory baseline_prediction;
  Trajectory fitted_prediction;
};

struct EvaluationReport {
  std::vector<ScenarioEvaluation> scenarios;
  std::optional<double> mari;              // median of per-scenario average improvements
  std::optional<double> cvdm_improvement;  // median of per-scenario cVDM improvements
  std::optional<double> consistency;       // 100 (1 - Var(cVDM_f) / Var(cVDM_b))
  std::vector<std::string> flags;
};

/// Median of a non-empty sample (mean of the two middle values for even size).
double median(std::vector<double> values);
/// Population variance.
double variance(const std::vector<double>& values);

/// Simulates baseline and fitted models on each test scenario and compares
/// both against the measured trajectory.
EvaluationReport evaluate_protocol(const std::vector<Trajectory>& test_set,
                                   const KeyParams& baseline, const KeyParams& fitted,
                                   const VesselConfig& config,
                                   double max_yaw_rate = kDefaultMaxYawRate,
                                   Execution execution = Execution::Parallel);

}  // namespace greyhull
