#include "greyhull/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "greyhull/angles.hpp"
#include "greyhull/dynamics.hpp"
#include "greyhull/errors.hpp"

namespace greyhull {

namespace {

constexpr std::array<const char*, kPoseVelocityDim> kChannelNames{"x", "y", "psi", "u", "v", "r"};

void check_pair(const Trajectory& a, const Trajectory& b) {
  if (a.states.size() != b.states.size()) throw UsageError("trajectories differ in knot count");
  if (a.states.size() < 2) throw UsageError("trajectories need at least one step");
}

ChannelVector abs_deviation(const VesselState& m, const VesselState& p) {
  return {std::abs(m.x - p.x), std::abs(m.y - p.y),   std::abs(wrap_angle(m.psi - p.psi)),
          std::abs(m.u - p.u), std::abs(m.v - p.v), std::abs(m.r - p.r)};
}

std::optional<double> relative_improvement(double baseline, double fitted) {
  if (!(baseline > 0.0)) return std::nullopt;
  return 100.0 * (baseline - fitted) / baseline;
}

}  // namespace

ChannelVector manhattan_distance(const Trajectory& measured, const Trajectory& predicted) {
  check_pair(measured, predicted);
  ChannelVector sum{};
  const std::size_t K = measured.states.size() - 1;
  for (std::size_t k = 1; k <= K; ++k) {
    const ChannelVector d = abs_deviation(measured.states[k], predicted.states[k]);
    for (std::size_t c = 0; c < kPoseVelocityDim; ++c) sum[c] += d[c];
  }
  for (double& s : sum) s /= static_cast<double>(K);
  return sum;
}

double cvdm(const Trajectory& measured, const Trajectory& predicted, double max_yaw_rate) {
  check_pair(measured, predicted);
  const double L = path_length(measured);
  const double U = mean_speed(measured);
  if (!(L > 0.0)) throw DegenerateScenarioError("cVDM: measured path length is zero");
  if (!(U > 0.0)) throw DegenerateScenarioError("cVDM: measured mean speed is zero");
  if (!(max_yaw_rate > 0.0)) throw DegenerateScenarioError("cVDM: yaw-rate normalizer is zero");
  const ChannelVector norm{L, L, kPi, U, U, max_yaw_rate};
  const std::size_t K = measured.states.size() - 1;
  double total = 0.0;
  for (std::size_t k = 1; k <= K; ++k) {
    const ChannelVector d = abs_deviation(measured.states[k], predicted.states[k]);
    double knot = 0.0;
    for (std::size_t c = 0; c < kPoseVelocityDim; ++c) knot += d[c] / norm[c];
    total += knot;
  }
  return 100.0 * total / static_cast<double>(K);
}

TrajectoryComparison compare(const Trajectory& measured, const Trajectory& predicted,
                             double max_yaw_rate) {
  TrajectoryComparison c;
  c.md = manhattan_distance(measured, predicted);
  c.cvdm = cvdm(measured, predicted, max_yaw_rate);
  c.path_length = path_length(measured);
  c.mean_speed = mean_speed(measured);
  c.max_yaw_rate = max_yaw_rate;
  return c;
}

double median(std::vector<double> values) {
  if (values.empty()) throw UsageError("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double variance(const std::vector<double>& values) {
  if (values.empty()) throw UsageError("variance of an empty sample");
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                      static_cast<double>(values.size());
  double s = 0.0;
  for (double v : values) s += (v - mean) * (v - mean);
  return s / static_cast<double>(values.size());
}

EvaluationReport evaluate_protocol(const std::vector<Trajectory>& test_set,
                                   const KeyParams& baseline, const KeyParams& fitted,
                                   const VesselConfig& config, double max_yaw_rate,
                                   Execution execution) {
  if (test_set.empty()) throw UsageError("evaluation needs a non-empty test set");
  for (const auto& t : test_set) t.validate();

  EvaluationReport report;
  report.scenarios.resize(test_set.size());
  const auto m = static_cast<std::ptrdiff_t>(test_set.size());
  std::vector<std::string> errors(test_set.size());
#pragma omp parallel for schedule(dynamic, 1) if (execution == Execution::Parallel)
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const Trajectory& truth = test_set[ui];
    ScenarioEvaluation& sc = report.scenarios[ui];
    sc.index = ui;
    try {
      sc.baseline_prediction =
          simulate(truth.states.front(), truth.inputs, {}, baseline, config, truth.dt);
      sc.fitted_prediction =
          simulate(truth.states.front(), truth.inputs, {}, fitted, config, truth.dt);
      sc.baseline = compare(truth, sc.baseline_prediction, max_yaw_rate);
      sc.fitted = compare(truth, sc.fitted_prediction, max_yaw_rate);
    } catch (const std::exception& e) {
      errors[ui] = e.what();
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (!errors[i].empty()) throw SimulationFault("scenario " + std::to_string(i) + ": " + errors[i]);

  std::vector<double> averages;
  std::vector<double> cvdm_gains;
  std::vector<double> cvdm_baseline;
  std::vector<double> cvdm_fitted;
  for (auto& sc : report.scenarios) {
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t c = 0; c < kPoseVelocityDim; ++c) {
      sc.md_improvement[c] = relative_improvement(sc.baseline.md[c], sc.fitted.md[c]);
      if (sc.md_improvement[c]) {
        sum += *sc.md_improvement[c];
        ++used;
      } else {
        sc.flags.push_back(std::string("zero baseline MD in channel ") + kChannelNames[c]);
      }
    }
    if (used > 0) {
      sc.average_improvement = sum / static_cast<double>(used);
      averages.push_back(*sc.average_improvement);
    }
    sc.cvdm_improvement = relative_improvement(sc.baseline.cvdm, sc.fitted.cvdm);
    if (sc.cvdm_improvement)
      cvdm_gains.push_back(*sc.cvdm_improvement);
    else
      sc.flags.push_back("zero baseline cVDM");
    cvdm_baseline.push_back(sc.baseline.cvdm);
    cvdm_fitted.push_back(sc.fitted.cvdm);
  }

  if (!averages.empty())
    report.mari = median(averages);
  else
    report.flags.push_back("mARI undefined: no scenario has a usable channel");
  if (!cvdm_gains.empty())
    report.cvdm_improvement = median(cvdm_gains);
  else
    report.flags.push_back("cVDM improvement undefined: every baseline cVDM is zero");
  const double vb = variance(cvdm_baseline);
  if (vb > 0.0)
    report.consistency = 100.0 * (1.0 - variance(cvdm_fitted) / vb);
  else
    report.flags.push_back("consistency undefined: baseline cVDM variance is zero");
  return report;
}

}  // namespace greyhull
