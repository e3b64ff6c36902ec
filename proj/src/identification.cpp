#include "greyhull/identification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "greyhull/angles.hpp"
#include "greyhull/dynamics.hpp"
#include "greyhull/errors.hpp"

namespace greyhull {

namespace {

constexpr std::array<Channel, kPoseVelocityDim> kCostChannels{
    Channel::X, Channel::Y, Channel::Psi, Channel::U, Channel::V, Channel::R};

double channel_residual(const VesselState& measured, const VesselState& predicted, Channel c) {
  const double d = measured[c] - predicted[c];
  return c == Channel::Psi ? wrap_angle(d) : d;
}

}  // namespace

double path_length(const Trajectory& t) {
  double L = 0.0;
  for (std::size_t k = 1; k < t.states.size(); ++k)
    L += std::hypot(t.states[k].x - t.states[k - 1].x, t.states[k].y - t.states[k - 1].y);
  return L;
}

double mean_speed(const Trajectory& t) {
  if (t.states.empty()) return 0.0;
  double s = 0.0;
  for (const auto& st : t.states) s += std::hypot(st.u, st.v);
  return s / static_cast<double>(t.states.size());
}

std::array<double, kStateDim> WeightSpec::diagonal() const {
  return {1.0 / path_length, 1.0 / path_length, 1.0 / kPi, 1.0 / mean_speed,
          1.0 / mean_speed,  1.0 / max_yaw_rate, 0.0,       0.0};
}

WeightSpec WeightSpec::from_measured(const Trajectory& measured, double max_yaw_rate) {
  WeightSpec w;
  w.path_length = greyhull::path_length(measured);
  w.mean_speed = greyhull::mean_speed(measured);
  w.max_yaw_rate = max_yaw_rate;
  if (!(w.path_length > 0.0)) throw DegenerateScenarioError("measured trajectory has zero path length");
  if (!(w.mean_speed > 0.0)) throw DegenerateScenarioError("measured trajectory has zero mean speed");
  if (!(max_yaw_rate > 0.0)) throw DegenerateScenarioError("yaw-rate normalizer must be positive");
  return w;
}

WeightSpec WeightSpec::from_measured_own_yaw_rate(const Trajectory& measured) {
  double r = 0.0;
  for (const auto& s : measured.states) r = std::max(r, std::abs(s.r));
  return from_measured(measured, r);
}

double trajectory_cost(const Trajectory& predicted, const Trajectory& measured,
                       const WeightSpec& w) {
  if (predicted.states.size() != measured.states.size())
    throw UsageError("trajectory_cost: knot counts differ");
  const auto W = w.diagonal();
  double cost = 0.0;
  for (std::size_t k = 0; k < measured.states.size(); ++k) {
    for (Channel c : kCostChannels) {
      const double d = channel_residual(measured.states[k], predicted.states[k], c);
      cost += W[static_cast<std::size_t>(c)] * d * d;
    }
  }
  return cost;
}

void SolverOptions::validate() const {
  if (max_iterations < 1) throw UsageError("max_iterations must be at least 1");
  if (!(feasibility_tolerance > 0.0)) throw UsageError("feasibility_tolerance must be positive");
  if (!(relative_tolerance > 0.0)) throw UsageError("relative_tolerance must be positive");
  if (stall_window < 1) throw UsageError("stall_window must be at least 1");
  if (!(fd_relative_step > 0.0 && fd_relative_step < 1e-2))
    throw UsageError("fd_relative_step must lie in (0, 1e-2)");
  if (!(failure_penalty > 0.0)) throw UsageError("failure_penalty must be positive");
  if (!(barrier_initial > 0.0)) throw UsageError("barrier_initial must be positive");
  if (!(barrier_reduction > 0.0 && barrier_reduction < 1.0))
    throw UsageError("barrier_reduction must lie in (0, 1)");
  if (!(barrier_final > 0.0 && barrier_final <= barrier_initial))
    throw UsageError("barrier_final must lie in (0, barrier_initial]");
}

FitProblem::FitProblem() {
  lower_bounds.fill(-std::numeric_limits<double>::infinity());
  upper_bounds.fill(std::numeric_limits<double>::infinity());
}

void FitProblem::validate() const {
  if (dataset.empty()) throw UsageError("fit problem has no trajectories");
  const std::size_t K = dataset.front().knots();
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    dataset[i].validate();
    if (dataset[i].knots() != K) {
      std::ostringstream os;
      os << "trajectory " << i << " has " << dataset[i].knots() << " knots, expected " << K;
      throw UsageError(os.str());
    }
    if (per_trajectory_yaw_rate)
      WeightSpec::from_measured_own_yaw_rate(dataset[i]);
    else
      WeightSpec::from_measured(dataset[i], max_yaw_rate);
  }
  if (!p_init.is_finite()) throw UsageError("initial parameters are not finite");
  for (std::size_t j = 0; j < kNumKeyParams; ++j)
    if (!(lower_bounds[j] <= upper_bounds[j])) throw UsageError("parameter bounds are inverted");
  config.validate();
  constraints.validate();
  options.validate();
}

double fd_step(double pj, double relative_step) {
  return relative_step * std::max(1.0, std::abs(pj));
}

Eigen::MatrixXd ResidualModel::jacobian(const KeyParams& p, std::span<const double> base,
                                        double relative_step) const {
  const std::size_t n = residual_count();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), kNumKeyParams);
  std::vector<double> buf(n);
  for (std::size_t j = 0; j < kNumKeyParams; ++j) {
    const double h = fd_step(p[j], relative_step);
    KeyParams q = p;
    q[j] = p[j] + h;
    const double hf = q[j] - p[j];
    if (residuals(q, buf)) {
      for (std::size_t i = 0; i < n; ++i) J(static_cast<Eigen::Index>(i), j) = (buf[i] - base[i]) / hf;
      continue;
    }
    q[j] = p[j] - h;
    const double hb = p[j] - q[j];
    if (residuals(q, buf))
      for (std::size_t i = 0; i < n; ++i) J(static_cast<Eigen::Index>(i), j) = (base[i] - buf[i]) / hb;
  }
  return J;
}

DatasetObjective::DatasetObjective(const FitProblem& problem, Execution execution)
    : problem_(problem), execution_(execution) {
  problem.validate();
  weights_.reserve(problem.dataset.size());
  for (const auto& t : problem.dataset)
    weights_.push_back(problem.per_trajectory_yaw_rate
                           ? WeightSpec::from_measured_own_yaw_rate(t)
                           : WeightSpec::from_measured(t, problem.max_yaw_rate));
  block_ = problem.dataset.front().states.size() * kPoseVelocityDim;
}

std::size_t DatasetObjective::residual_count() const { return block_ * weights_.size(); }

bool DatasetObjective::block_residuals(std::size_t i, const KeyParams& p,
                                       std::span<double> out) const {
  const Trajectory& measured = problem_.dataset[i];
  Trajectory predicted;
  try {
    predicted = simulate(measured.states.front(), measured.inputs, {}, p, problem_.config,
                         measured.dt);
  } catch (const SimulationFault&) {
    return false;
  }
  const auto W = weights_[i].diagonal();
  const double inv_m = 1.0 / static_cast<double>(weights_.size());
  std::array<double, kPoseVelocityDim> scale{};
  for (std::size_t d = 0; d < kPoseVelocityDim; ++d)
    scale[d] = std::sqrt(W[static_cast<std::size_t>(kCostChannels[d])] * inv_m);
  std::size_t idx = 0;
  for (std::size_t k = 0; k < measured.states.size(); ++k)
    for (std::size_t d = 0; d < kPoseVelocityDim; ++d)
      out[idx++] = scale[d] * channel_residual(measured.states[k], predicted.states[k], kCostChannels[d]);
  return true;
}

bool DatasetObjective::residuals_serial(const KeyParams& p, std::span<double> out) const {
  for (std::size_t i = 0; i < weights_.size(); ++i)
    if (!block_residuals(i, p, out.subspan(i * block_, block_))) return false;
  return true;
}

bool DatasetObjective::residuals_parallel(const KeyParams& p, std::span<double> out) const {
  const auto m = static_cast<std::ptrdiff_t>(weights_.size());
  int failures = 0;
#pragma omp parallel for schedule(static) reduction(+ : failures)
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    if (!block_residuals(ui, p, out.subspan(ui * block_, block_))) failures += 1;
  }
  return failures == 0;
}

bool DatasetObjective::residuals(const KeyParams& p, std::span<double> out) const {
  return execution_ == Execution::Parallel ? residuals_parallel(p, out) : residuals_serial(p, out);
}

Eigen::MatrixXd DatasetObjective::jacobian_serial(const KeyParams& p, std::span<const double> base,
                                                  double relative_step) const {
  return ResidualModel::jacobian(p, base, relative_step);
}

Eigen::MatrixXd DatasetObjective::jacobian_parallel(const KeyParams& p,
                                                    std::span<const double> base,
                                                    double relative_step) const {
  const std::size_t n = residual_count();
  const std::size_t m = weights_.size();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), kNumKeyParams);

  // Every (parameter, trajectory) rollout is independent. A column is only
  // usable if none of its blocks faulted, so faults are recorded per column.
  std::array<int, kNumKeyParams> forward_failed{};
  const auto tasks = static_cast<std::ptrdiff_t>(kNumKeyParams * m);
#pragma omp parallel
  {
    std::vector<double> buf(block_);
#pragma omp for schedule(dynamic, 1)
    for (std::ptrdiff_t t = 0; t < tasks; ++t) {
      const auto j = static_cast<std::size_t>(t) / m;
      const auto i = static_cast<std::size_t>(t) % m;
      KeyParams q = p;
      q[j] = p[j] + fd_step(p[j], relative_step);
      const double hf = q[j] - p[j];
      if (!block_residuals(i, q, buf)) {
#pragma omp atomic write
        forward_failed[j] = 1;
        continue;
      }
      for (std::size_t r = 0; r < block_; ++r) {
        const std::size_t row = i * block_ + r;
        J(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) = (buf[r] - base[row]) / hf;
      }
    }
  }

  std::vector<double> full(n);
  for (std::size_t j = 0; j < kNumKeyParams; ++j) {
    if (!forward_failed[j]) continue;
    J.col(static_cast<Eigen::Index>(j)).setZero();
    KeyParams q = p;
    q[j] = p[j] - fd_step(p[j], relative_step);
    const double hb = p[j] - q[j];
    if (residuals_parallel(q, full))
      for (std::size_t r = 0; r < n; ++r)
        J(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = (base[r] - full[r]) / hb;
  }
  return J;
}

Eigen::MatrixXd DatasetObjective::jacobian(const KeyParams& p, std::span<const double> base,
                                           double relative_step) const {
  return execution_ == Execution::Parallel ? jacobian_parallel(p, base, relative_step)
                                           : jacobian_serial(p, base, relative_step);
}

bool DatasetObjective::trajectory_costs(const KeyParams& p, std::span<double> out) const {
  const auto m = static_cast<std::ptrdiff_t>(weights_.size());
  int failures = 0;
#pragma omp parallel for schedule(static) reduction(+ : failures) if (execution_ == Execution::Parallel)
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const Trajectory& measured = problem_.dataset[ui];
    try {
      const Trajectory predicted = simulate(measured.states.front(), measured.inputs, {}, p,
                                            problem_.config, measured.dt);
      out[ui] = trajectory_cost(predicted, measured, weights_[ui]);
    } catch (const SimulationFault&) {
      out[ui] = problem_.options.failure_penalty;
      failures += 1;
    }
  }
  return failures == 0;
}

ObjectiveValue objective(const KeyParams& p, const FitProblem& problem) {
  if (!p.is_finite()) throw UsageError("objective: parameters are not finite");
  const DatasetObjective model(problem);
  std::vector<double> costs(model.trajectory_count());
  if (!model.trajectory_costs(p, costs)) return {problem.options.failure_penalty, false};
  double sum = 0.0;
  for (double c : costs) sum += c;
  return {sum / static_cast<double>(costs.size()), true};
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::OptimalAtStart: return "optimal-at-start";
    case Termination::NoProgress: return "no-progress";
    case Termination::MaxIterations: return "max-iter";
    case Termination::Infeasible: return "infeasible";
  }
  return "unknown";
}

std::vector<LinearConstraint> problem_constraints(const FitProblem& problem) {
  std::vector<LinearConstraint> rows = linear_constraints(problem.constraints, problem.config);
  for (std::size_t j = 0; j < kNumKeyParams; ++j) {
    const double scale = std::max(1.0, std::abs(problem.p_init[j]));
    if (std::isfinite(problem.upper_bounds[j])) {
      LinearConstraint c{ConstraintKind::ParameterBound, 0.0, {}, problem.upper_bounds[j], scale};
      c.coeffs[j] = 1.0;
      rows.push_back(c);
    }
    if (std::isfinite(problem.lower_bounds[j])) {
      LinearConstraint c{ConstraintKind::ParameterBound, 0.0, {}, -problem.lower_bounds[j], scale};
      c.coeffs[j] = -1.0;
      rows.push_back(c);
    }
  }
  return rows;
}

}  // namespace greyhull
