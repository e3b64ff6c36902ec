#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "greyhull/constraints.hpp"
#include "greyhull/key_params.hpp"
#include "greyhull/vessel_config.hpp"
#include "greyhull/vessel_state.hpp"

namespace greyhull {

inline constexpr double kDefaultMaxYawRate = 0.0314;  // rad/s

/// Diagonal of the per-trajectory weight matrix:
/// diag(1/L, 1/L, 1/pi, 1/U, 1/U, 1/r_max, 0, 0).
struct WeightSpec {
  double path_length = 1.0;  // L, m
  double mean_speed = 1.0;   // U, m/s
  double max_yaw_rate = kDefaultMaxYawRate;

  std::array<double, kStateDim> diagonal() const;

  /// Throws DegenerateScenarioError on zero path length or zero mean speed.
  static WeightSpec from_measured(const Trajectory& measured,
                                  double max_yaw_rate = kDefaultMaxYawRate);
  /// Uses max |r| of the measured trajectory instead of the global cap.
  static WeightSpec from_measured_own_yaw_rate(const Trajectory& measured);
};

/// Cartesian length of the (x, y) track.
double path_length(const Trajectory& t);
/// Mean of sqrt(u^2 + v^2) over all knots.
double mean_speed(const Trajectory& t);

/// Weighted squared deviation summed over all knots. Heading residuals are
/// wrapped; n and delta carry zero weight.
double trajectory_cost(const Trajectory& predicted, const Trajectory& measured,
                       const WeightSpec& w);

enum class Execution { Serial, Parallel };

struct SolverOptions {
  int max_iterations = 500;
  double feasibility_tolerance = 1e-6;  // normalized constraint units
  double relative_tolerance = 1e-8;     // objective decrease over `stall_window` iterations
  int stall_window = 5;
  double fd_relative_step = 1e-6;
  double failure_penalty = 1e12;
  double barrier_initial = 1e-3;  // mu_0 = barrier_initial * f0 / rows
  double barrier_reduction = 0.2;
  double barrier_final = 1e-14;   // mu_min = barrier_final * f0 / rows
  Execution execution = Execution::Parallel;

  void validate() const;
};

struct FitProblem {
  std::vector<Trajectory> dataset;
  VesselConfig config;
  KeyParams p_init;
  std::array<double, kNumKeyParams> lower_bounds;
  std::array<double, kNumKeyParams> upper_bounds;
  ConstraintSet constraints;
  SolverOptions options;
  double max_yaw_rate = kDefaultMaxYawRate;
  bool per_trajectory_yaw_rate = false;

  FitProblem();
  /// Checks M >= 1, equal knot counts, non-degenerate trajectories, valid grids.
  void validate() const;
};

/// Anything exposing a weighted residual vector whose squared norm is the
/// objective. The solver only ever talks to this interface.
class ResidualModel {
 public:
  virtual ~ResidualModel() = default;
  virtual std::size_t residual_count() const = 0;
  /// Fills `out`; returns false if the model cannot be evaluated at p.
  virtual bool residuals(const KeyParams& p, std::span<double> out) const = 0;
  /// Forward-difference Jacobian (residual_count x 11) around p, where `base`
  /// holds residuals(p). Columns whose perturbation faults fall back to a
  /// backward difference, then to zero.
  virtual Eigen::MatrixXd jacobian(const KeyParams& p, std::span<const double> base,
                                   double relative_step) const;
};

/// Fit objective over a dataset: rollouts from each measured initial state
/// under the recorded inputs, compared knot by knot.
class DatasetObjective final : public ResidualModel {
 public:
  explicit DatasetObjective(const FitProblem& problem,
                            Execution execution = Execution::Parallel);

  std::size_t residual_count() const override;
  bool residuals(const KeyParams& p, std::span<double> out) const override;
  Eigen::MatrixXd jacobian(const KeyParams& p, std::span<const double> base,
                           double relative_step) const override;

  /// Per-trajectory costs; false if any rollout faulted.
  bool trajectory_costs(const KeyParams& p, std::span<double> out) const;

  // Reference implementations kept for verification and benchmarking.
  bool residuals_serial(const KeyParams& p, std::span<double> out) const;
  bool residuals_parallel(const KeyParams& p, std::span<double> out) const;
  Eigen::MatrixXd jacobian_serial(const KeyParams& p, std::span<const double> base,
                                  double relative_step) const;
  Eigen::MatrixXd jacobian_parallel(const KeyParams& p, std::span<const double> base,
                                    double relative_step) const;

  std::size_t trajectory_count() const { return weights_.size(); }
  const WeightSpec& weights(std::size_t i) const { return weights_[i]; }
  std::size_t block_size() const { return block_; }

 private:
  bool block_residuals(std::size_t i, const KeyParams& p, std::span<double> out) const;

  const FitProblem& problem_;
  Execution execution_;
  std::vector<WeightSpec> weights_;
  std::size_t block_ = 0;  // residuals per trajectory
};

struct ObjectiveValue {
  double value = 0.0;
  bool feasible = true;  // false when a rollout faulted and the penalty was returned
};

/// (1/M) sum_i trajectory_cost, accumulated in dataset order.
ObjectiveValue objective(const KeyParams& p, const FitProblem& problem);

/// Forward step used for parameter j: relative_step * max(1, |p_j|).
double fd_step(double pj, double relative_step);

enum class Termination { Converged, OptimalAtStart, NoProgress, MaxIterations, Infeasible };
const char* to_string(Termination t);

struct FitResult {
  KeyParams p_star;
  std::vector<double> objective_trace;  // accepted iterates, starts at the (restored) initial point
  std::vector<ConstraintValue> violations;
  std::vector<double> trajectory_costs;
  double initial_objective = 0.0;  // at p_init, before any feasibility restoration
  double final_objective = 0.0;
  int iterations = 0;
  bool restored = false;  // p_init was infeasible and had to be moved
  Termination reason = Termination::Converged;

  bool success() const { return reason != Termination::Infeasible; }
};

struct IterationLog {
  int iteration = 0;
  double objective = 0.0;
  double barrier = 0.0;
  double damping = 0.0;
  double step_length = 0.0;
};

/// Scaling used by the solver for parameter j when starting from p_init.
std::array<double, kNumKeyParams> parameter_scales(const KeyParams& p_init);

/// Log-barrier interior-point method with Levenberg-damped Gauss-Newton steps
/// and a backtracking merit line search. Works in scaled parameters, restores
/// feasibility first when p_init violates a constraint.
FitResult solve_constrained_least_squares(const ResidualModel& model, const KeyParams& p_init,
                                          const std::vector<LinearConstraint>& constraints,
                                          const SolverOptions& options,
                                          const std::function<void(const IterationLog&)>& log = {});

/// Full fitting pipeline on a FitProblem.
FitResult fit(const FitProblem& problem, const std::function<void(const IterationLog&)>& log = {});

/// Linear rows for the constraint set plus any finite box bounds.
std::vector<LinearConstraint> problem_constraints(const FitProblem& problem);

/// Gradient as the solver computes it: 2 J^T rho with a forward-difference J.
Eigen::VectorXd solver_gradient(const ResidualModel& model, const KeyParams& p,
                                double relative_step = 1e-6);

struct GradientCheckResult {
  double max_relative_discrepancy = 0.0;
  Eigen::VectorXd solver;
  Eigen::VectorXd oracle;
};

/// Compares the solver gradient with central differences of the scalar
/// objective taken with an independent step (1e-4 relative).
GradientCheckResult gradient_check(const ResidualModel& model, const KeyParams& p);
double gradient_check(const KeyParams& p, const FitProblem& problem);

}  // namespace greyhull
