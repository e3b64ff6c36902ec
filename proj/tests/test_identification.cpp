#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "greyhull/angles.hpp"
#include "greyhull/dynamics.hpp"
#include "greyhull/errors.hpp"
#include "greyhull/identification.hpp"
#include "greyhull/presets.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace greyhull;
using namespace greyhull::testing;

TEST_SUITE("identification") {

TEST_CASE("weights come from the measured trajectory") {
  const Trajectory t = straight_line(10, 2.0);
  const WeightSpec w = WeightSpec::from_measured(t);
  CHECK(w.path_length == doctest::Approx(20.0));
  CHECK(w.mean_speed == doctest::Approx(2.0));
  const auto d = w.diagonal();
  CHECK(d[0] == doctest::Approx(1.0 / 20.0));
  CHECK(d[2] == doctest::Approx(1.0 / kPi));
  CHECK(d[5] == doctest::Approx(1.0 / 0.0314));
  CHECK(d[6] == 0.0);
  CHECK(d[7] == 0.0);
}

TEST_CASE("single x deviation of 3 m with a 100 m track costs 0.09") {
  const Trajectory measured = straight_line(50, 2.0);
  Trajectory predicted = measured;
  predicted.states[17].x += 3.0;
  WeightSpec w;
  w.path_length = 100.0;
  w.mean_speed = 2.0;
  CHECK(trajectory_cost(predicted, measured, w) == doctest::Approx(0.09).epsilon(1e-15));
}

TEST_CASE("heading residuals are wrapped before squaring") {
  const Trajectory measured = straight_line(5, 2.0);
  Trajectory predicted = measured;
  predicted.states[3].psi = 2.0 * kPi - 0.1;
  WeightSpec w;
  w.path_length = 10.0;
  w.mean_speed = 2.0;
  CHECK(trajectory_cost(predicted, measured, w) == doctest::Approx(0.01 / kPi).epsilon(1e-12));
}

TEST_CASE("rpm and rudder channels carry no weight") {
  const Trajectory measured = straight_line(5, 2.0);
  Trajectory predicted = measured;
  for (auto& s : predicted.states) {
    s.n += 50.0;
    s.delta += 0.2;
  }
  CHECK(trajectory_cost(predicted, measured, WeightSpec::from_measured(measured)) == 0.0);
}

TEST_CASE("knot-count mismatch is a usage error") {
  const Trajectory a = straight_line(5, 2.0);
  const Trajectory b = straight_line(6, 2.0);
  CHECK_THROWS_AS(trajectory_cost(a, b, WeightSpec{}), UsageError);
}

TEST_CASE("degenerate measured trajectories are rejected") {
  Trajectory still = straight_line(5, 0.0);
  CHECK_THROWS_AS(WeightSpec::from_measured(still), DegenerateScenarioError);
}

TEST_CASE("objective is zero at the generating parameters and averages trajectory costs") {
  const VesselPreset a = ship_a();
  const FitProblem problem = make_problem(a, synthetic_set(a, a.reference_fitted, 4, 3, 60), a.baseline);
  const ObjectiveValue at_truth = objective(a.reference_fitted, problem);
  CHECK(at_truth.feasible);
  CHECK(at_truth.value == 0.0);

  const DatasetObjective model(problem);
  std::vector<double> costs(model.trajectory_count());
  REQUIRE(model.trajectory_costs(a.baseline, costs));
  double sum = 0.0;
  for (double c : costs) sum += c;
  CHECK(objective(a.baseline, problem).value == doctest::Approx(sum / 4.0).epsilon(1e-14));

  std::vector<double> r(model.residual_count());
  REQUIRE(model.residuals(a.baseline, r));
  double sq = 0.0;
  for (double x : r) sq += x * x;
  CHECK(sq == doctest::Approx(sum / 4.0).epsilon(1e-12));
}

TEST_CASE("perturbing p1 increases the objective") {
  const VesselPreset b = ship_b();
  const FitProblem problem = make_problem(b, synthetic_set(b, b.reference_fitted, 3, 5, 60), b.baseline);
  KeyParams p = b.reference_fitted;
  p[1] *= 1.1;
  CHECK(objective(p, problem).value > objective(b.reference_fitted, problem).value);
}

TEST_CASE("a faulting rollout returns the penalty and flags the iterate") {
  const VesselPreset a = ship_a();
  const FitProblem problem = make_problem(a, synthetic_set(a, a.reference_fitted, 2, 3, 30), a.baseline);
  KeyParams p = a.reference_fitted;
  p[3] = 1e305;
  const ObjectiveValue v = objective(p, problem);
  CHECK_FALSE(v.feasible);
  CHECK(v.value == 1e12);
}

TEST_CASE("fit from the generating parameters stops at once") {
  const VesselPreset b = ship_b();
  const FitProblem problem = make_problem(b, synthetic_set(b, b.reference_fitted, 5, 11, 60), b.reference_fitted);
  const FitResult r = fit(problem);
  CHECK(r.iterations <= 1);
  CHECK(r.reason == Termination::OptimalAtStart);
  CHECK(r.p_star == b.reference_fitted);
  CHECK(r.final_objective == 0.0);
}

TEST_CASE("fit restores feasibility from an infeasible start and keeps a monotone trace") {
  const VesselPreset b = ship_b();
  KeyParams start = b.reference_fitted;
  start[8] = 0.2;  // c_D(0) above its 0.05 cap
  const FitProblem problem = make_problem(b, synthetic_set(b, b.reference_fitted, 6, 21, 80), start);
  const FitResult r = fit(problem);
  CHECK(r.restored);
  CHECK(r.success());
  CHECK(max_normalized_violation(r.violations) <= 1e-6);
  for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
    CHECK(r.objective_trace[i] <= r.objective_trace[i - 1]);
  CHECK(r.final_objective <= r.objective_trace.front());
  CHECK(r.final_objective < 1e-10);
}

TEST_CASE("fit recovers ship B from its baseline on a small noise-free set") {
  const VesselPreset b = ship_b();
  const FitProblem problem = make_problem(b, synthetic_set(b, b.reference_fitted, 10, 4, 120), b.baseline);
  const FitResult r = fit(problem);
  CHECK(r.success());
  CHECK(r.final_objective <= 1e-4 * r.initial_objective);
  CHECK(r.final_objective <= objective(b.baseline, problem).value);
  CHECK(max_normalized_violation(r.violations) <= 1e-6);
  for (std::size_t j = 1; j <= 3; ++j)
    CHECK(r.p_star[j] == doctest::Approx(b.reference_fitted[j]).epsilon(1e-3));
}

TEST_CASE("infeasible constraint sets are reported, not hidden") {
  const VesselPreset b = ship_b();
  FitProblem problem = make_problem(b, synthetic_set(b, b.reference_fitted, 2, 4, 40), b.baseline);
  problem.constraints.drag_at_zero_max = -1.0;  // c_D(0) <= -1 contradicts c_D >= 0
  const FitResult r = fit(problem);
  CHECK(r.reason == Termination::Infeasible);
  CHECK_FALSE(r.success());
  CHECK(max_normalized_violation(r.violations) > 0.0);
}

TEST_CASE("bad solver options are usage errors") {
  SolverOptions o;
  o.max_iterations = 0;
  CHECK_THROWS_AS(o.validate(), UsageError);
  o = SolverOptions{};
  o.barrier_reduction = 1.5;
  CHECK_THROWS_AS(o.validate(), UsageError);
  o = SolverOptions{};
  o.feasibility_tolerance = -1.0;
  CHECK_THROWS_AS(o.validate(), UsageError);
}

TEST_CASE("finite-difference step is relative with a floor of one") {
  CHECK(fd_step(0.0, 1e-6) == 1e-6);
  CHECK(fd_step(0.5, 1e-6) == 1e-6);
  CHECK(fd_step(-34187.0, 1e-6) == doctest::Approx(0.034187));
}

TEST_CASE("gradient check is exact on a quadratic objective") {
  const LinearModel model;
  KeyParams p;
  for (std::size_t j = 0; j < kNumKeyParams; ++j) p[j] = 0.3 * static_cast<double>(j) - 1.0;
  CHECK(gradient_check(model, p).max_relative_discrepancy < 1e-8);
}

TEST_CASE("scaling all weights by a constant keeps the argmin on a parameter slice") {
  const VesselPreset b = ship_b();
  const auto data = synthetic_set(b, b.reference_fitted, 2, 8, 60);
  const auto w0 = WeightSpec::from_measured(data[0]);
  const auto w1 = WeightSpec::from_measured(data[1]);
  const auto cost = [&](const KeyParams& p, double c) {
    double s = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const Trajectory pred = simulate(data[i].states.front(), data[i].inputs, p, b.config, 1.0);
      s += c * trajectory_cost(pred, data[i], i == 0 ? w0 : w1);
    }
    return s;
  };
  const auto argmin = [&](double c) {
    std::pair<int, int> best{0, 0};
    double best_v = std::numeric_limits<double>::infinity();
    for (int i = -3; i <= 3; ++i)
      for (int k = -3; k <= 3; ++k) {
        KeyParams p = b.reference_fitted;
        p[1] *= 1.0 + 0.05 * i;
        p[5] *= 1.0 + 0.05 * k;
        const double v = cost(p, c);
        if (v < best_v) {
          best_v = v;
          best = {i, k};
        }
      }
    return best;
  };
  const auto a1 = argmin(1.0);
  CHECK(a1 == std::pair<int, int>{0, 0});
  CHECK(argmin(37.5) == a1);
  CHECK(argmin(1e-3) == a1);
}

}  // TEST_SUITE
