#include <vector>

#include "doctest.h"
#include "greyhull/identification.hpp"
#include "greyhull/presets.hpp"
#include "test_support.hpp"

using namespace greyhull;
using namespace greyhull::testing;

TEST_SUITE("parallel") {

TEST_CASE("serial and parallel residuals are bit-identical") {
  const VesselPreset a = ship_a();
  const FitProblem problem = make_problem(a, synthetic_set(a, a.reference_fitted, 7, 17, 90), a.baseline);
  const DatasetObjective model(problem);
  std::vector<double> s(model.residual_count()), p(model.residual_count());
  REQUIRE(model.residuals_serial(a.initial_guess, s));
  REQUIRE(model.residuals_parallel(a.initial_guess, p));
  CHECK(s == p);
}

TEST_CASE("serial and parallel Jacobians are bit-identical") {
  const VesselPreset b = ship_b();
  const FitProblem problem = make_problem(b, synthetic_set(b, b.reference_fitted, 5, 18, 70), b.baseline);
  const DatasetObjective model(problem);
  std::vector<double> base(model.residual_count());
  REQUIRE(model.residuals(b.baseline, base));
  const Eigen::MatrixXd js = model.jacobian_serial(b.baseline, base, 1e-6);
  const Eigen::MatrixXd jp = model.jacobian_parallel(b.baseline, base, 1e-6);
  CHECK(js.rows() == jp.rows());
  CHECK((js.array() == jp.array()).all());
}

TEST_CASE("serial and parallel fits agree exactly") {
  const VesselPreset b = ship_b();
  FitProblem problem = make_problem(b, synthetic_set(b, b.reference_fitted, 6, 19, 60), b.baseline);
  problem.options.execution = Execution::Serial;
  const FitResult s = fit(problem);
  problem.options.execution = Execution::Parallel;
  const FitResult p = fit(problem);
  CHECK(s.p_star == p.p_star);
  CHECK(s.objective_trace == p.objective_trace);
}

}  // TEST_SUITE
