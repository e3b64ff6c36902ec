#include <algorithm>
#include <cmath>
#include <limits>

#include "greyhull/errors.hpp"
#include "greyhull/identification.hpp"

namespace greyhull {

namespace {

constexpr double kCentralRelativeStep = 1e-4;

double scalar_objective(const ResidualModel& model, const KeyParams& p) {
  std::vector<double> r(model.residual_count());
  if (!model.residuals(p, r)) throw SimulationFault("gradient evaluation faulted");
  double s = 0.0;
  for (double x : r) s += x * x;
  return s;
}

}  // namespace

Eigen::VectorXd solver_gradient(const ResidualModel& model, const KeyParams& p,
                                double relative_step) {
  std::vector<double> base(model.residual_count());
  if (!model.residuals(p, base)) throw SimulationFault("gradient evaluation faulted");
  const Eigen::MatrixXd J = model.jacobian(p, base, relative_step);
  const Eigen::Map<const Eigen::VectorXd> r(base.data(), static_cast<Eigen::Index>(base.size()));
  return 2.0 * J.transpose() * r;
}

GradientCheckResult gradient_check(const ResidualModel& model, const KeyParams& p) {
  GradientCheckResult out;
  out.solver = solver_gradient(model, p);
  out.oracle.resize(kNumKeyParams);
  for (std::size_t j = 0; j < kNumKeyParams; ++j) {
    const double h = kCentralRelativeStep * std::max(1.0, std::abs(p[j]));
    KeyParams hi = p;
    KeyParams lo = p;
    hi[j] += h;
    lo[j] -= h;
    out.oracle(static_cast<Eigen::Index>(j)) =
        (scalar_objective(model, hi) - scalar_objective(model, lo)) / (hi[j] - lo[j]);
  }
  const double gmax = out.oracle.cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < out.oracle.size(); ++j) {
    const double denom = std::max({std::abs(out.oracle(j)), std::abs(out.solver(j)),
                                   1e-12 * gmax, std::numeric_limits<double>::min()});
    out.max_relative_discrepancy =
        std::max(out.max_relative_discrepancy, std::abs(out.solver(j) - out.oracle(j)) / denom);
  }
  return out;
}

double gradient_check(const KeyParams& p, const FitProblem& problem) {
  const DatasetObjective model(problem, problem.options.execution);
  return gradient_check(model, p).max_relative_discrepancy;
}

}  // namespace greyhull
