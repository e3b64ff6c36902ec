#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "greyhull/errors.hpp"
#include "greyhull/identification.hpp"

namespace greyhull {

namespace {

constexpr std::array<double, kNumKeyParams> kScaleFloor{0.01, 100.0, 100.0, 10.0, 0.01, 0.1,
                                                        0.1,  0.1,   0.01,  0.01, 0.1};
constexpr double kFractionToBoundary = 0.995;
constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 40;
constexpr double kMaxDamping = 1e12;
constexpr double kZeroObjective = 1e-300;

// Linear inequality system G z <= h in scaled variables z = p / s.
struct ScaledConstraints {
  Eigen::MatrixXd G;
  Eigen::VectorXd h;

  Eigen::VectorXd slack(const Eigen::VectorXd& z) const { return h - G * z; }
};

ScaledConstraints scale_constraints(const std::vector<LinearConstraint>& rows,
                                    const std::array<double, kNumKeyParams>& s) {
  std::vector<const LinearConstraint*> kept;
  for (const auto& r : rows)
    if (!r.is_trivial()) kept.push_back(&r);
  ScaledConstraints sc;
  sc.G.resize(static_cast<Eigen::Index>(kept.size()), kNumKeyParams);
  sc.h.resize(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < kNumKeyParams; ++j)
      sc.G(ii, static_cast<Eigen::Index>(j)) = kept[i]->coeffs[j] * s[j] / kept[i]->scale;
    sc.h(ii) = kept[i]->bound / kept[i]->scale;
  }
  return sc;
}

KeyParams unscale(const Eigen::VectorXd& z, const std::array<double, kNumKeyParams>& s) {
  KeyParams p;
  for (std::size_t j = 0; j < kNumKeyParams; ++j) p[j] = z(static_cast<Eigen::Index>(j)) * s[j];
  return p;
}

double barrier_sum(const Eigen::VectorXd& slack) {
  double b = 0.0;
  for (Eigen::Index i = 0; i < slack.size(); ++i) b -= std::log(slack(i));
  return b;
}

// Largest step in (0, 1] keeping slack - alpha * dslack strictly positive.
double max_step(const Eigen::VectorXd& slack, const Eigen::VectorXd& slack_decrease) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < slack.size(); ++i)
    if (slack_decrease(i) > 0.0)
      alpha = std::min(alpha, kFractionToBoundary * slack(i) / slack_decrease(i));
  return alpha;
}

// Phase I: find z with G z - h <= -margin by minimizing
//   t + (eps/2) |z - z0|^2  s.t.  G z - h <= t
// with a shrinking log barrier. Returns false if no such point was found.
bool restore_feasibility(const ScaledConstraints& sc, Eigen::VectorXd& z, double margin) {
  const Eigen::Index n = z.size();
  const Eigen::Index m = sc.G.rows();
  if (m == 0) return true;
  const Eigen::VectorXd z0 = z;
  constexpr double eps = 1e-2;
  double t = (sc.G * z - sc.h).maxCoeff() + 1.0;
  double mu = 1.0;

  const auto merit = [&](const Eigen::VectorXd& zz, double tt, const Eigen::VectorXd& sl) {
    return tt + 0.5 * eps * (zz - z0).squaredNorm() + mu * barrier_sum(sl);
  };

  for (int it = 0; it < 400; ++it) {
    const Eigen::VectorXd viol = sc.G * z - sc.h;
    if (viol.maxCoeff() <= -margin) return true;
    const Eigen::VectorXd sl = (t - viol.array()).matrix();
    const Eigen::VectorXd inv = sl.cwiseInverse();
    const Eigen::VectorXd inv2 = inv.cwiseAbs2();

    Eigen::VectorXd grad(n + 1);
    grad.head(n) = eps * (z - z0) + mu * sc.G.transpose() * inv;
    grad(n) = 1.0 - mu * inv.sum();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n + 1, n + 1);
    H.topLeftCorner(n, n) = eps * Eigen::MatrixXd::Identity(n, n) +
                            mu * sc.G.transpose() * inv2.asDiagonal() * sc.G;
    const Eigen::VectorXd cross = -mu * sc.G.transpose() * inv2;
    H.block(0, n, n, 1) = cross;
    H.block(n, 0, 1, n) = cross.transpose();
    H(n, n) = mu * inv2.sum();
    H.diagonal().array() += 1e-12 * H.diagonal().maxCoeff();
    const Eigen::VectorXd d = H.ldlt().solve(-grad);
    if (!d.allFinite()) return false;

    // slack_i(z + a dz, t + a dt) = sl_i + a (dt - G_i dz)
    const Eigen::VectorXd decrease = (sc.G * d.head(n)).array() - d(n);
    double alpha = max_step(sl, decrease);
    const double phi0 = merit(z, t, sl);
    const double slope = grad.dot(d);
    bool moved = false;
    for (int ls = 0; ls < kMaxBacktracks; ++ls) {
      const Eigen::VectorXd zt = z + alpha * d.head(n);
      const double tt = t + alpha * d(n);
      const Eigen::VectorXd slt = (tt - (sc.G * zt - sc.h).array()).matrix();
      if ((slt.array() > 0.0).all() && merit(zt, tt, slt) <= phi0 + kArmijo * alpha * slope) {
        z = zt;
        t = tt;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved && mu < 1e-14) return false;
    mu *= 0.2;
  }
  return (sc.G * z - sc.h).maxCoeff() <= -margin;
}

struct Evaluation {
  std::vector<double> residuals;
  double value = 0.0;
  bool ok = false;
};

Evaluation evaluate(const ResidualModel& model, const KeyParams& p, double penalty) {
  Evaluation e;
  e.residuals.resize(model.residual_count());
  e.ok = p.is_finite() && model.residuals(p, e.residuals);
  if (!e.ok) {
    e.value = penalty;
    return e;
  }
  double s = 0.0;
  for (double r : e.residuals) s += r * r;
  e.value = s;
  return e;
}

}  // namespace

std::array<double, kNumKeyParams> parameter_scales(const KeyParams& p_init) {
  std::array<double, kNumKeyParams> s{};
  for (std::size_t j = 0; j < kNumKeyParams; ++j) s[j] = std::max(std::abs(p_init[j]), kScaleFloor[j]);
  return s;
}

FitResult solve_constrained_least_squares(const ResidualModel& model, const KeyParams& p_init,
                                          const std::vector<LinearConstraint>& constraints,
                                          const SolverOptions& opt,
                                          const std::function<void(const IterationLog&)>& log) {
  opt.validate();
  if (!p_init.is_finite()) throw UsageError("initial parameters are not finite");

  const auto s = parameter_scales(p_init);
  const ScaledConstraints sc = scale_constraints(constraints, s);
  const auto m_rows = static_cast<double>(std::max<Eigen::Index>(sc.G.rows(), 1));
  const Eigen::Index n = kNumKeyParams;

  FitResult result;
  Eigen::VectorXd z(n);
  for (std::size_t j = 0; j < kNumKeyParams; ++j) z(static_cast<Eigen::Index>(j)) = p_init[j] / s[j];

  Evaluation cur = evaluate(model, p_init, opt.failure_penalty);
  result.initial_objective = cur.value;

  const auto finish = [&](Termination reason) {
    result.reason = reason;
    result.p_star = unscale(z, s);
    result.final_objective = cur.value;
    return result;
  };

  if (sc.G.rows() > 0 && sc.slack(z).minCoeff() <= 0.0) {
    result.restored = true;
    if (!restore_feasibility(sc, z, opt.feasibility_tolerance)) {
      result.objective_trace.push_back(cur.value);
      return finish(Termination::Infeasible);
    }
    cur = evaluate(model, unscale(z, s), opt.failure_penalty);
  }
  result.objective_trace.push_back(cur.value);
  if (cur.ok && cur.value <= kZeroObjective) return finish(Termination::OptimalAtStart);

  const double f_ref = std::max(cur.value, std::numeric_limits<double>::min());
  const double mu_min = opt.barrier_final * f_ref / m_rows;
  double mu = opt.barrier_initial * f_ref / m_rows;
  double damping = 1e-3;

  for (int pass = 0; pass < opt.max_iterations; ++pass) {
    const KeyParams p = unscale(z, s);
    Eigen::MatrixXd J = model.jacobian(p, cur.residuals, opt.fd_relative_step);
    for (Eigen::Index j = 0; j < n; ++j) J.col(j) *= s[static_cast<std::size_t>(j)];
    const Eigen::Map<const Eigen::VectorXd> r(cur.residuals.data(),
                                              static_cast<Eigen::Index>(cur.residuals.size()));

    const Eigen::VectorXd slack = sc.slack(z);
    const Eigen::VectorXd inv = slack.cwiseInverse();
    const Eigen::VectorXd grad = 2.0 * J.transpose() * r + mu * sc.G.transpose() * inv;
    const Eigen::MatrixXd hess = 2.0 * J.transpose() * J +
                                 mu * sc.G.transpose() * inv.cwiseAbs2().asDiagonal() * sc.G;
    const double phi0 = cur.value + mu * barrier_sum(slack);
    const double diag_floor = 1e-12 * std::max(hess.diagonal().maxCoeff(), 1e-300);

    bool accepted = false;
    double taken = 0.0;
    double decrement = 0.0;
    while (!accepted && damping <= kMaxDamping) {
      Eigen::MatrixXd A = hess;
      for (Eigen::Index j = 0; j < n; ++j) A(j, j) += damping * std::max(hess(j, j), diag_floor) + diag_floor;
      const Eigen::VectorXd d = A.ldlt().solve(-grad);
      const double slope = grad.dot(d);
      if (!d.allFinite() || !(slope < 0.0)) {
        damping *= 10.0;
        continue;
      }
      double alpha = max_step(slack, sc.G * d);
      for (int ls = 0; ls < kMaxBacktracks && !accepted; ++ls, alpha *= 0.5) {
        const Eigen::VectorXd zt = z + alpha * d;
        const Eigen::VectorXd st = sc.slack(zt);
        if (!((st.array() > 0.0).all())) continue;
        Evaluation trial = evaluate(model, unscale(zt, s), opt.failure_penalty);
        if (!trial.ok || trial.value > cur.value) continue;
        if (trial.value + mu * barrier_sum(st) <= phi0 + kArmijo * alpha * slope) {
          z = zt;
          cur = std::move(trial);
          accepted = true;
          taken = alpha;
          decrement = -slope;
        }
      }
      if (!accepted) damping *= 10.0;
    }

    if (!accepted) {
      if (mu > mu_min) {
        mu = std::max(mu * opt.barrier_reduction, mu_min);
        damping = 1e-3;
        continue;
      }
      return finish(Termination::NoProgress);
    }

    ++result.iterations;
    result.objective_trace.push_back(cur.value);
    if (log) log({result.iterations, cur.value, mu, damping, taken});
    damping = std::max(damping / 3.0, 1e-12);
    // Shrink the barrier only once the iterate is close to the central path:
    // the predicted decrease has fallen below the duality-gap estimate.
    if (decrement <= mu * m_rows) mu = std::max(mu * opt.barrier_reduction, mu_min);

    if (cur.value <= kZeroObjective) return finish(Termination::Converged);
    const auto& tr = result.objective_trace;
    const auto w = static_cast<std::size_t>(opt.stall_window);
    if (mu <= mu_min && tr.size() > w) {
      const double old = tr[tr.size() - 1 - w];
      if (old - cur.value <= opt.relative_tolerance * old) return finish(Termination::Converged);
    }
  }
  return finish(Termination::MaxIterations);
}

FitResult fit(const FitProblem& problem, const std::function<void(const IterationLog&)>& log) {
  problem.validate();
  const DatasetObjective model(problem, problem.options.execution);
  FitResult result =
      solve_constrained_least_squares(model, problem.p_init, problem_constraints(problem),
                                      problem.options, log);
  result.violations = evaluate_constraints(result.p_star, problem.constraints, problem.config);
  result.trajectory_costs.resize(model.trajectory_count());
  model.trajectory_costs(result.p_star, result.trajectory_costs);
  // Report the objective through the same path as objective().
  double sum = 0.0;
  for (double c : result.trajectory_costs) sum += c;
  if (result.reason != Termination::Infeasible)
    result.final_objective = sum / static_cast<double>(result.trajectory_costs.size());
  const ObjectiveValue init = objective(problem.p_init, problem);
  result.initial_objective = init.value;
  return result;
}

}  // namespace greyhull
