#include "greyhull/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "greyhull/angles.hpp"
#include "greyhull/errors.hpp"

namespace greyhull {

AccelTriple solve_accelerations(const VesselState& s, const ForceTriple& total,
                                const HydroCoefficients& h) {
  if (!s.is_finite() || !total.is_finite())
    throw SimulationFault("non-finite state or force passed to solve_accelerations");

  const double u = s.u;
  const double v = s.v;
  const double r = s.r;
  const double U = std::hypot(u, v);

  // Surge row: coupling terms moved to the right-hand side.
  const double surge_rhs =
      total.X - (h.Y_vdot - h.X_vr - h.m) * v * r - (h.Y_rdot - h.m * h.x_G) * r * r;
  const double u_dot = surge_rhs / (h.m - h.X_udot);

  const double sway_damping = -h.Y_v * U * v + (h.m * u - h.Y_r * U) * r -
                              h.Y_vv * v * std::abs(v) - h.Y_vr * v * std::abs(r) -
                              h.Y_rr * r * std::abs(r);
  double yaw_damping = -h.N_v * U * v + (h.m * h.x_G * u - h.N_r * U) * r -
                       h.N_rr * r * std::abs(r);
  if (U >= kSpeedEpsilon) yaw_damping -= (h.N_rrv * r * r * v + h.N_vvr * v * v * r) / U;

  const double a11 = h.m - h.Y_vdot;
  const double a12 = h.m * h.x_G - h.Y_rdot;
  const double a21 = h.m * h.x_G - h.N_vdot;
  const double a22 = h.I_zz - h.N_rdot;
  const double det = a11 * a22 - a12 * a21;
  if (!(std::abs(det) > kDeterminantFloor * std::abs(a11 * a22)))
    throw ConfigError("sway/yaw inertia matrix is singular");

  const double b1 = total.Y - sway_damping;
  const double b2 = total.N - yaw_damping;
  AccelTriple acc;
  acc.u_dot = u_dot;
  acc.v_dot = (a22 * b1 - a12 * b2) / det;
  acc.r_dot = (a11 * b2 - a21 * b1) / det;
  return acc;
}

double rate_limited(double current, double target, double max_change, double limit) {
  const double moved = current + std::clamp(target - current, -max_change, max_change);
  return std::clamp(moved, -limit, limit);
}

VesselState step(const VesselState& s, const ControlInput& in, const EnvInput& env,
                 const KeyParams& p, const VesselConfig& c, double dt,
                 const EnvironmentModel* environment) {
  if (!(dt > 0.0)) throw UsageError("step: dt must be positive");
  if (!s.is_finite()) throw SimulationFault("non-finite state");

  const ForceTriple total = aggregate(s, env, p, c, environment);
  if (!total.is_finite()) throw SimulationFault("non-finite force");
  const AccelTriple acc = solve_accelerations(s, total, c.hydro);

  const double cp = std::cos(s.psi);
  const double sp = std::sin(s.psi);
  VesselState next;
  next.x = s.x + dt * (s.u * cp - s.v * sp);
  next.y = s.y + dt * (s.u * sp + s.v * cp);
  next.psi = wrap_angle(s.psi + dt * s.r);
  next.u = s.u + dt * acc.u_dot;
  next.v = s.v + dt * acc.v_dot;
  next.r = s.r + dt * acc.r_dot;
  next.n = rate_limited(s.n, in.c_n, c.n_rate * dt, c.n_max);
  next.delta = rate_limited(s.delta, in.c_delta, c.delta_rate * dt, c.delta_max);
  if (!next.is_finite()) throw SimulationFault("integration produced a non-finite state");
  return next;
}

Trajectory simulate(const VesselState& initial, std::span<const ControlInput> inputs,
                    std::span<const EnvInput> envs, const KeyParams& p, const VesselConfig& c,
                    double dt, const EnvironmentModel* environment) {
  if (inputs.empty()) throw UsageError("simulate: need at least one input");
  if (!envs.empty() && envs.size() != inputs.size())
    throw UsageError("simulate: envs and inputs differ in length");
  if (!(dt > 0.0)) throw UsageError("simulate: dt must be positive");

  Trajectory t;
  t.dt = dt;
  t.inputs.assign(inputs.begin(), inputs.end());
  t.states.reserve(inputs.size() + 1);
  t.states.push_back(initial);
  const EnvInput calm{};
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    try {
      t.states.push_back(
          step(t.states.back(), inputs[k], envs.empty() ? calm : envs[k], p, c, dt, environment));
    } catch (const SimulationFault& e) {
      throw SimulationFault(std::string(e.what()) + " at step " + std::to_string(k),
                            static_cast<std::ptrdiff_t>(k));
    }
  }
  return t;
}

}  // namespace greyhull
