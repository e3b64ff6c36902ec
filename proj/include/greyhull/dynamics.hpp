#pragma once

#include <span>

#include "greyhull/forces.hpp"
#include "greyhull/key_params.hpp"
#include "greyhull/vessel_config.hpp"
#include "greyhull/vessel_state.hpp"

namespace greyhull {

/// Body-frame accelerations (u_dot, v_dot, r_dot).
struct AccelTriple {
  double u_dot = 0.0;
  double v_dot = 0.0;
  double r_dot = 0.0;
};

/// Relative floor for |det| of the sway/yaw inertia matrix.
inline constexpr double kDeterminantFloor = 1e-9;

/// Solves the 3-DoF equations of motion for the body accelerations given the
/// aggregated external forces. Surge is a scalar row; sway and yaw form a
/// coupled 2x2 system. Hull damping is evaluated at the current state.
AccelTriple solve_accelerations(const VesselState& s, const ForceTriple& total,
                                const HydroCoefficients& h);

/// Moves `current` toward `target` by at most `max_change`, then clamps to +-limit.
double rate_limited(double current, double target, double max_change, double limit);

/// One explicit-Euler step.
VesselState step(const VesselState& s, const ControlInput& in, const EnvInput& env,
                 const KeyParams& p, const VesselConfig& c, double dt,
                 const EnvironmentModel* environment = nullptr);

/// Rolls out inputs.size() steps from `initial`. `envs` must be empty (calm
/// water) or have the same length as `inputs`. A fault at step k is rethrown
/// as SimulationFault carrying k.
Trajectory simulate(const VesselState& initial, std::span<const ControlInput> inputs,
                    std::span<const EnvInput> envs, const KeyParams& p, const VesselConfig& c,
                    double dt, const EnvironmentModel* environment = nullptr);

inline Trajectory simulate(const VesselState& initial, std::span<const ControlInput> inputs,
                           const KeyParams& p, const VesselConfig& c, double dt) {
  return simulate(initial, inputs, {}, p, c, dt);
}

}  // namespace greyhull
