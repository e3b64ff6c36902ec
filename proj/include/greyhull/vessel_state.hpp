#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace greyhull {

/// Index of each component of the 8-dimensional vessel state.
enum class Channel : std::size_t { X = 0, Y, Psi, U, V, R, N, Delta };

inline constexpr std::size_t kStateDim = 8;
/// Channels that enter trajectory costs and distance measures (x, y, psi, u, v, r).
inline constexpr std::size_t kPoseVelocityDim = 6;

/// s = [x, y, psi, u, v, r, n, delta]. Angles in radians, n in rpm.
struct VesselState {
  double x = 0.0;      // m
  double y = 0.0;      // m
  double psi = 0.0;    // rad, kept in (-pi, pi]
  double u = 0.0;      // m/s
  double v = 0.0;      // m/s
  double r = 0.0;      // rad/s
  double n = 0.0;      // rpm
  double delta = 0.0;  // rad

  double operator[](Channel c) const;
  double& operator[](Channel c);

  std::array<double, kStateDim> to_array() const;
  static VesselState from_array(const std::array<double, kStateDim>& a);

  bool is_finite() const;

  friend bool operator==(const VesselState&, const VesselState&) = default;
};

struct ControlInput {
  double c_n = 0.0;      // commanded rpm
  double c_delta = 0.0;  // commanded rudder angle, rad

  friend bool operator==(const ControlInput&, const ControlInput&) = default;
};

/// K+1 states together with the K inputs that produced them.
struct Trajectory {
  std::vector<VesselState> states;
  std::vector<ControlInput> inputs;
  double dt = 1.0;

  std::size_t knots() const { return inputs.size(); }
  /// Throws UsageError unless states.size() == inputs.size() + 1 and dt > 0.
  void validate() const;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

}  // namespace greyhull
