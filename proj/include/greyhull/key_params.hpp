#pragma once

#include <array>
#include <cstddef>

namespace greyhull {

inline constexpr std::size_t kNumKeyParams = 11;

/// The eleven fitted force-model parameters.
///   p0       lateral propeller thrust fraction, Y_n = p0 X_n
///   p1..p3   resistance R(u) = p1 u + p2 u^2 + p3 u^3
///   p4..p7   rudder lift c_L(a) = p4 + p5 a + p6 a^2 + p7 a^3
///   p8..p10  rudder drag c_D(a) = p8 + p9 a + p10 a^2
struct KeyParams {
  std::array<double, kNumKeyParams> p{};

  double& operator[](std::size_t i) { return p[i]; }
  double operator[](std::size_t i) const { return p[i]; }

  double lateral_thrust() const { return p[0]; }
  bool is_finite() const;

  friend bool operator==(const KeyParams&, const KeyParams&) = default;
};

}  // namespace greyhull
