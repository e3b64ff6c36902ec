#pragma once

#include <cmath>
#include <string>
#include <numbers>

namespace greyhull {

inline constexpr double kPi = std::numbers::pi;

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  if (a > -kPi && a <= kPi) return a;
  double w = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

inline constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Decimal degrees for a radian value, converted in extended precision and
/// printed with 17 significant digits, or 18 / 21 when 17 do not let
/// parse_degrees recover `rad` bit-exactly.
std::string format_degrees(double rad);

/// Parses decimal degrees and converts to radians in extended precision.
/// Returns false if `text` is not a complete number.
bool parse_degrees(const std::string& text, double& rad);

}  // namespace greyhull
