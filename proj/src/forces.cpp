#include "greyhull/forces.hpp"

#include <algorithm>
#include <cmath>

namespace greyhull {

bool ForceTriple::is_finite() const {
  return std::isfinite(X) && std::isfinite(Y) && std::isfinite(N);
}

double resistance(double u, const KeyParams& p) {
  const double a = std::abs(u);
  const double r = a * (p[1] + a * (p[2] + a * p[3]));
  return u < 0.0 ? -r : r;
}

double resistance_slope(double u, const KeyParams& p) {
  return p[1] + u * (2.0 * p[2] + 3.0 * p[3] * u);
}

double propeller_thrust(double u, double n_rpm, const VesselConfig& c) {
  const PropellerModel& pm = c.prop;
  const double ns = n_rpm / 60.0;
  const double J = std::abs(ns) < kRevolutionEpsilon
                       ? 0.0
                       : u * (1.0 - pm.wake_fraction) / (ns * pm.diameter);
  const double kt = pm.kt0 + J * (pm.kt1 + J * pm.kt2);
  const double d2 = pm.diameter * pm.diameter;
  const double sign = ns > 0.0 ? 1.0 : (ns < 0.0 ? -1.0 : 0.0);
  return (1.0 - pm.thrust_deduction) * c.rho * ns * ns * d2 * d2 * kt * sign;
}

ForceTriple propeller_forces(const VesselState& s, const KeyParams& p, const VesselConfig& c) {
  const double X = propeller_thrust(s.u, s.n, c);
  const double Y = p[0] * X;
  return {X, Y, c.x_propeller * Y};
}

RudderCoefficients rudder_coefficients(double a, const KeyParams& p) {
  return {p[4] + a * (p[5] + a * (p[6] + a * p[7])), p[8] + a * (p[9] + a * p[10])};
}

RudderInflow rudder_inflow(const VesselState& s, const VesselConfig& c) {
  const double lateral = s.v + c.x_rudder * s.r;
  RudderInflow in;
  in.drift = std::atan2(lateral, std::max(s.u, kSpeedEpsilon));
  in.angle = s.delta - in.drift;
  in.speed_squared = s.u * s.u + lateral * lateral;
  return in;
}

ForceTriple rudder_forces(const VesselState& s, const KeyParams& p, const VesselConfig& c) {
  const RudderInflow in = rudder_inflow(s, c);
  if (in.speed_squared == 0.0) return {};
  const double a = std::clamp(in.angle, -c.inflow_angle_max, c.inflow_angle_max);
  const RudderCoefficients k = rudder_coefficients(a, p);
  const double q = 0.5 * c.rho * c.rudder_area * in.speed_squared;
  const double lift = q * k.lift;
  const double drag = q * k.drag;
  const double cb = std::cos(in.drift);
  const double sb = std::sin(in.drift);
  ForceTriple f;
  f.X = -drag * cb + lift * sb;
  f.Y = lift * cb + drag * sb;
  f.N = c.x_rudder * f.Y;
  return f;
}

double resistance_force(double u, const KeyParams& p) {
  const double sign = u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
  return -sign * std::abs(resistance(u, p));
}

ForceTriple aggregate(const VesselState& s, const EnvInput& env, const KeyParams& p,
                      const VesselConfig& c, const EnvironmentModel* environment) {
  const ForceTriple prop = propeller_forces(s, p, c);
  const ForceTriple rud = rudder_forces(s, p, c);
  const ForceTriple ext = environment ? environment->forces(s, env, c) : ForceTriple{};
  ForceTriple total = prop;
  total += rud;
  total += ext;
  total.X += resistance_force(s.u, p);
  return total;
}

}  // namespace greyhull
