#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <string>

#include "greyhull/angles.hpp"
#include "greyhull/errors.hpp"
#include "greyhull/key_params.hpp"
#include "greyhull/vessel_config.hpp"
#include "greyhull/vessel_state.hpp"

namespace greyhull {

namespace {

constexpr long double kDegPerRad = 180.0L / std::numbers::pi_v<long double>;
constexpr long double kRadPerDeg = std::numbers::pi_v<long double> / 180.0L;

}  // namespace

bool parse_degrees(const std::string& text, double& rad) {
  if (text.empty()) return false;
  char* end = nullptr;
  errno = 0;
  const long double deg = std::strtold(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE) return false;
  rad = static_cast<double>(deg * kRadPerDeg);
  return true;
}

std::string format_degrees(double rad) {
  const long double deg = static_cast<long double>(rad) * kDegPerRad;
  char buf[64];
  for (int digits : {17, 18, 21}) {
    std::snprintf(buf, sizeof buf, "%.*Lg", digits, deg);
    double back = 0.0;
    if (parse_degrees(buf, back) && (back == rad || (std::isnan(back) && std::isnan(rad))))
      return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17Lg", deg);
  return buf;
}

double VesselState::operator[](Channel c) const {
  switch (c) {
    case Channel::X: return x;
    case Channel::Y: return y;
    case Channel::Psi: return psi;
    case Channel::U: return u;
    case Channel::V: return v;
    case Channel::R: return r;
    case Channel::N: return n;
    case Channel::Delta: return delta;
  }
  return 0.0;
}

double& VesselState::operator[](Channel c) {
  switch (c) {
    case Channel::X: return x;
    case Channel::Y: return y;
    case Channel::Psi: return psi;
    case Channel::U: return u;
    case Channel::V: return v;
    case Channel::R: return r;
    case Channel::N: return n;
    case Channel::Delta: break;
  }
  return delta;
}

std::array<double, kStateDim> VesselState::to_array() const {
  return {x, y, psi, u, v, r, n, delta};
}

VesselState VesselState::from_array(const std::array<double, kStateDim>& a) {
  return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7]};
}

bool VesselState::is_finite() const {
  for (double d : to_array())
    if (!std::isfinite(d)) return false;
  return true;
}

void Trajectory::validate() const {
  if (states.size() != inputs.size() + 1) {
    std::ostringstream os;
    os << "trajectory has " << states.size() << " states for " << inputs.size()
       << " inputs (expected inputs + 1)";
    throw UsageError(os.str());
  }
  if (!(dt > 0.0)) throw UsageError("trajectory dt must be positive");
}

bool KeyParams::is_finite() const {
  for (double d : p)
    if (!std::isfinite(d)) return false;
  return true;
}

double HydroCoefficients::sway_yaw_determinant() const {
  const double a = m - Y_vdot;
  const double b = m * x_G - Y_rdot;
  const double c = m * x_G - N_vdot;
  const double d = I_zz - N_rdot;
  return a * d - b * c;
}

void HydroCoefficients::validate() const {
  if (!(m - X_udot > 0.0)) throw ConfigError("effective surge mass m - X_udot must be positive");
  if (!(m - Y_vdot > 0.0)) throw ConfigError("effective sway mass m - Y_vdot must be positive");
  if (!(I_zz - N_rdot > 0.0)) throw ConfigError("effective yaw inertia I_zz - N_rdot must be positive");
  const double floor = 1e-9 * (m - Y_vdot) * (I_zz - N_rdot);
  if (!(std::abs(sway_yaw_determinant()) > floor))
    throw ConfigError("sway/yaw inertia matrix is singular");
}

void VesselConfig::validate() const {
  hydro.validate();
  if (!(length > 0.0)) throw ConfigError("length must be positive");
  if (!(rho > 0.0)) throw ConfigError("rho must be positive");
  if (!(rudder_area > 0.0)) throw ConfigError("rudder_area must be positive");
  if (!(delta_rate > 0.0)) throw ConfigError("delta_rate must be positive");
  if (!(n_rate > 0.0)) throw ConfigError("n_rate must be positive");
  if (!(delta_max > 0.0)) throw ConfigError("delta_max must be positive");
  if (!(n_max > 0.0)) throw ConfigError("n_max must be positive");
  if (!(inflow_angle_max > 0.0)) throw ConfigError("inflow_angle_max must be positive");
  if (!(time_step > 0.0)) throw ConfigError("time_step must be positive");
  if (!(prop.diameter > 0.0)) throw ConfigError("propeller diameter must be positive");
  if (!(prop.wake_fraction >= 0.0 && prop.wake_fraction < 1.0))
    throw ConfigError("wake fraction must lie in [0, 1)");
  if (!(prop.thrust_deduction >= 0.0 && prop.thrust_deduction < 1.0))
    throw ConfigError("thrust deduction must lie in [0, 1)");
}

}  // namespace greyhull
