#pragma once

#include "greyhull/key_params.hpp"
#include "greyhull/vessel_config.hpp"
#include "greyhull/vessel_state.hpp"

namespace greyhull {

/// Surge force X (N), sway force Y (N), yaw moment N (N m).
struct ForceTriple {
  double X = 0.0;
  double Y = 0.0;
  double N = 0.0;

  ForceTriple& operator+=(const ForceTriple& o) {
    X += o.X;
    Y += o.Y;
    N += o.N;
    return *this;
  }
  friend ForceTriple operator+(ForceTriple a, const ForceTriple& b) { return a += b; }
  friend bool operator==(const ForceTriple&, const ForceTriple&) = default;
  bool is_finite() const;
};

/// Wind / wave / current descriptors. Only consumed through an EnvironmentModel;
/// the default model ignores them and contributes no force.
struct EnvInput {
  double wind_speed = 0.0;
  double wind_direction = 0.0;
  double current_speed = 0.0;
  double current_direction = 0.0;
  double wave_height = 0.0;
  double wave_direction = 0.0;
};

/// Extension point for environmental loads (X_e, Y_e, N_e).
class EnvironmentModel {
 public:
  virtual ~EnvironmentModel() = default;
  virtual ForceTriple forces(const VesselState& state, const EnvInput& env,
                             const VesselConfig& config) const = 0;
};

/// Calm water: always zero.
class CalmWater final : public EnvironmentModel {
 public:
  ForceTriple forces(const VesselState&, const EnvInput&, const VesselConfig&) const override {
    return {};
  }
};

inline constexpr double kSpeedEpsilon = 1e-3;       // m/s
inline constexpr double kRevolutionEpsilon = 1e-3;  // rev/s

struct RudderCoefficients {
  double lift = 0.0;
  double drag = 0.0;
};

/// R(u) = p1 u + p2 u^2 + p3 u^3 for u >= 0, extended as an odd function for u < 0.
double resistance(double u, const KeyParams& p);
/// dR/du for u >= 0.
double resistance_slope(double u, const KeyParams& p);

/// Open-water thrust X_n, lateral thrust Y_n = p0 X_n, moment N_n = x_P Y_n.
ForceTriple propeller_forces(const VesselState& s, const KeyParams& p, const VesselConfig& c);
/// Thrust only (independent of p).
double propeller_thrust(double u, double n_rpm, const VesselConfig& c);

/// c_L(a) and c_D(a) evaluated exactly as the fitted polynomials.
RudderCoefficients rudder_coefficients(double inflow_angle, const KeyParams& p);

/// Rudder inflow geometry at the current state.
struct RudderInflow {
  double drift = 0.0;         // beta_R, rad
  double angle = 0.0;         // a_r = delta - beta_R, unclamped
  double speed_squared = 0.0; // U_R^2
};
RudderInflow rudder_inflow(const VesselState& s, const VesselConfig& c);

ForceTriple rudder_forces(const VesselState& s, const KeyParams& p, const VesselConfig& c);

/// Retarding surge force from hull resistance: -sign(u) |R(u)|.
double resistance_force(double u, const KeyParams& p);

/// Sum of propeller, rudder, environmental and resistance contributions.
/// `environment` may be null, meaning calm water.
ForceTriple aggregate(const VesselState& s, const EnvInput& env, const KeyParams& p,
                      const VesselConfig& c, const EnvironmentModel* environment = nullptr);

}  // namespace greyhull
