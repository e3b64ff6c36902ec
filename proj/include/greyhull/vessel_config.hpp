#pragma once

namespace greyhull {

/// Maneuvering coefficients of the 3-DoF hull model. Dimensional, SI units
/// matching the velocity products each term multiplies.
struct HydroCoefficients {
  double m = 0.0;      // kg
  double I_zz = 0.0;   // kg m^2
  double x_G = 0.0;    // m
  double X_udot = 0.0;
  double Y_vdot = 0.0;
  double Y_rdot = 0.0;
  double N_vdot = 0.0;
  double N_rdot = 0.0;
  double X_vr = 0.0;
  double Y_v = 0.0;
  double Y_r = 0.0;
  double N_v = 0.0;
  double N_r = 0.0;
  double Y_vv = 0.0;
  double Y_vr = 0.0;
  double Y_rr = 0.0;
  double N_rr = 0.0;
  double N_rrv = 0.0;
  double N_vvr = 0.0;

  /// Determinant of the coupled sway/yaw inertia matrix.
  double sway_yaw_determinant() const;
  /// Throws ConfigError if an effective inertia is non-positive or the
  /// sway/yaw inertia matrix is numerically singular.
  void validate() const;
};

/// Open-water propeller: K_T(J) = kt0 + kt1 J + kt2 J^2.
struct PropellerModel {
  double diameter = 1.0;          // m
  double wake_fraction = 0.0;     // w, [0, 1)
  double thrust_deduction = 0.0;  // t, [0, 1)
  double kt0 = 0.0;
  double kt1 = 0.0;
  double kt2 = 0.0;
};

struct VesselConfig {
  HydroCoefficients hydro;
  double length = 1.0;          // m
  double rho = 1025.0;          // kg/m^3
  double rudder_area = 1.0;     // m^2
  double x_rudder = 0.0;        // m, negative aft
  double x_propeller = 0.0;     // m, negative aft
  PropellerModel prop;
  double delta_max = 0.0;       // rad
  double delta_rate = 0.0;      // rad/s
  double n_max = 0.0;           // rpm
  double n_rate = 0.0;          // rpm/s
  double inflow_angle_max = 0.6108652381980153;  // 35 deg, rudder coefficient clamp
  double time_step = 1.0;       // s, default integration step

  void validate() const;
};

}  // namespace greyhull
