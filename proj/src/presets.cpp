#include "greyhull/presets.hpp"

#include "greyhull/angles.hpp"
#include "greyhull/errors.hpp"

namespace greyhull {

bool DatasetEnvelope::consistent() const {
  return u.consistent() && v.consistent() && r.consistent() && n.consistent() &&
         delta_deg.consistent();
}

HydroCoefficients dimensionalize(const NondimensionalHull& h, double L, double rho) {
  const double d = h.draft;
  const double q1 = 0.5 * rho * L * d;
  const double q2 = q1 * L;
  const double q3 = q2 * L;
  const double q4 = q3 * L;

  HydroCoefficients c;
  c.m = rho * h.block_coefficient * L * h.beam * h.draft;
  c.I_zz = c.m * (h.gyration * L) * (h.gyration * L);
  c.x_G = h.x_G * L;
  c.X_udot = q2 * h.X_udot;
  c.Y_vdot = q2 * h.Y_vdot;
  c.Y_rdot = q3 * h.Y_rdot;
  c.N_vdot = q3 * h.N_vdot;
  c.N_rdot = q4 * h.N_rdot;
  c.X_vr = q2 * h.X_vr;
  c.Y_v = q1 * h.Y_v;
  c.Y_r = q2 * h.Y_r;
  c.N_v = q2 * h.N_v;
  c.N_r = q3 * h.N_r;
  c.Y_vv = q1 * h.Y_vv;
  c.Y_vr = q2 * h.Y_vr;
  c.Y_rr = q3 * h.Y_rr;
  c.N_rr = q4 * h.N_rr;
  c.N_rrv = q4 * h.N_rrv;
  c.N_vvr = q3 * h.N_vvr;
  return c;
}

namespace {

// Container-ship-like hull derivatives shared by both presets.
NondimensionalHull container_hull(double cb, double beam, double draft) {
  NondimensionalHull h;
  h.block_coefficient = cb;
  h.beam = beam;
  h.draft = draft;
  h.x_G = -0.01;
  h.gyration = 0.25;
  h.X_udot = -0.01;
  h.Y_vdot = -0.18;
  h.Y_rdot = -0.01;
  h.N_vdot = -0.005;
  h.N_rdot = -0.01;
  h.X_vr = -0.05;
  h.Y_v = -0.30;
  h.Y_r = 0.06;
  h.N_v = -0.10;
  h.N_r = -0.05;
  h.Y_vv = -1.2;
  h.Y_vr = -0.4;
  h.Y_rr = 0.02;
  h.N_rr = -0.02;
  h.N_rrv = -0.05;
  h.N_vvr = -0.10;
  return h;
}

KeyParams params(std::array<double, kNumKeyParams> p) { return KeyParams{p}; }

}  // namespace

VesselPreset ship_a() {
  VesselPreset s;
  s.name = "shipA";
  VesselConfig& c = s.config;
  c.length = 85.0;
  c.rho = 1025.0;
  c.hydro = dimensionalize(container_hull(0.6, 13.6, 5.0), c.length, c.rho);
  c.rudder_area = 8.0;
  c.x_rudder = -42.5;
  c.x_propeller = -40.0;
  c.prop = {2.2, 0.3, 0.2, 0.42, -0.32, -0.08};
  c.delta_max = deg_to_rad(35.0);
  c.delta_rate = deg_to_rad(2.32);
  c.n_max = 250.0;
  c.n_rate = 5.0;
  c.time_step = 1.0;

  s.baseline = params({0.000, 10500, -1900, 346, -0.012, 0.864, 0.182, -1.191, 0.005, -0.1230, 0.779});
  s.reference_fitted =
      params({-0.017, 34187, -12568, 1594, -0.039, 3.193, 0.205, -4.882, 0.048, 0.0746, 1.370});
  // Published guess lists the resistance coefficients first: [p1, p2, p3, p0, p4, ..., p10].
  s.initial_guess =
      params({0.00, 34187.03, -12569.98, 1586.29, -0.02, 2.70, 0.42, -3.23, 0.06, -0.11, 1.97});
  s.envelope = {{-4.47, 8.23, 3.27}, {-2.05, 1.76, -0.02}, {-0.03, 0.03, 0.0},
                {-249.1, 249.4, 95.0}, {-32.5, 33.5, 1.2}};
  s.max_rpm_command = 210.0;
  return s;
}

VesselPreset ship_b() {
  VesselPreset s;
  s.name = "shipB";
  VesselConfig& c = s.config;
  c.length = 130.0;
  c.rho = 1025.0;
  c.hydro = dimensionalize(container_hull(0.62, 21.0, 7.5), c.length, c.rho);
  c.rudder_area = 16.0;
  c.x_rudder = -65.0;
  c.x_propeller = -62.0;
  c.prop = {2.4, 0.3, 0.2, 0.42, -0.32, -0.08};
  c.delta_max = deg_to_rad(40.0);
  c.delta_rate = deg_to_rad(2.32);
  c.n_max = 170.0;
  c.n_rate = 3.0;
  c.time_step = 1.0;

  s.baseline = params({0.000, 5669, -1127, 538, -0.012, 0.864, 0.182, -1.191, 0.005, -0.1230, 0.779});
  s.reference_fitted =
      params({-0.027, 5505, -4215, 1077, 0.012, 2.420, -0.019, -3.195, 0.047, 0.0001, 1.359});
  s.initial_guess =
      params({-0.05, 5504.65, -4218.06, 1063.42, -0.01, 2.73, 0.35, -3.10, 0.06, -0.11, 1.97});
  s.envelope = {{-0.47, 6.17, 3.83}, {-1.04, 1.03, 0.04}, {-0.02, 0.02, 0.0},
                {-158.8, 169.7, 93.3}, {-40.0, 40.0, -1.0}};
  s.max_rpm_command = 165.0;
  return s;
}

VesselPreset preset_by_name(std::string_view name) {
  if (name == "shipA" || name == "A") return ship_a();
  if (name == "shipB" || name == "B") return ship_b();
  throw UsageError("unknown vessel preset '" + std::string(name) + "' (expected shipA or shipB)");
}

}  // namespace greyhull
