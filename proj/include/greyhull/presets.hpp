#pragma once

#include <string>
#include <string_view>

#include "greyhull/key_params.hpp"
#include "greyhull/vessel_config.hpp"

namespace greyhull {

struct ChannelEnvelope {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;

  bool consistent() const { return min <= mean && mean <= max; }
  bool contains(double v) const { return v >= min && v <= max; }
};

/// Operating range a dataset for this vessel is expected to cover.
struct DatasetEnvelope {
  ChannelEnvelope u;          // m/s
  ChannelEnvelope v;          // m/s
  ChannelEnvelope r;          // rad/s
  ChannelEnvelope n;          // rpm
  ChannelEnvelope delta_deg;  // deg

  bool consistent() const;
};

/// Nondimensional hull coefficients; forces on (rho/2) L d, moments on (rho/2) L^2 d,
/// masses on (rho/2) L^2 d, inertias on (rho/2) L^4 d, velocities on U and U/L.
struct NondimensionalHull {
  double block_coefficient = 0.6;
  double beam = 1.0;   // m
  double draft = 1.0;  // m
  double x_G = 0.0;    // fraction of L
  double gyration = 0.25;  // radius of gyration / L
  double X_udot = 0.0, Y_vdot = 0.0, Y_rdot = 0.0, N_vdot = 0.0, N_rdot = 0.0, X_vr = 0.0;
  double Y_v = 0.0, Y_r = 0.0, N_v = 0.0, N_r = 0.0;
  double Y_vv = 0.0, Y_vr = 0.0, Y_rr = 0.0, N_rr = 0.0, N_rrv = 0.0, N_vvr = 0.0;
};

HydroCoefficients dimensionalize(const NondimensionalHull& h, double length, double rho);

struct VesselPreset {
  std::string name;
  VesselConfig config;
  KeyParams baseline;          // engineering-practice parameters
  KeyParams reference_fitted;  // published fitted parameters, used as synthetic truth
  KeyParams initial_guess;     // published initial guess for fitting
  DatasetEnvelope envelope;
  double max_rpm_command = 0.0;  // scenario sampler ceiling
};

VesselPreset ship_a();
VesselPreset ship_b();
/// "shipA" / "shipB"; throws UsageError otherwise.
VesselPreset preset_by_name(std::string_view name);

}  // namespace greyhull
