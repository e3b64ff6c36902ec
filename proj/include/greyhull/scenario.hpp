#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "greyhull/presets.hpp"
#include "greyhull/vessel_state.hpp"

namespace greyhull {

enum class ScenarioFamily { TurningCircle, Zigzag, SpeedRun, PortApproach };

const char* to_string(ScenarioFamily f);
ScenarioFamily scenario_family_from_string(std::string_view s);

/// Command schedule of one maneuver.
///   TurningCircle  constant rpm, rudder stepped to `rudder` at `onset`
///   Zigzag         rudder flips sign whenever the heading change reaches `heading_trigger`
///   SpeedRun       rpm stepped from `rpm` to `rpm_final` at `onset`, rudder at `rudder`
///   PortApproach   rpm ramps to `rpm_final`; rudder cycles 0, +rudder, 0, -rudder/2 in quarters
struct ScenarioSpec {
  ScenarioFamily family = ScenarioFamily::TurningCircle;
  VesselState initial;
  std::size_t knots = 120;
  double dt = 1.0;
  double rpm = 0.0;
  double rpm_final = 0.0;
  double rudder = 0.0;           // rad
  double heading_trigger = 0.0;  // rad
  std::size_t onset = 5;
};

/// Command for knot k given the current state and the previous command.
ControlInput scenario_command(const ScenarioSpec& spec, const VesselState& current,
                              std::size_t k, const ControlInput& previous);

/// Additive Gaussian measurement noise (standard deviations) on state channels.
struct NoiseSpec {
  double xy = 0.0;   // m
  double psi = 0.0;  // rad
  double u = 0.0;    // m/s
  double v = 0.0;    // m/s
  double r = 0.0;    // rad/s

  bool enabled() const { return xy > 0.0 || psi > 0.0 || u > 0.0 || v > 0.0 || r > 0.0; }
};

/// Random scenario mix: `maneuvering_fraction` of turning / zigzag / approach
/// runs, the rest straight speed runs.
std::vector<ScenarioSpec> sample_scenarios(const VesselPreset& preset, std::size_t count,
                                           std::uint64_t seed, double maneuvering_fraction = 0.7,
                                           std::size_t knots = 120, double dt = 1.0);

}  // namespace greyhull
