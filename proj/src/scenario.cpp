#include "greyhull/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "greyhull/angles.hpp"
#include "greyhull/errors.hpp"

namespace greyhull {

const char* to_string(ScenarioFamily f) {
  switch (f) {
    case ScenarioFamily::TurningCircle: return "turning_circle";
    case ScenarioFamily::Zigzag: return "zigzag";
    case ScenarioFamily::SpeedRun: return "speed_run";
    case ScenarioFamily::PortApproach: return "port_approach";
  }
  return "unknown";
}

ScenarioFamily scenario_family_from_string(std::string_view s) {
  if (s == "turning_circle") return ScenarioFamily::TurningCircle;
  if (s == "zigzag") return ScenarioFamily::Zigzag;
  if (s == "speed_run") return ScenarioFamily::SpeedRun;
  if (s == "port_approach") return ScenarioFamily::PortApproach;
  throw UsageError("unknown scenario family '" + std::string(s) + "'");
}

ControlInput scenario_command(const ScenarioSpec& spec, const VesselState& current,
                              std::size_t k, const ControlInput& previous) {
  ControlInput c;
  const bool started = k >= spec.onset;
  switch (spec.family) {
    case ScenarioFamily::TurningCircle:
      c.c_n = spec.rpm;
      c.c_delta = started ? spec.rudder : 0.0;
      break;
    case ScenarioFamily::Zigzag: {
      c.c_n = spec.rpm;
      if (!started) {
        c.c_delta = 0.0;
        break;
      }
      if (previous.c_delta == 0.0) {
        c.c_delta = spec.rudder;
        break;
      }
      // Positive rudder yaws the bow to negative heading (rudder aft of midship).
      const double change = wrap_angle(current.psi - spec.initial.psi);
      c.c_delta = previous.c_delta;
      if (previous.c_delta > 0.0 && change <= -spec.heading_trigger) c.c_delta = -std::abs(spec.rudder);
      if (previous.c_delta < 0.0 && change >= spec.heading_trigger) c.c_delta = std::abs(spec.rudder);
      break;
    }
    case ScenarioFamily::SpeedRun:
      c.c_n = started ? spec.rpm_final : spec.rpm;
      c.c_delta = spec.rudder;
      break;
    case ScenarioFamily::PortApproach: {
      const double frac = spec.knots > 1 ? static_cast<double>(k) / static_cast<double>(spec.knots - 1) : 1.0;
      c.c_n = spec.rpm + (spec.rpm_final - spec.rpm) * frac;
      const std::size_t quarter = std::max<std::size_t>(spec.knots / 4, 1);
      switch (std::min<std::size_t>(k / quarter, 3)) {
        case 1: c.c_delta = spec.rudder; break;
        case 3: c.c_delta = -0.5 * spec.rudder; break;
        default: c.c_delta = 0.0; break;
      }
      break;
    }
  }
  return c;
}

std::vector<ScenarioSpec> sample_scenarios(const VesselPreset& preset, std::size_t count,
                                           std::uint64_t seed, double maneuvering_fraction,
                                           std::size_t knots, double dt) {
  if (!(maneuvering_fraction >= 0.0 && maneuvering_fraction <= 1.0))
    throw UsageError("maneuvering fraction must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  const auto sign = [&] { return unit(rng) < 0.5 ? -1.0 : 1.0; };

  const double rpm_max = preset.max_rpm_command;
  // Stay one degree inside both the actuator limit and the dataset envelope.
  const double rudder_cap =
      std::min({rad_to_deg(preset.config.delta_max), -preset.envelope.delta_deg.min,
                preset.envelope.delta_deg.max}) -
      1.0;

  std::vector<ScenarioSpec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    ScenarioSpec s;
    s.knots = knots;
    s.dt = dt;
    const bool maneuvering = unit(rng) < maneuvering_fraction;
    if (maneuvering) {
      const double pick = unit(rng);
      s.family = pick < 1.0 / 3.0   ? ScenarioFamily::TurningCircle
                 : pick < 2.0 / 3.0 ? ScenarioFamily::Zigzag
                                    : ScenarioFamily::PortApproach;
    } else {
      s.family = ScenarioFamily::SpeedRun;
    }
    s.onset = static_cast<std::size_t>(uniform(3.0, 11.0));
    s.initial.psi = wrap_angle(uniform(-kPi, kPi));
    s.initial.u = uniform(1.5, 4.5);

    switch (s.family) {
      case ScenarioFamily::TurningCircle:
        s.rpm = uniform(0.4, 1.0) * rpm_max;
        s.rudder = sign() * deg_to_rad(uniform(10.0, std::min(35.0, rudder_cap)));
        break;
      case ScenarioFamily::Zigzag:
        s.rpm = uniform(0.4, 1.0) * rpm_max;
        s.rudder = sign() * deg_to_rad(uniform(10.0, 20.0));
        s.heading_trigger = std::abs(s.rudder);
        break;
      case ScenarioFamily::SpeedRun:
        s.rpm = uniform(0.3, 1.0) * rpm_max;
        s.rpm_final = uniform(0.2, 1.0) * rpm_max;
        s.rudder = deg_to_rad(uniform(-2.0, 2.0));
        break;
      case ScenarioFamily::PortApproach:
        s.rpm = uniform(0.6, 1.0) * rpm_max;
        s.rpm_final = uniform(0.2, 0.45) * rpm_max;
        s.rudder = sign() * deg_to_rad(uniform(10.0, 25.0));
        break;
    }
    s.initial.n = s.rpm;
    out.push_back(s);
  }
  return out;
}

}  // namespace greyhull
