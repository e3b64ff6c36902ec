#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "greyhull/key_params.hpp"
#include "greyhull/presets.hpp"
#include "greyhull/scenario.hpp"
#include "greyhull/vessel_state.hpp"

namespace greyhull {

struct Dataset {
  std::string vessel;
  double dt = 1.0;
  std::size_t knots = 0;
  std::string provenance;
  std::optional<KeyParams> truth;
  std::vector<std::string> labels;  // one per trajectory
  std::vector<Trajectory> trajectories;

  void validate() const;
};

/// Plain-text dataset format. Angles are written in degrees, numbers with 17
/// significant digits; write -> read -> write is byte-identical.
void write_dataset(std::ostream& os, const Dataset& d);
Dataset read_dataset(std::istream& is);
void save_dataset(const std::string& path, const Dataset& d);
Dataset load_dataset(const std::string& path);

/// Formats a double with 17 significant digits.
std::string format_number(double v);

struct GenerationResult {
  Dataset dataset;
  std::vector<std::string> envelope_warnings;
};

/// Simulates every scenario under `truth`, then applies measurement noise.
/// Throws UsageError naming the scenario index if a command leaves the
/// actuator limits.
GenerationResult generate_dataset(const VesselPreset& preset,
                                  const std::vector<ScenarioSpec>& scenarios,
                                  const KeyParams& truth, const NoiseSpec& noise,
                                  std::uint64_t seed);

/// Channel ranges of a trajectory set checked against an envelope (min/max only).
std::vector<std::string> envelope_violations(const std::vector<Trajectory>& trajectories,
                                             const DatasetEnvelope& envelope);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Seeded shuffle; round(test_fraction * M) trajectories (at least one when
/// M >= 2) go to the test side.
Split split_dataset(std::size_t count, std::uint64_t seed, double test_fraction = 0.125);

std::vector<Trajectory> select(const std::vector<Trajectory>& all,
                               const std::vector<std::size_t>& indices);

/// Largest measured surge speed; ceiling for the constraint speed grid.
double max_surge(const std::vector<Trajectory>& trajectories);

}  // namespace greyhull
