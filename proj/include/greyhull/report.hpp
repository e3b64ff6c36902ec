#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "greyhull/dataset.hpp"
#include "greyhull/evaluation.hpp"
#include "greyhull/identification.hpp"
#include "greyhull/presets.hpp"
#include "greyhull/scenario.hpp"

namespace greyhull {

/// Run configuration shared by the CLI commands. Every field has a default,
/// so an empty JSON object is a valid configuration.
struct RunConfig {
  std::string vessel = "shipA";
  std::size_t scenarios = 46;
  std::size_t knots = 120;
  double dt = 1.0;
  double maneuvering_fraction = 0.7;
  double test_fraction = 0.125;
  NoiseSpec noise;
  double max_yaw_rate = kDefaultMaxYawRate;
  SolverOptions solver;

  void validate() const;
};

/// Parses a JSON run configuration; unknown keys are usage errors.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

/// Scenario description for `simulate`, angles in degrees on disk.
ScenarioSpec parse_scenario(const std::string& json_text);
ScenarioSpec load_scenario(const std::string& path);

/// Parameter files: either {"p": [11 numbers]} or a fit result carrying "p_star".
KeyParams parse_params(const std::string& json_text);
KeyParams load_params(const std::string& path);
void save_params(const std::string& path, const KeyParams& p);

/// "baseline", "truth" (reference fitted), "initial-guess", or a parameter file path.
KeyParams resolve_params(const std::string& selector, const VesselPreset& preset);

/// Sampled model curves for plotting fitted against baseline.
struct ModelCurves {
  std::vector<double> speed;       // m/s
  std::vector<double> resistance;  // N
  std::vector<double> inflow_deg;  // deg
  std::vector<double> lift;
  std::vector<double> drag;
};
ModelCurves sample_curves(const KeyParams& p, double u_max, std::size_t points = 101,
                          double inflow_max_deg = 35.0);

std::string fit_result_json(const FitResult& r, const ModelCurves& curves,
                            const std::vector<std::size_t>& train,
                            const std::vector<std::size_t>& test);
std::string evaluation_json(const EvaluationReport& report,
                            const std::vector<std::size_t>& test_indices);

/// Writes the plot-data tables into `dir` (created if missing):
///   curves.csv, md_percent.csv, scenario_<i>.csv (measured / baseline / fitted tracks).
void write_plot_data(const std::filesystem::path& dir, const ModelCurves& baseline,
                     const ModelCurves& fitted, const EvaluationReport& report,
                     const std::vector<Trajectory>& measured,
                     const std::vector<std::size_t>& test_indices);

/// Knot-indexed table of one trajectory (x/y track and time series).
void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& t);

/// Writes the whole file or throws UsageError.
void write_text_file(const std::filesystem::path& file, const std::string& text);
std::string read_text_file(const std::filesystem::path& file);

}  // namespace greyhull
