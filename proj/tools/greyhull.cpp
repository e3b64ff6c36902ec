// greyhull command-line front end: simulate, generate, fit, evaluate, export-plots.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "greyhull/angles.hpp"
#include "greyhull/dataset.hpp"
#include "greyhull/dynamics.hpp"
#include "greyhull/errors.hpp"
#include "greyhull/evaluation.hpp"
#include "greyhull/identification.hpp"
#include "greyhull/presets.hpp"
#include "greyhull/report.hpp"
#include "greyhull/scenario.hpp"

namespace {

using namespace greyhull;

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string config;
  std::string dataset;
  std::string scenario;
  std::string params;
  std::string baseline = "baseline";
  std::string init = "initial-guess";
  std::string plots;
  std::string out;
  std::uint64_t seed = 1;
  bool verbose = false;
};

RunConfig run_config(const Options& o) {
  return o.config.empty() ? RunConfig{} : load_run_config(o.config);
}

/// The dataset header names the vessel; a config naming a different one is an error.
VesselPreset dataset_preset(const Options& o, const Dataset& d) {
  if (!o.config.empty()) {
    const RunConfig c = run_config(o);
    if (c.vessel != d.vessel && preset_by_name(c.vessel).name != d.vessel)
      throw UsageError("config vessel '" + c.vessel + "' does not match dataset vessel '" +
                       d.vessel + "'");
  }
  return preset_by_name(d.vessel);
}

void print_params(const char* label, const KeyParams& p) {
  std::printf("%s", label);
  for (double v : p.p) std::printf(" %s", format_number(v).c_str());
  std::printf("\n");
}

Split dataset_split(const Dataset& d, const RunConfig& c, std::uint64_t seed) {
  Split s = split_dataset(d.trajectories.size(), seed, c.test_fraction);
  if (s.test.empty()) throw UsageError("test split is empty; the dataset needs at least two trajectories");
  if (s.train.empty()) throw UsageError("train split is empty");
  return s;
}

int cmd_simulate(const Options& o) {
  const RunConfig c = run_config(o);
  const VesselPreset preset = preset_by_name(c.vessel);
  const ScenarioSpec spec = load_scenario(o.scenario);
  const KeyParams p = resolve_params(o.params.empty() ? "baseline" : o.params, preset);
  const std::vector<ScenarioSpec> one{spec};
  GenerationResult g = generate_dataset(preset, one, p, NoiseSpec{}, o.seed);
  g.dataset.provenance = "simulate scenario=" + std::filesystem::path(o.scenario).filename().string();
  save_dataset(o.out, g.dataset);
  write_trajectory_csv(o.out + ".csv", g.dataset.trajectories.front());
  const VesselState& last = g.dataset.trajectories.front().states.back();
  std::printf("final x y psi_deg u v r %s %s %s %s %s %s\n", format_number(last.x).c_str(),
              format_number(last.y).c_str(), format_number(rad_to_deg(last.psi)).c_str(),
              format_number(last.u).c_str(), format_number(last.v).c_str(),
              format_number(last.r).c_str());
  return kExitOk;
}

int cmd_generate(const Options& o) {
  const RunConfig c = run_config(o);
  const VesselPreset preset = preset_by_name(c.vessel);
  const KeyParams truth = resolve_params(o.params.empty() ? "truth" : o.params, preset);
  const auto specs =
      sample_scenarios(preset, c.scenarios, o.seed, c.maneuvering_fraction, c.knots, c.dt);
  // Noise draws come from a stream separate from the scenario sampler.
  const GenerationResult g = generate_dataset(preset, specs, truth, c.noise, o.seed ^ 0x9e3779b97f4a7c15ULL);
  save_dataset(o.out, g.dataset);
  for (const auto& w : g.envelope_warnings) std::fprintf(stderr, "warning: envelope: %s\n", w.c_str());
  std::printf("wrote %zu trajectories to %s\n", g.dataset.trajectories.size(), o.out.c_str());
  return kExitOk;
}

int cmd_fit(const Options& o) {
  const Dataset d = load_dataset(o.dataset);
  const VesselPreset preset = dataset_preset(o, d);
  const RunConfig c = run_config(o);
  const Split split = dataset_split(d, c, o.seed);

  FitProblem problem;
  problem.dataset = select(d.trajectories, split.train);
  problem.config = preset.config;
  problem.p_init = resolve_params(o.params.empty() ? o.init : o.params, preset);
  problem.constraints = ConstraintSet::standard(max_surge(problem.dataset));
  problem.options = c.solver;
  problem.max_yaw_rate = c.max_yaw_rate;

  std::function<void(const IterationLog&)> log;
  if (o.verbose)
    log = [](const IterationLog& l) {
      std::fprintf(stderr, "iter %d objective %s barrier %s damping %s step %s\n", l.iteration,
                   format_number(l.objective).c_str(), format_number(l.barrier).c_str(),
                   format_number(l.damping).c_str(), format_number(l.step_length).c_str());
    };
  const FitResult r = fit(problem, log);
  const ModelCurves curves = sample_curves(r.p_star, max_surge(problem.dataset));
  write_text_file(o.out, fit_result_json(r, curves, split.train, split.test));

  std::printf("termination %s iterations %d\n", to_string(r.reason), r.iterations);
  std::printf("objective initial %s final %s\n", format_number(r.initial_objective).c_str(),
              format_number(r.final_objective).c_str());
  print_params("p_star", r.p_star);
  if (!r.success()) {
    std::fprintf(stderr, "error: no feasible point found\n");
    for (const auto& v : r.violations)
      if (v.violation > 0.0)
        std::fprintf(stderr, "  %s at %s violation %s\n", to_string(v.kind),
                     format_number(v.at).c_str(), format_number(v.violation).c_str());
    return kExitNumerical;
  }
  if (r.reason == Termination::MaxIterations)
    std::fprintf(stderr, "warning: iteration limit reached; reporting the best feasible iterate\n");
  return kExitOk;
}

struct Evaluated {
  VesselPreset preset;
  Split split;
  std::vector<Trajectory> test;
  KeyParams baseline;
  KeyParams fitted;
  EvaluationReport report;
};

Evaluated run_evaluation(const Options& o) {
  if (o.params.empty()) throw UsageError("--params (fitted parameters) is required");
  const Dataset d = load_dataset(o.dataset);
  Evaluated e{dataset_preset(o, d), {}, {}, {}, {}, {}};
  const RunConfig c = run_config(o);
  e.split = dataset_split(d, c, o.seed);
  e.test = select(d.trajectories, e.split.test);
  e.baseline = resolve_params(o.baseline, e.preset);
  e.fitted = resolve_params(o.params, e.preset);
  e.report = evaluate_protocol(e.test, e.baseline, e.fitted, e.preset.config, c.max_yaw_rate);
  return e;
}

void write_plots(const std::filesystem::path& dir, const Evaluated& e) {
  const double u_max = std::max(max_surge(e.test), e.preset.envelope.u.max);
  write_plot_data(dir, sample_curves(e.baseline, u_max), sample_curves(e.fitted, u_max), e.report,
                  e.test, e.split.test);
}

std::string optional_text(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string("n/a");
}

int cmd_evaluate(const Options& o) {
  const Evaluated e = run_evaluation(o);
  write_text_file(o.out, evaluation_json(e.report, e.split.test));
  if (!o.plots.empty()) write_plots(o.plots, e);
  for (const auto& f : e.report.flags) std::fprintf(stderr, "warning: %s\n", f.c_str());
  std::printf("mARI %s\n", optional_text(e.report.mari).c_str());
  std::printf("cVDM improvement %s\n", optional_text(e.report.cvdm_improvement).c_str());
  std::printf("consistency %s\n", optional_text(e.report.consistency).c_str());
  return kExitOk;
}

int cmd_export_plots(const Options& o) {
  const Evaluated e = run_evaluation(o);
  write_plots(o.out, e);
  std::printf("wrote plot data for %zu test scenarios to %s\n", e.report.scenarios.size(),
              o.out.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"greyhull: grey-box ship dynamics identification toolkit"};
  app.require_subcommand(1);
  Options o;

  const auto add_config = [&](CLI::App* c) {
    c->add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  };
  const auto add_seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "Random seed"); };

  auto* sim = app.add_subcommand("simulate", "Simulate one scenario and write a trajectory file");
  add_config(sim);
  sim->add_option("--scenario", o.scenario, "JSON scenario description")->required()->check(CLI::ExistingFile);
  sim->add_option("--params", o.params, "baseline | truth | initial-guess | parameter file");
  add_seed(sim);
  sim->add_option("--out", o.out, "Output trajectory file (a .csv plot table is written alongside)")->required();

  auto* gen = app.add_subcommand("generate", "Generate a synthetic dataset");
  add_config(gen);
  gen->add_option("--params", o.params, "Truth parameters (default: truth)");
  add_seed(gen);
  gen->add_option("--out", o.out, "Output dataset file")->required();

  auto* fitc = app.add_subcommand("fit", "Fit the key parameters on the training split");
  add_config(fitc);
  fitc->add_option("--dataset", o.dataset, "Dataset file")->required()->check(CLI::ExistingFile);
  fitc->add_option("--init", o.init, "initial-guess | baseline | truth | parameter file");
  fitc->add_option("--params", o.params, "Initial parameter file (overrides --init)");
  add_seed(fitc);
  fitc->add_flag("--verbose", o.verbose, "Log solver iterations to stderr");
  fitc->add_option("--out", o.out, "Output fit result (JSON)")->required();

  auto* eval = app.add_subcommand("evaluate", "Compare baseline and fitted models on the test split");
  add_config(eval);
  eval->add_option("--dataset", o.dataset, "Dataset file")->required()->check(CLI::ExistingFile);
  eval->add_option("--baseline", o.baseline, "Baseline parameters (default: baseline)");
  eval->add_option("--params", o.params, "Fitted parameters (fit result or parameter file)")->required();
  add_seed(eval);
  eval->add_option("--plots", o.plots, "Also write plot data into this directory");
  eval->add_option("--out", o.out, "Output evaluation report (JSON)")->required();

  auto* plots = app.add_subcommand("export-plots", "Write curve and track overlay tables");
  add_config(plots);
  plots->add_option("--dataset", o.dataset, "Dataset file")->required()->check(CLI::ExistingFile);
  plots->add_option("--baseline", o.baseline, "Baseline parameters (default: baseline)");
  plots->add_option("--params", o.params, "Fitted parameters (fit result or parameter file)")->required();
  add_seed(plots);
  plots->add_option("--out", o.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(o);
    if (gen->parsed()) return cmd_generate(o);
    if (fitc->parsed()) return cmd_fit(o);
    if (eval->parsed()) return cmd_evaluate(o);
    if (plots->parsed()) return cmd_export_plots(o);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const SimulationFault& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const DegenerateScenarioError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitUsage;
}
