// Acceptance suite: one executable, one criterion per invocation
// (`greyhull_acceptance N`, or no argument for all). Every check prints a
// single [PASS]/[FAIL] line; the exit code is non-zero if any check failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "greyhull/angles.hpp"
#include "greyhull/constraints.hpp"
#include "greyhull/dataset.hpp"
#include "greyhull/dynamics.hpp"
#include "greyhull/evaluation.hpp"
#include "greyhull/identification.hpp"
#include "greyhull/presets.hpp"
#include "greyhull/report.hpp"
#include "greyhull/scenario.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace greyhull;
using namespace greyhull::testing;

namespace {

constexpr std::uint64_t kSeed = 7;
constexpr std::size_t kTrain = 40;
constexpr std::size_t kTest = 6;
constexpr std::size_t kKnots = 120;

class Reporter {
 public:
  explicit Reporter(int criterion) : criterion_(criterion) {}

  void check(bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %d: %s -- %s\n", pass ? "PASS" : "FAIL", criterion_, what.c_str(),
                detail.c_str());
    std::fflush(stdout);
    failed_ = failed_ || !pass;
  }
  bool failed() const { return failed_; }

 private:
  int criterion_;
  bool failed_ = false;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? fmt("%.4f", *v) : "n/a"; }

struct Experiment {
  FitResult fit;
  EvaluationReport report;
  double seconds = 0.0;
};

// Generate 40 + 6 trajectories under the published fitted parameters, fit the
// training side from the engineering baseline, evaluate on the held-out side.
Experiment recovery(const VesselPreset& preset, const NoiseSpec& noise) {
  const auto specs = sample_scenarios(preset, kTrain + kTest, kSeed, 0.7, kKnots, 1.0);
  const Dataset d =
      generate_dataset(preset, specs, preset.reference_fitted, noise, kSeed).dataset;
  const Split split = split_dataset(d.trajectories.size(), kSeed,
                                    static_cast<double>(kTest) / static_cast<double>(kTrain + kTest));
  if (split.test.size() != kTest) throw std::runtime_error("unexpected split size");

  Experiment e;
  const FitProblem problem =
      make_problem(preset, select(d.trajectories, split.train), preset.baseline);
  const auto start = std::chrono::steady_clock::now();
  e.fit = fit(problem);
  e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  e.report = evaluate_protocol(select(d.trajectories, split.test), preset.baseline, e.fit.p_star,
                               preset.config);
  return e;
}

void criterion_1(Reporter& rep) {
  for (const VesselPreset& preset : {ship_a(), ship_b()}) {
    const Experiment e = recovery(preset, NoiseSpec{});
    const double ratio = e.fit.final_objective / e.fit.initial_objective;
    rep.check(ratio <= 1e-4, preset.name + " objective reduced to <= 1e-4 of initial",
              "initial " + fmt("%.6e", e.fit.initial_objective) + ", final " +
                  fmt("%.6e", e.fit.final_objective) + ", ratio " + fmt("%.3e", ratio) + ", " +
                  to_string(e.fit.reason));
    rep.check(e.report.cvdm_improvement && *e.report.cvdm_improvement >= 50.0,
              preset.name + " held-out median cVDM improvement >= 50%",
              opt(e.report.cvdm_improvement) + "% (mARI " + opt(e.report.mari) + "%)");
    rep.check(e.report.consistency && *e.report.consistency >= 50.0,
              preset.name + " consistency >= 50%", opt(e.report.consistency) + "%");
    rep.check(e.seconds <= 600.0, preset.name + " fit runtime <= 10 min",
              fmt("%.2f", e.seconds) + " s");
  }
}

void criterion_2(Reporter& rep) {
  NoiseSpec noise;
  noise.u = 0.05;
  noise.v = 0.05;
  noise.r = 0.001;
  noise.xy = 1.0;
  for (const VesselPreset& preset : {ship_a(), ship_b()}) {
    const Experiment e = recovery(preset, noise);
    for (std::size_t j = 1; j <= 3; ++j) {
      const double truth = preset.reference_fitted[j];
      const double rel = std::fabs(e.fit.p_star[j] - truth) / std::fabs(truth);
      rep.check(rel <= 0.15, preset.name + " p" + std::to_string(j) + " within 15% of truth",
                "fitted " + fmt("%.6g", e.fit.p_star[j]) + ", truth " + fmt("%.6g", truth) +
                    ", relative error " + fmt("%.4f", rel));
    }
    rep.check(e.report.cvdm_improvement && *e.report.cvdm_improvement >= 30.0,
              preset.name + " held-out median cVDM improvement >= 30%",
              opt(e.report.cvdm_improvement) + "%");
  }
}

void criterion_3(Reporter& rep) {
  for (const VesselPreset& preset : {ship_a(), ship_b()}) {
    const ConstraintSet cs = ConstraintSet::standard(preset.envelope.u.max);
    const auto values = evaluate_constraints(preset.reference_fitted, cs, preset.config);
    std::vector<std::string> kinds;
    double worst = 0.0;
    for (const auto& v : values) {
      if (v.violation <= 1e-9) continue;
      worst = std::max(worst, v.normalized());
      const std::string k = to_string(v.kind);
      if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
    }
    std::string detail = "grid ceiling " + fmt("%.2f", preset.envelope.u.max) + " m/s";
    if (kinds.empty()) {
      detail += ", no violations";
    } else {
      detail += ", worst normalized violation " + fmt("%.4g", worst) + " in";
      for (const auto& k : kinds) detail += " " + k;
    }
    rep.check(kinds.empty(), preset.name + " published fitted parameters feasible", detail);
  }
}

void criterion_4(Reporter& rep) {
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> vel(-8.0, 8.0);
  std::uniform_real_distribution<double> yaw(-0.05, 0.05);
  std::uniform_real_distribution<double> force(-1e6, 1e6);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const HydroCoefficients h = random_hydro(rng);
    VesselState s;
    s.u = vel(rng);
    s.v = 0.3 * vel(rng);
    s.r = yaw(rng);
    const ForceTriple f{force(rng), force(rng), 50.0 * force(rng)};
    const AccelTriple a = solve_accelerations(s, f, h);
    const auto o = dense_oracle(s, f, h);
    worst = std::max({worst, relative_error(a.u_dot, o[0]), relative_error(a.v_dot, o[1]),
                      relative_error(a.r_dot, o[2])});
  }
  rep.check(worst < 1e-10, "accelerations match a dense 3x3 solve on 1000 instances",
            "max relative error " + fmt("%.3e", worst));
}

void criterion_5(Reporter& rep) {
  const VesselPreset a = ship_a();
  const auto specs = sample_scenarios(a, kTrain + kTest, kSeed, 0.7, kKnots, 1.0);
  const Dataset d = generate_dataset(a, specs, a.reference_fitted, NoiseSpec{}, kSeed).dataset;
  const Split split = split_dataset(d.trajectories.size(), kSeed,
                                    static_cast<double>(kTest) / static_cast<double>(kTrain + kTest));
  const FitProblem problem = make_problem(a, select(d.trajectories, split.train), a.baseline);
  const double full = gradient_check(a.baseline, problem);
  rep.check(full < 1e-3, "simulation objective gradient at the baseline",
            "max relative discrepancy " + fmt("%.3e", full));

  const LinearModel model;
  KeyParams p;
  for (std::size_t j = 0; j < kNumKeyParams; ++j) p[j] = 0.3 * static_cast<double>(j) - 1.0;
  const double quad = gradient_check(model, p).max_relative_discrepancy;
  rep.check(quad < 1e-8, "quadratic objective gradient",
            "max relative discrepancy " + fmt("%.3e", quad));
}

void criterion_6(Reporter& rep) {
  std::mt19937_64 rng(123);
  double worst_md = 0.0, worst_cvdm = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto [m, p] = random_pair(rng, 30);
    const auto md = manhattan_distance(m, p);
    const auto o = md_oracle(m, p);
    for (std::size_t d = 0; d < 6; ++d) worst_md = std::max(worst_md, relative_error(md[d], o[d]));
    worst_cvdm = std::max(worst_cvdm, relative_error(cvdm(m, p), cvdm_oracle(m, p, 0.0314)));
  }
  rep.check(worst_md <= 1e-12 && worst_cvdm <= 1e-12, "MD and cVDM on 100 random pairs",
            "max relative error MD " + fmt("%.3e", worst_md) + ", cVDM " + fmt("%.3e", worst_cvdm));

  bool identity_zero = true;
  for (int i = 0; i < 100; ++i) {
    const auto pair = random_pair(rng, 30);
    for (double v : manhattan_distance(pair.first, pair.first)) identity_zero &= v == 0.0;
    identity_zero &= cvdm(pair.first, pair.first) == 0.0;
  }
  rep.check(identity_zero, "identical trajectories give exactly zero", "100 trajectories");

  const Trajectory m = straight_line(kKnots, 3.0);
  Trajectory q = m;
  for (std::size_t k = 1; k < q.states.size(); ++k) q.states[k].psi = kPi / 2.0;
  const double quarter = cvdm(m, q);
  rep.check(quarter == 50.0, "quarter-turn heading error gives cVDM 50", fmt("%.17g", quarter));
}

// Holds each 1 s command for 1/dt sub-steps.
std::vector<ControlInput> refine(const std::vector<ControlInput>& coarse, std::size_t factor) {
  std::vector<ControlInput> out;
  out.reserve(coarse.size() * factor);
  for (const auto& c : coarse)
    for (std::size_t i = 0; i < factor; ++i) out.push_back(c);
  return out;
}

void criterion_7(Reporter& rep) {
  const VesselPreset a = ship_a();
  ScenarioSpec spec;
  spec.family = ScenarioFamily::TurningCircle;
  spec.knots = kKnots;
  spec.rpm = 0.8 * a.max_rpm_command;
  spec.rudder = deg_to_rad(20.0);
  spec.initial.u = 3.0;
  spec.initial.n = spec.rpm;
  std::vector<ControlInput> inputs;
  ControlInput prev{spec.initial.n, spec.initial.delta};
  for (std::size_t k = 0; k < spec.knots; ++k) {
    prev = scenario_command(spec, spec.initial, k, prev);
    inputs.push_back(prev);
  }

  const auto run = [&](std::size_t factor) {
    const Trajectory t = simulate(spec.initial, refine(inputs, factor), a.reference_fitted,
                                  a.config, 1.0 / static_cast<double>(factor));
    Trajectory knots;
    for (std::size_t k = 0; k <= spec.knots; ++k) knots.states.push_back(t.states[k * factor]);
    return knots;
  };
  const Trajectory reference = run(1024);
  const auto error = [&](std::size_t factor) {
    const Trajectory t = run(factor);
    double e = 0.0;
    for (std::size_t k = 0; k <= spec.knots; ++k)
      e = std::max(e, std::hypot(t.states[k].x - reference.states[k].x,
                                 t.states[k].y - reference.states[k].y));
    return e;
  };
  const double e1 = error(1), e2 = error(2), e4 = error(4);
  const double r1 = e1 / e2, r2 = e2 / e4;
  const std::string detail = "max position error " + fmt("%.4g", e1) + " / " + fmt("%.4g", e2) +
                             " / " + fmt("%.4g", e4) + " m, ratios " + fmt("%.4f", r1) + ", " +
                             fmt("%.4f", r2);
  rep.check(r1 >= 1.5 && r1 <= 2.5 && r2 >= 1.5 && r2 <= 2.5,
            "first-order decay over dt = 1, 0.5, 0.25 s", detail);
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + GREYHULL_CLI + "\" " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

std::string p_star_text(const std::filesystem::path& fit_json) {
  const auto j = nlohmann::json::parse(read_text_file(fit_json));
  std::string s;
  for (const auto& v : j.at("p_star")) s += fmt("%.17g", v.get<double>()) + " ";
  return s;
}

void criterion_8(Reporter& rep) {
  const auto root = std::filesystem::temp_directory_path() /
                    ("greyhull_acceptance_" + std::to_string(::getpid()));
  std::vector<std::string> datasets, fits, evals, p_stars;
  bool ok = true;
  for (int run = 0; run < 2; ++run) {
    const auto dir = root / ("run" + std::to_string(run));
    std::filesystem::create_directories(dir);
    const std::string data = (dir / "data.txt").string();
    const std::string fitj = (dir / "fit.json").string();
    const std::string evalj = (dir / "eval.json").string();
    ok &= run_cli("generate --seed 7 --out \"" + data + "\"") == 0;
    ok &= run_cli("fit --dataset \"" + data + "\" --seed 7 --out \"" + fitj + "\"") == 0;
    ok &= run_cli("evaluate --dataset \"" + data + "\" --params \"" + fitj +
                  "\" --seed 7 --out \"" + evalj + "\"") == 0;
    if (!ok) break;
    datasets.push_back(read_text_file(data));
    fits.push_back(read_text_file(fitj));
    evals.push_back(read_text_file(evalj));
    p_stars.push_back(p_star_text(fitj));
  }
  std::filesystem::remove_all(root);
  rep.check(ok, "generate, fit and evaluate succeed twice", ok ? "exit codes 0" : "a command failed");
  if (!ok) return;
  rep.check(datasets[0] == datasets[1], "dataset files byte-identical",
            std::to_string(datasets[0].size()) + " bytes");
  rep.check(p_stars[0] == p_stars[1] && fits[0] == fits[1], "p_star identical to all printed digits",
            p_stars[0]);
  rep.check(evals[0] == evals[1], "evaluation reports byte-identical",
            std::to_string(evals[0].size()) + " bytes");
}

const std::vector<std::function<void(Reporter&)>> kCriteria = {
    criterion_1, criterion_2, criterion_3, criterion_4,
    criterion_5, criterion_6, criterion_7, criterion_8,
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  if (argc > 1) {
    const int n = std::atoi(argv[1]);
    if (n < 1 || n > static_cast<int>(kCriteria.size())) {
      std::fprintf(stderr, "usage: %s [1-%zu]\n", argv[0], kCriteria.size());
      return 2;
    }
    which.push_back(n);
  } else {
    for (int n = 1; n <= static_cast<int>(kCriteria.size()); ++n) which.push_back(n);
  }
  bool failed = false;
  for (int n : which) {
    Reporter rep(n);
    try {
      kCriteria[static_cast<std::size_t>(n - 1)](rep);
    } catch (const std::exception& e) {
      rep.check(false, "run", std::string("exception: ") + e.what());
    }
    failed = failed || rep.failed();
  }
  return failed ? 1 : 0;
}
