#include "greyhull/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "greyhull/angles.hpp"
#include "greyhull/errors.hpp"
#include "greyhull/forces.hpp"

namespace greyhull {

using nlohmann::json;

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset -> line number for the diagnostic
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + static_cast<std::size_t>(
                              std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    throw ParseError(std::string("invalid JSON: ") + e.what(), line);
  }
}

double number(const json& j, const char* key) {
  if (!j.is_number()) throw UsageError(std::string("'") + key + "' must be a number");
  return j.get<double>();
}

std::size_t count(const json& j, const char* key) {
  if (!j.is_number_unsigned()) throw UsageError(std::string("'") + key + "' must be a non-negative integer");
  return j.get<std::size_t>();
}

json params_array(const KeyParams& p) {
  json a = json::array();
  for (double v : p.p) a.push_back(v);
  return a;
}

KeyParams params_from_array(const json& a) {
  if (!a.is_array() || a.size() != kNumKeyParams)
    throw UsageError("parameter vector must be an array of 11 numbers");
  KeyParams p;
  for (std::size_t j = 0; j < kNumKeyParams; ++j) p[j] = number(a[j], "p");
  if (!p.is_finite()) throw UsageError("parameter vector is not finite");
  return p;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string csv_number(double v) { return format_number(v); }

}  // namespace

void RunConfig::validate() const {
  preset_by_name(vessel);
  if (scenarios < 2) throw UsageError("scenarios must be at least 2");
  if (knots < 1) throw UsageError("knots must be positive");
  if (!(dt > 0.0)) throw UsageError("dt must be positive");
  if (!(maneuvering_fraction >= 0.0 && maneuvering_fraction <= 1.0))
    throw UsageError("maneuvering_fraction must lie in [0, 1]");
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw UsageError("test_fraction must lie in (0, 1)");
  if (noise.xy < 0 || noise.psi < 0 || noise.u < 0 || noise.v < 0 || noise.r < 0)
    throw UsageError("noise standard deviations must be non-negative");
  if (!(max_yaw_rate > 0.0)) throw UsageError("max_yaw_rate must be positive");
  solver.validate();
}

RunConfig parse_run_config(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw UsageError("configuration must be a JSON object");
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "vessel") {
      if (!value.is_string()) throw UsageError("'vessel' must be a string");
      c.vessel = value.get<std::string>();
    } else if (key == "scenarios") {
      c.scenarios = count(value, "scenarios");
    } else if (key == "knots") {
      c.knots = count(value, "knots");
    } else if (key == "dt") {
      c.dt = number(value, "dt");
    } else if (key == "maneuvering_fraction") {
      c.maneuvering_fraction = number(value, "maneuvering_fraction");
    } else if (key == "test_fraction") {
      c.test_fraction = number(value, "test_fraction");
    } else if (key == "max_yaw_rate") {
      c.max_yaw_rate = number(value, "max_yaw_rate");
    } else if (key == "noise") {
      if (!value.is_object()) throw UsageError("'noise' must be an object");
      for (const auto& [nk, nv] : value.items()) {
        if (nk == "xy") c.noise.xy = number(nv, "noise.xy");
        else if (nk == "psi_deg") c.noise.psi = deg_to_rad(number(nv, "noise.psi_deg"));
        else if (nk == "u") c.noise.u = number(nv, "noise.u");
        else if (nk == "v") c.noise.v = number(nv, "noise.v");
        else if (nk == "r") c.noise.r = number(nv, "noise.r");
        else throw UsageError("unknown noise key '" + nk + "'");
      }
    } else if (key == "solver") {
      if (!value.is_object()) throw UsageError("'solver' must be an object");
      SolverOptions& s = c.solver;
      for (const auto& [sk, sv] : value.items()) {
        if (sk == "max_iterations") s.max_iterations = static_cast<int>(count(sv, "solver.max_iterations"));
        else if (sk == "feasibility_tolerance") s.feasibility_tolerance = number(sv, "solver.feasibility_tolerance");
        else if (sk == "relative_tolerance") s.relative_tolerance = number(sv, "solver.relative_tolerance");
        else if (sk == "stall_window") s.stall_window = static_cast<int>(count(sv, "solver.stall_window"));
        else if (sk == "fd_relative_step") s.fd_relative_step = number(sv, "solver.fd_relative_step");
        else if (sk == "barrier_initial") s.barrier_initial = number(sv, "solver.barrier_initial");
        else if (sk == "barrier_reduction") s.barrier_reduction = number(sv, "solver.barrier_reduction");
        else if (sk == "barrier_final") s.barrier_final = number(sv, "solver.barrier_final");
        else if (sk == "serial") {
          if (!sv.is_boolean()) throw UsageError("'solver.serial' must be a boolean");
          s.execution = sv.get<bool>() ? Execution::Serial : Execution::Parallel;
        } else {
          throw UsageError("unknown solver option '" + sk + "'");
        }
      }
    } else {
      throw UsageError("unknown configuration key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(read_text_file(path)); }

ScenarioSpec parse_scenario(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw UsageError("scenario must be a JSON object");
  ScenarioSpec s;
  for (const auto& [key, value] : j.items()) {
    if (key == "family") {
      if (!value.is_string()) throw UsageError("'family' must be a string");
      s.family = scenario_family_from_string(value.get<std::string>());
    } else if (key == "knots") {
      s.knots = count(value, "knots");
    } else if (key == "dt") {
      s.dt = number(value, "dt");
    } else if (key == "rpm") {
      s.rpm = number(value, "rpm");
    } else if (key == "rpm_final") {
      s.rpm_final = number(value, "rpm_final");
    } else if (key == "rudder_deg") {
      s.rudder = deg_to_rad(number(value, "rudder_deg"));
    } else if (key == "heading_trigger_deg") {
      s.heading_trigger = deg_to_rad(number(value, "heading_trigger_deg"));
    } else if (key == "onset") {
      s.onset = count(value, "onset");
    } else if (key == "initial") {
      if (!value.is_object()) throw UsageError("'initial' must be an object");
      for (const auto& [ik, iv] : value.items()) {
        if (ik == "x") s.initial.x = number(iv, "initial.x");
        else if (ik == "y") s.initial.y = number(iv, "initial.y");
        else if (ik == "psi_deg") s.initial.psi = wrap_angle(deg_to_rad(number(iv, "initial.psi_deg")));
        else if (ik == "u") s.initial.u = number(iv, "initial.u");
        else if (ik == "v") s.initial.v = number(iv, "initial.v");
        else if (ik == "r") s.initial.r = number(iv, "initial.r");
        else if (ik == "n") s.initial.n = number(iv, "initial.n");
        else if (ik == "delta_deg") s.initial.delta = deg_to_rad(number(iv, "initial.delta_deg"));
        else throw UsageError("unknown initial-state key '" + ik + "'");
      }
    } else {
      throw UsageError("unknown scenario key '" + key + "'");
    }
  }
  if (s.knots < 1) throw UsageError("scenario knots must be positive");
  if (!(s.dt > 0.0)) throw UsageError("scenario dt must be positive");
  if (s.family == ScenarioFamily::Zigzag && !(s.heading_trigger > 0.0))
    s.heading_trigger = std::abs(s.rudder);
  return s;
}

ScenarioSpec load_scenario(const std::string& path) { return parse_scenario(read_text_file(path)); }

KeyParams parse_params(const std::string& text) {
  const json j = parse_json(text);
  if (j.is_array()) return params_from_array(j);
  if (j.is_object()) {
    if (j.contains("p")) return params_from_array(j.at("p"));
    if (j.contains("p_star")) return params_from_array(j.at("p_star"));
  }
  throw UsageError("parameter file needs a 'p' or 'p_star' array");
}

KeyParams load_params(const std::string& path) { return parse_params(read_text_file(path)); }

void save_params(const std::string& path, const KeyParams& p) {
  json j;
  j["p"] = params_array(p);
  write_text_file(path, j.dump(2) + "\n");
}

KeyParams resolve_params(const std::string& selector, const VesselPreset& preset) {
  if (selector == "baseline") return preset.baseline;
  if (selector == "truth") return preset.reference_fitted;
  if (selector == "initial-guess") return preset.initial_guess;
  return load_params(selector);
}

ModelCurves sample_curves(const KeyParams& p, double u_max, std::size_t points,
                          double inflow_max_deg) {
  if (points < 2) throw UsageError("curve sampling needs at least two points");
  ModelCurves c;
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    const double u = t * u_max;
    c.speed.push_back(u);
    c.resistance.push_back(resistance(u, p));
    const double a_deg = -inflow_max_deg + 2.0 * inflow_max_deg * t;
    const RudderCoefficients k = rudder_coefficients(deg_to_rad(a_deg), p);
    c.inflow_deg.push_back(a_deg);
    c.lift.push_back(k.lift);
    c.drag.push_back(k.drag);
  }
  return c;
}

std::string fit_result_json(const FitResult& r, const ModelCurves& curves,
                            const std::vector<std::size_t>& train,
                            const std::vector<std::size_t>& test) {
  json j;
  j["p_star"] = params_array(r.p_star);
  j["termination"] = to_string(r.reason);
  j["iterations"] = r.iterations;
  j["restored"] = r.restored;
  j["initial_objective"] = r.initial_objective;
  j["final_objective"] = r.final_objective;
  j["objective_trace"] = r.objective_trace;
  j["trajectory_costs"] = r.trajectory_costs;
  j["train"] = train;
  j["test"] = test;
  double worst = 0.0;
  json active = json::array();
  for (const auto& v : r.violations) {
    worst = std::max(worst, v.normalized());
    if (v.violation > 0.0)
      active.push_back({{"kind", to_string(v.kind)}, {"at", v.at}, {"violation", v.violation},
                        {"normalized", v.normalized()}});
  }
  j["max_normalized_violation"] = worst;
  j["violations"] = active;
  j["curves"] = {{"speed", curves.speed},           {"resistance", curves.resistance},
                 {"inflow_deg", curves.inflow_deg}, {"lift", curves.lift},
                 {"drag", curves.drag}};
  return j.dump(2) + "\n";
}

std::string evaluation_json(const EvaluationReport& report,
                            const std::vector<std::size_t>& test_indices) {
  json j;
  j["mari"] = optional_number(report.mari);
  j["cvdm_improvement"] = optional_number(report.cvdm_improvement);
  j["consistency"] = optional_number(report.consistency);
  j["flags"] = report.flags;
  json rows = json::array();
  for (const auto& s : report.scenarios) {
    json row;
    row["dataset_index"] = s.index < test_indices.size() ? test_indices[s.index] : s.index;
    row["md_baseline"] = s.baseline.md;
    row["md_fitted"] = s.fitted.md;
    json imp = json::array();
    for (const auto& v : s.md_improvement) imp.push_back(optional_number(v));
    row["md_improvement"] = imp;
    row["average_improvement"] = optional_number(s.average_improvement);
    row["cvdm_baseline"] = s.baseline.cvdm;
    row["cvdm_fitted"] = s.fitted.cvdm;
    row["cvdm_improvement"] = optional_number(s.cvdm_improvement);
    row["flags"] = s.flags;
    rows.push_back(row);
  }
  j["scenarios"] = rows;
  return j.dump(2) + "\n";
}

void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& t) {
  std::ostringstream os;
  os << "k,t,x,y,psi_deg,u,v,r,n,delta_deg,c_n,c_delta_deg\n";
  for (std::size_t k = 0; k < t.states.size(); ++k) {
    const VesselState& s = t.states[k];
    os << k << ',' << csv_number(static_cast<double>(k) * t.dt) << ',' << csv_number(s.x) << ','
       << csv_number(s.y) << ',' << csv_number(rad_to_deg(s.psi)) << ',' << csv_number(s.u) << ','
       << csv_number(s.v) << ',' << csv_number(s.r) << ',' << csv_number(s.n) << ','
       << csv_number(rad_to_deg(s.delta)) << ',';
    if (k < t.inputs.size())
      os << csv_number(t.inputs[k].c_n) << ',' << csv_number(rad_to_deg(t.inputs[k].c_delta));
    else
      os << ',';
    os << '\n';
  }
  write_text_file(file, os.str());
}

void write_plot_data(const std::filesystem::path& dir, const ModelCurves& baseline,
                     const ModelCurves& fitted, const EvaluationReport& report,
                     const std::vector<Trajectory>& measured,
                     const std::vector<std::size_t>& test_indices) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create plot directory '" + dir.string() + "'");

  {
    std::ostringstream os;
    os << "u,R_baseline,R_fitted,a_deg,cL_baseline,cL_fitted,cD_baseline,cD_fitted\n";
    for (std::size_t i = 0; i < baseline.speed.size(); ++i)
      os << csv_number(baseline.speed[i]) << ',' << csv_number(baseline.resistance[i]) << ','
         << csv_number(fitted.resistance[i]) << ',' << csv_number(baseline.inflow_deg[i]) << ','
         << csv_number(baseline.lift[i]) << ',' << csv_number(fitted.lift[i]) << ','
         << csv_number(baseline.drag[i]) << ',' << csv_number(fitted.drag[i]) << '\n';
    write_text_file(dir / "curves.csv", os.str());
  }
  {
    static constexpr const char* kNames[] = {"x", "y", "psi", "u", "v", "r"};
    std::ostringstream os;
    os << "dataset_index,dimension,md_baseline,md_fitted,md_improvement_percent\n";
    for (const auto& s : report.scenarios) {
      const std::size_t idx = s.index < test_indices.size() ? test_indices[s.index] : s.index;
      for (std::size_t d = 0; d < kPoseVelocityDim; ++d) {
        os << idx << ',' << kNames[d] << ',' << csv_number(s.baseline.md[d]) << ','
           << csv_number(s.fitted.md[d]) << ',';
        if (s.md_improvement[d]) os << csv_number(*s.md_improvement[d]);
        os << '\n';
      }
    }
    write_text_file(dir / "md_percent.csv", os.str());
  }
  for (const auto& s : report.scenarios) {
    const std::size_t idx = s.index < test_indices.size() ? test_indices[s.index] : s.index;
    const Trajectory& m = measured.at(s.index);
    std::ostringstream os;
    os << "k,t";
    for (const char* who : {"measured", "baseline", "fitted"})
      for (const char* ch : {"x", "y", "psi_deg", "u", "v", "r"}) os << ',' << who << '_' << ch;
    os << '\n';
    for (std::size_t k = 0; k < m.states.size(); ++k) {
      os << k << ',' << csv_number(static_cast<double>(k) * m.dt);
      for (const Trajectory* t : {&m, &s.baseline_prediction, &s.fitted_prediction}) {
        const VesselState& st = t->states.at(k);
        os << ',' << csv_number(st.x) << ',' << csv_number(st.y) << ','
           << csv_number(rad_to_deg(st.psi)) << ',' << csv_number(st.u) << ',' << csv_number(st.v)
           << ',' << csv_number(st.r);
      }
      os << '\n';
    }
    write_text_file(dir / ("scenario_" + std::to_string(idx) + ".csv"), os.str());
  }
}

void write_text_file(const std::filesystem::path& file, const std::string& text) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw UsageError("cannot open '" + file.string() + "' for writing");
  os << text;
  if (!os) throw UsageError("failed writing '" + file.string() + "'");
}

std::string read_text_file(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw UsageError("cannot open '" + file.string() + "'");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace greyhull
