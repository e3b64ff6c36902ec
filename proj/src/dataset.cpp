#include "greyhull/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "greyhull/angles.hpp"
#include "greyhull/dynamics.hpp"
#include "greyhull/errors.hpp"

namespace greyhull {

namespace {

constexpr const char* kMagic = "greyhull-dataset 1";
constexpr const char* kUnits =
    "x:m y:m psi:deg u:m/s v:m/s r:rad/s n:rpm delta:deg c_n:rpm c_delta:deg";

class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  std::vector<std::string> next_tokens() {
    std::string line;
    if (!std::getline(is_, line)) throw ParseError("unexpected end of file", line_ + 1);
    ++line_;
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    last_ = line;
    return tok;
  }
  const std::string& last_line() const { return last_; }
  std::size_t line() const { return line_; }

 private:
  std::istream& is_;
  std::size_t line_ = 0;
  std::string last_;
};

double parse_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw ParseError("bad number '" + s + "'", line);
  return v;
}

double parse_angle(const std::string& s, std::size_t line) {
  double rad = 0.0;
  if (!parse_degrees(s, rad)) throw ParseError("bad angle '" + s + "'", line);
  return rad;
}

std::size_t parse_index(const std::string& s, std::size_t line) {
  std::size_t v = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw ParseError("bad integer '" + s + "'", line);
  return v;
}

void expect(const std::vector<std::string>& tok, const char* key, std::size_t count,
            std::size_t line) {
  if (tok.empty() || tok[0] != key)
    throw ParseError(std::string("expected '") + key + "'", line);
  if (count != 0 && tok.size() != count)
    throw ParseError(std::string("wrong field count for '") + key + "'", line);
}

std::string rest_after_key(const std::string& line, const char* key) {
  const std::size_t pos = line.find(key);
  std::size_t start = pos + std::char_traits<char>::length(key);
  if (start < line.size() && line[start] == ' ') ++start;
  return line.substr(start);
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Dataset::validate() const {
  if (!(dt > 0.0)) throw UsageError("dataset dt must be positive");
  if (labels.size() != trajectories.size()) throw UsageError("dataset labels and trajectories differ");
  for (const auto& t : trajectories) {
    t.validate();
    if (t.knots() != knots) throw UsageError("dataset trajectory has the wrong knot count");
    if (t.dt != dt) throw UsageError("dataset trajectory has the wrong dt");
  }
}

void write_dataset(std::ostream& os, const Dataset& d) {
  d.validate();
  os << kMagic << '\n';
  os << "vessel " << d.vessel << '\n';
  os << "dt " << format_number(d.dt) << '\n';
  os << "knots " << d.knots << '\n';
  os << "trajectories " << d.trajectories.size() << '\n';
  os << "provenance " << d.provenance << '\n';
  os << "truth";
  if (d.truth) {
    for (double v : d.truth->p) os << ' ' << format_number(v);
  } else {
    os << " none";
  }
  os << '\n';
  os << "units " << kUnits << '\n';
  for (std::size_t i = 0; i < d.trajectories.size(); ++i) {
    const Trajectory& t = d.trajectories[i];
    os << "trajectory " << i << ' ' << d.labels[i] << '\n';
    for (std::size_t k = 0; k < t.states.size(); ++k) {
      const VesselState& s = t.states[k];
      os << "s " << k << ' ' << format_number(s.x) << ' ' << format_number(s.y) << ' '
         << format_degrees(s.psi) << ' ' << format_number(s.u) << ' '
         << format_number(s.v) << ' ' << format_number(s.r) << ' ' << format_number(s.n) << ' '
         << format_degrees(s.delta) << '\n';
    }
    for (std::size_t k = 0; k < t.inputs.size(); ++k) {
      os << "i " << k << ' ' << format_number(t.inputs[k].c_n) << ' '
         << format_degrees(t.inputs[k].c_delta) << '\n';
    }
    os << "end\n";
  }
}

Dataset read_dataset(std::istream& is) {
  LineReader in(is);
  Dataset d;
  {
    in.next_tokens();
    if (in.last_line() != kMagic) throw ParseError("not a greyhull dataset file", in.line());
  }
  auto tok = in.next_tokens();
  expect(tok, "vessel", 2, in.line());
  d.vessel = tok[1];
  tok = in.next_tokens();
  expect(tok, "dt", 2, in.line());
  d.dt = parse_double(tok[1], in.line());
  if (!(d.dt > 0.0)) throw ParseError("dt must be positive", in.line());
  tok = in.next_tokens();
  expect(tok, "knots", 2, in.line());
  d.knots = parse_index(tok[1], in.line());
  if (d.knots == 0) throw ParseError("knots must be positive", in.line());
  tok = in.next_tokens();
  expect(tok, "trajectories", 2, in.line());
  const std::size_t m = parse_index(tok[1], in.line());
  tok = in.next_tokens();
  expect(tok, "provenance", 0, in.line());
  d.provenance = rest_after_key(in.last_line(), "provenance");
  tok = in.next_tokens();
  expect(tok, "truth", 0, in.line());
  if (tok.size() == 2 && tok[1] == "none") {
    d.truth.reset();
  } else if (tok.size() == kNumKeyParams + 1) {
    KeyParams p;
    for (std::size_t j = 0; j < kNumKeyParams; ++j) p[j] = parse_double(tok[j + 1], in.line());
    d.truth = p;
  } else {
    throw ParseError("truth needs 11 values or 'none'", in.line());
  }
  tok = in.next_tokens();
  expect(tok, "units", 0, in.line());
  if (rest_after_key(in.last_line(), "units") != kUnits)
    throw ParseError("unsupported unit declaration", in.line());

  for (std::size_t i = 0; i < m; ++i) {
    tok = in.next_tokens();
    expect(tok, "trajectory", 3, in.line());
    if (parse_index(tok[1], in.line()) != i) throw ParseError("trajectory out of order", in.line());
    d.labels.push_back(tok[2]);
    Trajectory t;
    t.dt = d.dt;
    for (std::size_t k = 0; k <= d.knots; ++k) {
      tok = in.next_tokens();
      expect(tok, "s", 10, in.line());
      if (parse_index(tok[1], in.line()) != k) throw ParseError("state row out of order", in.line());
      VesselState s;
      s.x = parse_double(tok[2], in.line());
      s.y = parse_double(tok[3], in.line());
      s.psi = parse_angle(tok[4], in.line());
      s.u = parse_double(tok[5], in.line());
      s.v = parse_double(tok[6], in.line());
      s.r = parse_double(tok[7], in.line());
      s.n = parse_double(tok[8], in.line());
      s.delta = parse_angle(tok[9], in.line());
      t.states.push_back(s);
    }
    for (std::size_t k = 0; k < d.knots; ++k) {
      tok = in.next_tokens();
      expect(tok, "i", 4, in.line());
      if (parse_index(tok[1], in.line()) != k) throw ParseError("input row out of order", in.line());
      t.inputs.push_back({parse_double(tok[2], in.line()),
                          parse_angle(tok[3], in.line())});
    }
    tok = in.next_tokens();
    expect(tok, "end", 1, in.line());
    d.trajectories.push_back(std::move(t));
  }
  return d;
}

void save_dataset(const std::string& path, const Dataset& d) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw UsageError("cannot open '" + path + "' for writing");
  write_dataset(os, d);
  if (!os) throw UsageError("failed writing '" + path + "'");
}

Dataset load_dataset(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw UsageError("cannot open dataset '" + path + "'");
  return read_dataset(is);
}

std::vector<std::string> envelope_violations(const std::vector<Trajectory>& trajectories,
                                             const DatasetEnvelope& env) {
  std::vector<std::string> out;
  const auto check = [&](const char* name, const ChannelEnvelope& e, auto getter) {
    double lo = INFINITY;
    double hi = -INFINITY;
    for (const auto& t : trajectories)
      for (const auto& s : t.states) {
        lo = std::min(lo, getter(s));
        hi = std::max(hi, getter(s));
      }
    if (trajectories.empty()) return;
    if (lo < e.min || hi > e.max) {
      std::ostringstream os;
      os << name << " range [" << lo << ", " << hi << "] outside envelope [" << e.min << ", "
         << e.max << "]";
      out.push_back(os.str());
    }
  };
  check("u", env.u, [](const VesselState& s) { return s.u; });
  check("v", env.v, [](const VesselState& s) { return s.v; });
  check("r", env.r, [](const VesselState& s) { return s.r; });
  check("n", env.n, [](const VesselState& s) { return s.n; });
  check("delta", env.delta_deg, [](const VesselState& s) { return rad_to_deg(s.delta); });
  return out;
}

GenerationResult generate_dataset(const VesselPreset& preset,
                                  const std::vector<ScenarioSpec>& scenarios,
                                  const KeyParams& truth, const NoiseSpec& noise,
                                  std::uint64_t seed) {
  if (scenarios.empty()) throw UsageError("no scenarios to generate");
  const VesselConfig& cfg = preset.config;
  cfg.validate();
  const std::size_t K = scenarios.front().knots;
  const double dt = scenarios.front().dt;

  GenerationResult out;
  Dataset& d = out.dataset;
  d.vessel = preset.name;
  d.dt = dt;
  d.knots = K;
  d.truth = truth;
  {
    std::ostringstream os;
    os << "synthetic noise_seed=" << seed << " noise=";
    if (noise.enabled())
      os << "xy:" << noise.xy << ",psi:" << noise.psi << ",u:" << noise.u << ",v:" << noise.v
         << ",r:" << noise.r;
    else
      os << "off";
    d.provenance = os.str();
  }

  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const ScenarioSpec& spec = scenarios[i];
    if (spec.knots != K || spec.dt != dt)
      throw UsageError("scenario " + std::to_string(i) + " differs in knots or dt");
    Trajectory t;
    t.dt = dt;
    t.states.push_back(spec.initial);
    ControlInput prev{};
    for (std::size_t k = 0; k < K; ++k) {
      const ControlInput c = scenario_command(spec, t.states.back(), k, prev);
      if (std::abs(c.c_n) > cfg.n_max || std::abs(c.c_delta) > cfg.delta_max)
        throw UsageError("scenario " + std::to_string(i) + " commands exceed actuator limits at knot " +
                         std::to_string(k));
      try {
        t.states.push_back(step(t.states.back(), c, {}, truth, cfg, dt));
      } catch (const SimulationFault& e) {
        throw SimulationFault("scenario " + std::to_string(i) + ": " + e.what(),
                              static_cast<std::ptrdiff_t>(k));
      }
      t.inputs.push_back(c);
      prev = c;
    }
    d.trajectories.push_back(std::move(t));
    d.labels.push_back(to_string(spec.family));
  }

  if (noise.enabled()) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& t : d.trajectories)
      for (auto& s : t.states) {
        s.x += noise.xy * gauss(rng);
        s.y += noise.xy * gauss(rng);
        s.psi = wrap_angle(s.psi + noise.psi * gauss(rng));
        s.u += noise.u * gauss(rng);
        s.v += noise.v * gauss(rng);
        s.r += noise.r * gauss(rng);
      }
  }
  out.envelope_warnings = envelope_violations(d.trajectories, preset.envelope);
  return out;
}

Split split_dataset(std::size_t count, std::uint64_t seed, double test_fraction) {
  if (!(test_fraction >= 0.0 && test_fraction < 1.0))
    throw UsageError("test fraction must lie in [0, 1)");
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  // Fisher-Yates with an explicit draw so the permutation does not depend on
  // the standard library's shuffle.
  for (std::size_t i = count; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(idx[i - 1], idx[j]);
  }
  std::size_t n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(count)));
  if (count >= 2 && test_fraction > 0.0) n_test = std::max<std::size_t>(n_test, 1);
  n_test = std::min(n_test, count);
  Split s;
  s.test.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
  s.train.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
  std::sort(s.test.begin(), s.test.end());
  std::sort(s.train.begin(), s.train.end());
  return s;
}

std::vector<Trajectory> select(const std::vector<Trajectory>& all,
                               const std::vector<std::size_t>& indices) {
  std::vector<Trajectory> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= all.size()) throw UsageError("split index out of range");
    out.push_back(all[i]);
  }
  return out;
}

double max_surge(const std::vector<Trajectory>& trajectories) {
  double m = 0.0;
  for (const auto& t : trajectories)
    for (const auto& s : t.states) m = std::max(m, s.u);
  return m;
}

}  // namespace greyhull
