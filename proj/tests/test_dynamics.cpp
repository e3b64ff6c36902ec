#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "greyhull/angles.hpp"
#include "greyhull/dynamics.hpp"
#include "greyhull/errors.hpp"
#include "greyhull/forces.hpp"
#include "greyhull/presets.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace greyhull;
using namespace greyhull::testing;

TEST_SUITE("dynamics") {

TEST_CASE("equilibrium at rest gives zero acceleration") {
  const VesselConfig c = ship_a().config;
  const AccelTriple a = solve_accelerations(VesselState{}, ForceTriple{}, c.hydro);
  CHECK(a.u_dot == 0.0);
  CHECK(a.v_dot == 0.0);
  CHECK(a.r_dot == 0.0);
}

TEST_CASE("symmetric hull decouples sway from yaw") {
  HydroCoefficients h = ship_a().config.hydro;
  h.x_G = 0.0;
  h.Y_rdot = 0.0;
  h.N_vdot = 0.0;
  const double F = 12345.0;
  const AccelTriple a = solve_accelerations(VesselState{}, ForceTriple{0.0, F, 0.0}, h);
  CHECK(a.u_dot == 0.0);
  CHECK(a.r_dot == 0.0);
  CHECK(a.v_dot == doctest::Approx(F / (h.m - h.Y_vdot)).epsilon(1e-15));
}

TEST_CASE("accelerations match a dense brute-force solve on 1000 random instances") {
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
  CHECK(worst < 1e-10);
}

TEST_CASE("U-normalized yaw damping vanishes below the speed cutoff") {
  HydroCoefficients h = ship_a().config.hydro;
  VesselState s;
  s.u = 1e-4;
  s.v = 1e-4;
  s.r = 0.01;
  const AccelTriple with = solve_accelerations(s, {}, h);
  h.N_rrv = 0.0;
  h.N_vvr = 0.0;
  const AccelTriple without = solve_accelerations(s, {}, h);
  CHECK(with.r_dot == without.r_dot);
  CHECK(with.v_dot == without.v_dot);
}

TEST_CASE("singular inertia matrix is a configuration error") {
  HydroCoefficients h = ship_a().config.hydro;
  // Make the second row proportional to the first.
  const double a11 = h.m - h.Y_vdot;
  const double a12 = h.m * h.x_G - h.Y_rdot;
  h.N_vdot = h.m * h.x_G - 2.0 * a11;
  h.N_rdot = h.I_zz - 2.0 * a12;
  CHECK_THROWS_AS(solve_accelerations(VesselState{}, {}, h), ConfigError);
}

TEST_CASE("non-finite input is a simulation fault") {
  const HydroCoefficients h = ship_a().config.hydro;
  VesselState s;
  s.v = std::nan("");
  CHECK_THROWS_AS(solve_accelerations(s, {}, h), SimulationFault);
  CHECK_THROWS_AS(solve_accelerations(VesselState{}, {INFINITY, 0.0, 0.0}, h), SimulationFault);
}

TEST_CASE("state at rest with zero command is a fixed point") {
  const VesselPreset a = ship_a();
  const VesselState s{};
  const VesselState next = step(s, {}, {}, a.reference_fitted, a.config, 1.0);
  CHECK(next == s);
}

TEST_CASE("pure surge advances x by u dt when forces balance") {
  VesselPreset a = ship_a();
  KeyParams p{};  // no resistance, no rudder force; no thrust at n = 0
  VesselState s;
  s.u = 2.0;
  const VesselState next = step(s, {}, {}, p, a.config, 1.0);
  CHECK(next.x == 2.0);
  CHECK(next.y == 0.0);
  CHECK(next.psi == 0.0);
  CHECK(next.u == 2.0);
}

TEST_CASE("rudder slews at the configured rate") {
  const VesselPreset a = ship_a();
  VesselState s;
  s.u = 3.0;
  s.delta = a.config.delta_max;
  const VesselState next = step(s, {0.0, -a.config.delta_max}, {}, a.baseline, a.config, 1.0);
  CHECK(next.delta == doctest::Approx(a.config.delta_max - deg_to_rad(2.32)).epsilon(1e-14));
}

TEST_CASE("rate limiter clamps to the actuator limit") {
  CHECK(rate_limited(0.0, 10.0, 3.0, 100.0) == 3.0);
  CHECK(rate_limited(0.0, -10.0, 3.0, 100.0) == -3.0);
  CHECK(rate_limited(9.0, 10.0, 3.0, 100.0) == 10.0);
  CHECK(rate_limited(99.0, 200.0, 3.0, 100.0) == 100.0);
}

TEST_CASE("heading stays in (-pi, pi] after every step") {
  const VesselPreset a = ship_a();
  VesselState s;
  s.u = 4.0;
  s.psi = kPi - 0.001;
  s.r = 0.01;
  const VesselState next = step(s, {}, {}, a.baseline, a.config, 1.0);
  CHECK(next.psi > -kPi);
  CHECK(next.psi <= kPi);
  CHECK(next.psi < 0.0);
}

TEST_CASE("simulate returns K+1 states and rests stay at rest") {
  const VesselPreset a = ship_a();
  const std::vector<ControlInput> one(1);
  CHECK(simulate(VesselState{}, one, a.baseline, a.config, 1.0).states.size() == 2);
  const std::vector<ControlInput> zeros(50);
  const Trajectory t = simulate(VesselState{}, zeros, a.reference_fitted, a.config, 1.0);
  for (const auto& s : t.states) CHECK(s == VesselState{});
}

TEST_CASE("simulate is bit-deterministic") {
  const VesselPreset a = ship_a();
  std::vector<ControlInput> in(120, ControlInput{180.0, deg_to_rad(20.0)});
  VesselState s0;
  s0.u = 4.0;
  s0.n = 180.0;
  const Trajectory t1 = simulate(s0, in, a.reference_fitted, a.config, 1.0);
  const Trajectory t2 = simulate(s0, in, a.reference_fitted, a.config, 1.0);
  REQUIRE(t1.states.size() == t2.states.size());
  for (std::size_t k = 0; k < t1.states.size(); ++k) CHECK(t1.states[k] == t2.states[k]);
}

TEST_CASE("heading periodicity: psi and psi + 2 pi give the same motion") {
  const VesselPreset a = ship_a();
  std::vector<ControlInput> in(80, ControlInput{150.0, deg_to_rad(-15.0)});
  VesselState s0;
  s0.u = 3.5;
  s0.n = 150.0;
  s0.psi = 0.7;
  VesselState s1 = s0;
  s1.psi = 0.7 + 2.0 * kPi;
  const Trajectory t0 = simulate(s0, in, a.reference_fitted, a.config, 1.0);
  const Trajectory t1 = simulate(s1, in, a.reference_fitted, a.config, 1.0);
  for (std::size_t k = 1; k < t0.states.size(); ++k) {
    CHECK(t1.states[k].u == doctest::Approx(t0.states[k].u).epsilon(1e-12));
    CHECK(t1.states[k].v == doctest::Approx(t0.states[k].v).epsilon(1e-12));
    CHECK(t1.states[k].r == doctest::Approx(t0.states[k].r).epsilon(1e-12));
    CHECK(t1.states[k].x == doctest::Approx(t0.states[k].x).epsilon(1e-9));
    CHECK(t1.states[k].y == doctest::Approx(t0.states[k].y).epsilon(1e-9));
    CHECK(std::fabs(wrap_angle(t1.states[k].psi - t0.states[k].psi)) < 1e-12);
  }
}

TEST_CASE("surge speed never increases without thrust") {
  const VesselPreset a = ship_a();
  KeyParams p = a.reference_fitted;
  p[4] = 0.0;  // no lift at zero inflow, so the rollout stays pure surge
  VesselState s;
  s.u = 5.0;
  const std::vector<ControlInput> in(120);
  const Trajectory t = simulate(s, in, p, a.config, 1.0);
  for (std::size_t k = 1; k < t.states.size(); ++k) {
    CHECK(t.states[k].u <= t.states[k - 1].u);
    CHECK(t.states[k].v == 0.0);
    CHECK(t.states[k].r == 0.0);
  }
}

TEST_CASE("faults carry the index of the failing step") {
  const VesselPreset a = ship_a();
  KeyParams p = a.reference_fitted;
  p[3] = 1e308;  // 1e308 * 5^3 overflows the resistance on the first step
  VesselState s;
  s.u = 5.0;
  const std::vector<ControlInput> in(5);
  try {
    (void)simulate(s, in, p, a.config, 1.0);
    FAIL("expected a simulation fault");
  } catch (const SimulationFault& e) {
    CHECK(e.step() == 0);
  }
}

TEST_CASE("environment hook adds its forces") {
  struct Push final : EnvironmentModel {
    ForceTriple forces(const VesselState&, const EnvInput&, const VesselConfig&) const override {
      return {0.0, 1000.0, 0.0};
    }
  };
  const VesselPreset a = ship_a();
  const Push push;
  VesselState s;
  const VesselState calm = step(s, {}, {}, a.baseline, a.config, 1.0);
  const VesselState pushed = step(s, {}, {}, a.baseline, a.config, 1.0, &push);
  CHECK(calm.v == 0.0);
  CHECK(pushed.v != 0.0);
}

}  // TEST_SUITE
