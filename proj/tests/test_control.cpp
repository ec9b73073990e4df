#include <catch2/catch.hpp>

#include <cmath>

#include "shellheat/control.hpp"
#include "shellheat/plant.hpp"
#include "shellheat/rng.hpp"
#include "shellheat/simulate.hpp"

using namespace shellheat;

namespace {

BeamSpec beam() { return BeamSpec::uniform(5, 8.0, 1.2e-5, 2.0); }

ControllerConfig cfg() { return ControllerConfig::defaults(298.15); }

PlantState uniform_state(double temp) {
  PlantState s;
  s.shell_upper.fill(temp);
  s.shell_lower.fill(temp);
  s.blanket.fill(temp);
  s.rotor = temp;
  return s;
}

}  // namespace

TEST_CASE("relay: holds inside the deadband, switches outside it") {
  auto c = cfg();
  CHECK_FALSE(relay_update(500.0, 500.0, false, c.min_dwell, c));
  CHECK(relay_update(500.0, 500.0, true, c.min_dwell, c));  // inside band holds state
  CHECK(relay_update(500.0 - 2.0 * c.deadband, 500.0, false, c.min_dwell, c));
  CHECK_FALSE(relay_update(500.0 + 2.0 * c.deadband, 500.0, true, c.min_dwell, c));
}

TEST_CASE("relay: dwell time suppresses switching") {
  auto c = cfg();
  // Demands a switch, but the relay has not dwelt long enough.
  CHECK_FALSE(relay_update(500.0 - 2.0 * c.deadband, 500.0, false, c.min_dwell - 1.0, c));
  CHECK(relay_update(500.0 - 2.0 * c.deadband, 500.0, false, c.min_dwell, c));
}

TEST_CASE("relay: square-wave boundary input switches at most once per dwell window") {
  auto c = cfg();
  const double dt = 60.0;
  bool on = false;
  double dwell = c.min_dwell;
  double t = 0.0;
  int switches = 0;
  const double total = 86400.0;
  for (; t < total; t += dt) {
    // Input toggles across the band every sample, far faster than min_dwell.
    const bool above = (static_cast<int>(t / dt) % 2) == 0;
    const double meas = above ? 500.0 + 2.0 * c.deadband : 500.0 - 2.0 * c.deadband;
    dwell += dt;
    const bool next = relay_update(meas, 500.0, on, dwell, c);
    if (next != on) {
      ++switches;
      dwell = 0.0;
    }
    on = next;
  }
  CHECK(switches <= static_cast<int>(total / c.min_dwell));
}

TEST_CASE("outer loop: equal halves give zero offsets") {
  std::array<double, 10> upper{}, lower{};
  upper.fill(450.0);
  lower.fill(450.0);
  auto offsets = outer_loop(upper, lower, cfg(), beam());
  for (double v : offsets) CHECK(v == 0.0);
}

TEST_CASE("outer loop: top-hot shell lowers upper references, raises lower ones") {
  std::array<double, 10> upper{}, lower{};
  upper.fill(455.0);
  lower.fill(445.0);
  auto offsets = outer_loop(upper, lower, cfg(), beam());
  for (int a = 0; a < kZonesPerHalf; ++a) {
    const double up = offsets[static_cast<std::size_t>(zone_index(Half::upper, a))];
    const double lo = offsets[static_cast<std::size_t>(zone_index(Half::lower, a))];
    CHECK(up < 0.0);
    CHECK(lo > 0.0);
    CHECK(up == Approx(-lo));  // antisymmetric per zone
  }
}

TEST_CASE("outer loop: offsets are linear in the gain matrix") {
  std::array<double, 10> upper{}, lower{};
  SplitMix64 rng(31ULL);
  for (int a = 0; a < 10; ++a) {
    upper[static_cast<std::size_t>(a)] = rng.uniform(400.0, 500.0);
    lower[static_cast<std::size_t>(a)] = rng.uniform(400.0, 500.0);
  }
  auto c1 = cfg();
  auto c2 = cfg();
  for (int i = 0; i < kBeamElements; ++i)
    c2.k_outer[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] *= 2.0;
  auto o1 = outer_loop(upper, lower, c1, beam());
  auto o2 = outer_loop(upper, lower, c2, beam());
  for (int z = 0; z < kZones; ++z)
    CHECK(o2[static_cast<std::size_t>(z)] ==
          Approx(2.0 * o1[static_cast<std::size_t>(z)]).margin(1e-12));
}

TEST_CASE("controller step: early cooldown far above references keeps all heaters off") {
  auto c = cfg();
  PlantState s = uniform_state(800.0);  // ~527 C, far above any reference
  auto [cmd, cs] = controller_step(s, ControllerState::initial(c), c, beam(), 60.0);
  for (bool on : cmd.on) CHECK_FALSE(on);
}

TEST_CASE("controller step: K = 0 reduces exactly to independent relay loops") {
  auto with_outer = cfg();
  for (auto& row : with_outer.k_outer) row.fill(0.0);
  auto no_outer = cfg();
  no_outer.outer_loop_enabled = false;

  PlantParams p = nominal_params();
  ThermalPlant plant(p, 60.0);
  InitialProfileSpec prof;
  prof.peak_temp = 545.0;  // K; cool enough that relays engage quickly
  PlantState s = initial_hot_shutdown_state(p, prof);

  ControllerState cs_a = ControllerState::initial(with_outer);
  ControllerState cs_b = ControllerState::initial(no_outer);
  for (int i = 0; i < 600; ++i) {
    auto [cmd_a, next_a] = controller_step(s, cs_a, with_outer, beam(), 60.0);
    auto [cmd_b, next_b] = controller_step(s, cs_b, no_outer, beam(), 60.0);
    for (int z = 0; z < kZones; ++z) {
      REQUIRE(cmd_a.on[static_cast<std::size_t>(z)] == cmd_b.on[static_cast<std::size_t>(z)]);
      REQUIRE(next_a.ref_current[static_cast<std::size_t>(z)] ==
              next_b.ref_current[static_cast<std::size_t>(z)]);
    }
    cs_a = next_a;
    cs_b = next_b;
    s = plant.step(s, cmd_a);
  }
}

TEST_CASE("controller step: references never leave their bounds") {
  auto c = cfg();
  c.gain_scale = 1e9;  // absurd gain: the clamp must still hold
  PlantParams p = nominal_params();
  InitialProfileSpec prof;
  prof.peak_temp = 838.15;
  PlantState s = initial_hot_shutdown_state(p, prof);
  // Force a large differential so the outer loop rails.
  for (int i = 0; i < kNodesPerHalf; ++i) s.shell_lower[static_cast<std::size_t>(i)] -= 80.0;
  ControllerState cs = ControllerState::initial(c);
  ThermalPlant plant(p, 60.0);
  for (int i = 0; i < 200; ++i) {
    auto [cmd, next] = controller_step(s, cs, c, beam(), 60.0);
    for (double r : next.ref_current) {
      CHECK(r >= c.ref_min);
      CHECK(r <= c.ref_max);
    }
    cs = next;
    s = plant.step(s, cmd);
  }
}

TEST_CASE("controller step: symmetric plant and state produce symmetric commands") {
  auto c = cfg();
  PlantParams p = nominal_params();
  for (int a = 0; a < kZonesPerHalf; ++a) {
    const auto up = static_cast<std::size_t>(zone_index(Half::upper, a));
    const auto lo = static_cast<std::size_t>(zone_index(Half::lower, a));
    p.a_shell_ambient[lo] = p.a_shell_ambient[up];
    p.h_rotor[lo] = p.h_rotor[up];
    p.h_contact[lo] = p.h_contact[up];
    p.blanket_heat_capacity[lo] = p.blanket_heat_capacity[up];
  }
  InitialProfileSpec prof;
  prof.peak_temp = 700.0;
  PlantState s = initial_hot_shutdown_state(p, prof);
  ThermalPlant plant(p, 60.0);
  ControllerState cs = ControllerState::initial(c);
  for (int i = 0; i < 2000; ++i) {
    auto [cmd, next] = controller_step(s, cs, c, beam(), 60.0);
    for (int a = 0; a < kZonesPerHalf; ++a)
      REQUIRE(cmd.on[static_cast<std::size_t>(zone_index(Half::upper, a))] ==
              cmd.on[static_cast<std::size_t>(zone_index(Half::lower, a))]);
    cs = next;
    s = plant.step(s, cmd);
  }
}

TEST_CASE("controller step: relay switch rate is bounded by the dwell time") {
  // Closed loop over two simulated days at the hold temperature.
  auto c = cfg();
  PlantParams p = nominal_params();
  InitialProfileSpec prof;
  prof.peak_temp = c.hold_min + 5.0;
  SimSettings settings;
  settings.dt = 30.0;
  settings.controller_period = 60.0;
  settings.horizon_hours = 48.0;
  settings.profile = prof;
  auto run = run_closed_loop(p, c, beam(), settings);
  const double days = settings.horizon_hours / 24.0;
  for (int z = 0; z < kZones; ++z)
    CHECK(run.relay_switches[static_cast<std::size_t>(z)] <=
          static_cast<int>(days * 86400.0 / c.min_dwell));
}

TEST_CASE("controller step: a non-finite thermocouple fails its zone off and flags it") {
  auto c = cfg();
  PlantState s = uniform_state(c.hold_min - 20.0);  // below references: wants heat
  auto [cmd1, cs1] = controller_step(s, ControllerState::initial(c), c, beam(), 60.0);
  CHECK(cmd1.on[5]);
  s.shell_upper[6] = std::nan("");  // zone 5's thermocouple (axial 5, upper)
  auto [cmd2, cs2] = controller_step(s, ControllerState::initial(c), c, beam(), 60.0);
  CHECK_FALSE(cmd2.on[5]);
  CHECK(cs2.fault_flagged[5]);
  CHECK(cmd2.on[6]);  // neighbours unaffected
}

TEST_CASE("disabled heaters reproduce the natural cooldown exactly") {
  PlantParams p = nominal_params();
  BeamSpec b = beam();
  SimSettings s;
  s.dt = 120.0;
  s.controller_period = 120.0;
  s.horizon_hours = 40.0;
  s.profile.peak_temp = 750.0;

  ControllerConfig c = cfg();
  c.heaters_enabled = false;
  auto controlled = run_closed_loop(p, c, b, s);
  auto natural = run_uncontrolled(p, b, s);
  REQUIRE(controlled.trajectory.size() == natural.trajectory.size());
  for (std::size_t i = 0; i < controlled.trajectory.size(); ++i) {
    REQUIRE(controlled.trajectory[i].y_mid == natural.trajectory[i].y_mid);
    for (int z = 0; z < kZones; ++z) {
      REQUIRE(controlled.trajectory[i].zone_temp[static_cast<std::size_t>(z)] ==
              natural.trajectory[i].zone_temp[static_cast<std::size_t>(z)]);
      REQUIRE_FALSE(controlled.trajectory[i].relay[static_cast<std::size_t>(z)]);
    }
  }
}
