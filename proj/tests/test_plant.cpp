#include <catch2/catch.hpp>

#include <cmath>
#include <vector>

#include "shellheat/plant.hpp"
#include "shellheat/rng.hpp"

using namespace shellheat;

namespace {

PlantParams symmetric_params() {
  PlantParams p = nominal_params();
  for (int a = 0; a < kZonesPerHalf; ++a) {
    const auto up = static_cast<std::size_t>(zone_index(Half::upper, a));
    const auto lo = static_cast<std::size_t>(zone_index(Half::lower, a));
    p.a_shell_ambient[lo] = p.a_shell_ambient[up];
    p.h_rotor[lo] = p.h_rotor[up];
    p.h_contact[lo] = p.h_contact[up];
    p.blanket_heat_capacity[lo] = p.blanket_heat_capacity[up];
  }
  return p;
}

InitialProfileSpec hot_profile() {
  InitialProfileSpec s;
  s.peak_temp = 565.0 + 273.15;
  return s;
}

}  // namespace

TEST_CASE("contact_heat_flow: zero differential, direct substitution, antisymmetry") {
  CHECK(contact_heat_flow(400.0, 400.0, 123.0, 4.5) == 0.0);
  CHECK(contact_heat_flow(410.0, 400.0, 100.0, 1.0) == Approx(1000.0));
  SplitMix64 rng(5ULL);
  for (int i = 0; i < 100; ++i) {
    const double ta = rng.uniform(250.0, 900.0);
    const double tb = rng.uniform(250.0, 900.0);
    const double hc = rng.uniform(1.0, 200.0);
    const double as = rng.uniform(0.1, 5.0);
    CHECK(contact_heat_flow(ta, tb, hc, as) == Approx(-contact_heat_flow(tb, ta, hc, as)).margin(1e-12));
  }
  CHECK_THROWS_AS(contact_heat_flow(1, 2, 0.0, 1.0), param_error);
  CHECK_THROWS_AS(contact_heat_flow(1, 2, 1.0, -1.0), param_error);
}

TEST_CASE("shell system: 3-node assembly matches the boundary/interior stencil") {
  const double h = 0.8;
  const double alpha = 4.6e-6;
  auto s = assemble_shell_system(3, h, alpha);
  const double inv_h2 = 1.0 / (h * h);
  CHECK(s.diag[0] == Approx(-h * inv_h2));
  CHECK(s.sup[0] == Approx(h * inv_h2));
  CHECK(s.sub[1] == Approx(inv_h2));
  CHECK(s.diag[1] == Approx(-2.0 * inv_h2));
  CHECK(s.sup[1] == Approx(inv_h2));
  CHECK(s.sub[2] == Approx(h * inv_h2));
  CHECK(s.diag[2] == Approx(-h * inv_h2));
  CHECK(s.time_weight[0] == Approx(0.5 * h / alpha));
  CHECK(s.time_weight[1] == Approx(1.0 / alpha));
  CHECK_FALSE(s.heat_input_mask[0]);
  CHECK(s.heat_input_mask[1]);
  CHECK_FALSE(s.heat_input_mask[2]);
  CHECK_THROWS_AS(assemble_shell_system(2, h, alpha), param_error);
}

TEST_CASE("shell system: uniform field maps to zero, linear ramp to boundary slopes") {
  auto s = assemble_shell_system(12, 0.8, 4.6e-6);
  std::vector<double> uniform(12, 451.25);
  for (double v : s.apply(uniform)) CHECK(v == 0.0);

  std::vector<double> ramp(12);
  const double c = 3.5;  // per-node increment
  for (int i = 0; i < 12; ++i) ramp[static_cast<std::size_t>(i)] = 300.0 + c * i;
  auto out = s.apply(ramp);
  CHECK(out.front() == Approx(c / 0.8));
  CHECK(out.back() == Approx(-c / 0.8));
  for (int i = 1; i < 11; ++i) CHECK(out[static_cast<std::size_t>(i)] == Approx(0.0).margin(1e-9));
}

TEST_CASE("step: global equilibrium at ambient is a fixed point") {
  PlantParams p = nominal_params();
  PlantState s;
  s.shell_upper.fill(p.t_ambient);
  s.shell_lower.fill(p.t_ambient);
  s.blanket.fill(p.t_ambient);
  s.rotor = p.t_ambient;

  ThermalPlant plant(p, 3600.0);
  PlantState next = plant.step(s, HeaterCommand::all_off());
  for (int i = 0; i < kNodesPerHalf; ++i) {
    CHECK(next.shell_upper[static_cast<std::size_t>(i)] == Approx(p.t_ambient).margin(1e-9));
    CHECK(next.shell_lower[static_cast<std::size_t>(i)] == Approx(p.t_ambient).margin(1e-9));
  }
  for (int z = 0; z < kZones; ++z)
    CHECK(next.blanket[static_cast<std::size_t>(z)] == Approx(p.t_ambient).margin(1e-9));
  CHECK(next.rotor == Approx(p.t_ambient).margin(1e-9));
  CHECK(next.sim_time == Approx(3600.0));
}

TEST_CASE("step: a single energized blanket warms its own zone above the mirror zone") {
  PlantParams p = symmetric_params();
  PlantState s;
  s.shell_upper.fill(p.t_ambient);
  s.shell_lower.fill(p.t_ambient);
  s.blanket.fill(p.t_ambient);
  s.rotor = p.t_ambient;

  const int zone = zone_index(Half::upper, 3);
  HeaterCommand cmd;
  cmd.on[static_cast<std::size_t>(zone)] = true;

  ThermalPlant plant(p, 120.0);
  for (int i = 0; i < 2000; ++i) s = plant.step(s, cmd);  // ~67 h, near steady state

  const int mirror = zone_index(Half::lower, 3);
  CHECK(s.zone_shell(zone) > s.zone_shell(mirror) + 5.0);
  CHECK(s.blanket[static_cast<std::size_t>(zone)] > s.blanket[static_cast<std::size_t>(mirror)] + 5.0);
}

TEST_CASE("step: energy audit closes against boundary flows") {
  PlantParams p = nominal_params();
  ThermalPlant plant(p, 60.0);
  PlantState s = initial_hot_shutdown_state(p, hot_profile());

  SplitMix64 rng(99ULL);
  for (int step_i = 0; step_i < 200; ++step_i) {
    HeaterCommand cmd;
    for (int z = 0; z < kZones; ++z) cmd.on[static_cast<std::size_t>(z)] = rng.uniform() < 0.4;
    const double e0 = plant.stored_energy(s);
    PlantState next = plant.step(s, cmd);
    const double e1 = plant.stored_energy(next);
    const auto flows = plant.boundary_flows(next, cmd);
    const double expected = 60.0 * (flows.heater_in - flows.ambient_loss);
    const double scale = std::max({std::fabs(60.0 * flows.heater_in),
                                   std::fabs(60.0 * flows.ambient_loss), 1.0});
    CHECK(std::fabs((e1 - e0) - expected) <= 1e-3 * scale);
    s = next;
  }
}

TEST_CASE("step: with heaters off the state stays within [ambient, running max]") {
  PlantParams p = nominal_params();
  ThermalPlant plant(p, 300.0);
  SplitMix64 rng(4242ULL);
  for (int trial = 0; trial < 2; ++trial) {
    InitialProfileSpec prof;
    prof.peak_temp = p.t_ambient + rng.uniform(100.0, 600.0);
    prof.center = rng.uniform(0.3, 0.7);
    PlantState s = initial_hot_shutdown_state(p, prof);
    auto state_max = [](const PlantState& st) {
      double m = st.rotor;
      for (double v : st.shell_upper) m = std::max(m, v);
      for (double v : st.shell_lower) m = std::max(m, v);
      for (double v : st.blanket) m = std::max(m, v);
      return m;
    };
    auto state_min = [](const PlantState& st) {
      double m = st.rotor;
      for (double v : st.shell_upper) m = std::min(m, v);
      for (double v : st.shell_lower) m = std::min(m, v);
      for (double v : st.blanket) m = std::min(m, v);
      return m;
    };
    double prev_max = state_max(s);
    for (int i = 0; i < 300; ++i) {
      s = plant.step(s, HeaterCommand::all_off());
      const double mx = state_max(s);
      CHECK(mx <= prev_max + 1e-9);
      CHECK(state_min(s) >= p.t_ambient - 1e-9);
      prev_max = mx;
    }
  }
}

TEST_CASE("step: mirrored parameters and commands keep the halves identical") {
  PlantParams p = symmetric_params();
  ThermalPlant plant(p, 60.0);
  PlantState s = initial_hot_shutdown_state(p, hot_profile());

  SplitMix64 rng(7ULL);
  for (int i = 0; i < 500; ++i) {
    HeaterCommand cmd;
    for (int a = 0; a < kZonesPerHalf; ++a) {
      const bool on = rng.uniform() < 0.5;
      cmd.on[static_cast<std::size_t>(zone_index(Half::upper, a))] = on;
      cmd.on[static_cast<std::size_t>(zone_index(Half::lower, a))] = on;
    }
    s = plant.step(s, cmd);
    for (int n = 0; n < kNodesPerHalf; ++n)
      CHECK(std::fabs(s.shell_upper[static_cast<std::size_t>(n)] -
                      s.shell_lower[static_cast<std::size_t>(n)]) <= 1e-9);
  }
}

TEST_CASE("step: heat-input vector is structurally zero at the shell ends") {
  PlantParams p = nominal_params();
  ThermalPlant plant(p, 60.0);
  PlantState s = initial_hot_shutdown_state(p, hot_profile());
  HeaterCommand cmd;
  for (int z = 0; z < kZones; ++z) cmd.on[static_cast<std::size_t>(z)] = true;
  for (int i = 0; i < 5; ++i) {
    auto q = plant.shell_external_heat(s, cmd);
    for (int half = 0; half < 2; ++half) {
      CHECK(q[static_cast<std::size_t>(half)].front() == 0.0);
      CHECK(q[static_cast<std::size_t>(half)].back() == 0.0);
    }
    s = plant.step(s, cmd);
  }
}

TEST_CASE("initial state: degenerate flat profile gives uniform ambient") {
  PlantParams p = nominal_params();
  InitialProfileSpec prof;
  prof.peak_temp = p.t_ambient;
  PlantState s = initial_hot_shutdown_state(p, prof);
  for (int i = 0; i < kNodesPerHalf; ++i) {
    CHECK(s.shell_upper[static_cast<std::size_t>(i)] == Approx(p.t_ambient));
    CHECK(s.shell_lower[static_cast<std::size_t>(i)] == Approx(p.t_ambient));
  }
  for (double b : s.blanket) CHECK(b == Approx(p.t_ambient));
  CHECK(s.rotor == Approx(p.t_ambient));
}

TEST_CASE("initial state: hot shutdown starts with zero differential, equilibrated blankets") {
  PlantParams p = nominal_params();
  PlantState s = initial_hot_shutdown_state(p, hot_profile());
  for (int i = 0; i < kNodesPerHalf; ++i)
    CHECK(s.shell_upper[static_cast<std::size_t>(i)] == s.shell_lower[static_cast<std::size_t>(i)]);
  for (int z = 0; z < kZones; ++z)
    CHECK(s.blanket[static_cast<std::size_t>(z)] == s.zone_shell(z));
  // Peak near mid-shell, cooler ends.
  CHECK(s.zone_shell(zone_index(Half::upper, 4)) > s.zone_shell(zone_index(Half::upper, 0)));
  CHECK(s.zone_shell(zone_index(Half::upper, 4)) > s.zone_shell(zone_index(Half::upper, 9)));
  CHECK(s.rotor > p.t_ambient);
}

TEST_CASE("initial state: peak below ambient is rejected") {
  PlantParams p = nominal_params();
  InitialProfileSpec prof;
  prof.peak_temp = p.t_ambient - 5.0;
  CHECK_THROWS_AS(initial_hot_shutdown_state(p, prof), param_error);
}

TEST_CASE("step: non-finite input names the offending component") {
  PlantParams p = nominal_params();
  ThermalPlant plant(p, 60.0);
  PlantState s = initial_hot_shutdown_state(p, hot_profile());
  s.shell_lower[4] = std::nan("");
  try {
    plant.step(s, HeaterCommand::all_off());
    FAIL("expected numeric_error");
  } catch (const numeric_error& e) {
    CHECK(std::string(e.what()).find("shell_lower[4]") != std::string::npos);
  }
}

TEST_CASE("plant params: invariants are enforced") {
  PlantParams p = nominal_params();
  p.heater_power[3] = 0.0;
  CHECK_THROWS_AS(p.validate(), param_error);

  p = nominal_params();
  // Lower half must not lose less than the upper half at the same station.
  p.a_shell_ambient[static_cast<std::size_t>(zone_index(Half::lower, 2))] = 0.5;
  CHECK_THROWS_AS(p.validate(), param_error);

  p = nominal_params();
  p.alpha *= 1.5;  // breaks alpha = k_cond * node_volume / node_heat_capacity
  CHECK_THROWS_AS(p.validate(), param_error);
}
