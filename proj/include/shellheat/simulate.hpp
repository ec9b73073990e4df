#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "shellheat/beam.hpp"
#include "shellheat/control.hpp"
#include "shellheat/errors.hpp"
#include "shellheat/params.hpp"
#include "shellheat/plant.hpp"

namespace shellheat {

struct SimSettings {
  double dt = 30.0;                 // plant step (s)
  double controller_period = 60.0;  // controller sample period (s)
  double horizon_hours = 150.0;
  InitialProfileSpec profile;
  bool record = true;  // keep the per-period trajectory in memory

  void validate() const {
    if (!(dt > 0.0)) throw param_error("simulation: dt must be positive");
    if (!(controller_period > 0.0)) throw param_error("simulation: controller period must be positive");
    const double ratio = controller_period / dt;
    if (std::fabs(ratio - std::round(ratio)) > 1e-9)
      throw param_error("simulation: controller period must be an integer multiple of dt");
    if (!(horizon_hours > 0.0)) throw param_error("simulation: horizon must be positive");
  }
};

/// One row per controller period: everything the trajectory CSV emits.
struct TrajectoryRecord {
  double t_h = 0.0;
  std::array<double, kZones> zone_temp{};     // K, zones 0..9 upper, 10..19 lower
  std::array<double, kZones> blanket_temp{};  // K
  double rotor_temp = 0.0;                    // K
  std::array<bool, kZones> relay{};
  std::array<double, kZones> reference{};     // K
  std::array<double, kBeamElements> element_dt{};  // K, upper minus lower
  double y_mid = 0.0;                         // m
};

/// Per-zone actuator faults applied between the controller and the plant:
/// a failed heater never energizes, a stuck relay keeps its heater on.
struct CommandOverride {
  std::array<bool, kZones> force_off{};
  std::array<bool, kZones> force_on{};

  HeaterCommand apply(HeaterCommand cmd) const {
    for (int z = 0; z < kZones; ++z) {
      const auto k = static_cast<std::size_t>(z);
      if (force_on[k]) cmd.on[k] = true;
      if (force_off[k]) cmd.on[k] = false;
    }
    return cmd;
  }
};

struct RunResult {
  std::vector<TrajectoryRecord> trajectory;  // empty unless settings.record
  double y_peak_abs = 0.0;   // max |y_mid| over the run (m)
  double y_max = 0.0;        // m
  double y_min = 0.0;        // m
  double min_zone_temp = 0.0;  // K, over zones and time
  double max_zone_temp = 0.0;
  std::array<int, kZones> relay_switches{};
  PlantState final_state;
  ControllerState final_controller;

  double peak_to_peak() const { return y_max - y_min; }
};

/// Runs the closed loop (or the natural cooldown when no controller is given)
/// from the hot-shutdown state over the configured horizon. The controller
/// samples once per period; the plant advances in dt substeps with the heater
/// command held constant in between.
inline RunResult run_closed_loop(const PlantParams& params,
                                 const std::optional<ControllerConfig>& ctrl,
                                 const BeamSpec& beam, const SimSettings& settings,
                                 const CommandOverride* override_cmds = nullptr) {
  settings.validate();
  params.validate();
  if (ctrl) ctrl->validate();

  ThermalPlant plant(params, settings.dt);
  PlantState state = initial_hot_shutdown_state(params, settings.profile);
  ControllerState cstate =
      ctrl ? ControllerState::initial(*ctrl) : ControllerState{};

  const int substeps = static_cast<int>(std::round(settings.controller_period / settings.dt));
  const int periods =
      static_cast<int>(std::ceil(settings.horizon_hours * 3600.0 / settings.controller_period));

  RunResult out;
  out.min_zone_temp = 1e30;
  out.max_zone_temp = -1e30;

  auto observe = [&](const PlantState& s, const HeaterCommand& cmd) {
    const auto upper = s.zone_temps(Half::upper);
    const auto lower = s.zone_temps(Half::lower);
    const auto d_t = zone_to_element_dt(upper, lower);
    const auto prof = solve_beam(d_t, beam);

    out.y_peak_abs = std::max(out.y_peak_abs, std::fabs(prof.y_mid));
    out.y_max = std::max(out.y_max, prof.y_mid);
    out.y_min = std::min(out.y_min, prof.y_mid);
    for (int z = 0; z < kZones; ++z) {
      const double t = s.zone_shell(z);
      out.min_zone_temp = std::min(out.min_zone_temp, t);
      out.max_zone_temp = std::max(out.max_zone_temp, t);
    }
    if (!settings.record) return;
    TrajectoryRecord rec;
    rec.t_h = s.sim_time / 3600.0;
    for (int z = 0; z < kZones; ++z) {
      const auto k = static_cast<std::size_t>(z);
      rec.zone_temp[k] = s.zone_shell(z);
      rec.blanket_temp[k] = s.blanket[k];
      rec.relay[k] = cmd.on[k];
      rec.reference[k] = cstate.ref_current[k];
    }
    rec.rotor_temp = s.rotor;
    for (int j = 0; j < kBeamElements; ++j)
      rec.element_dt[static_cast<std::size_t>(j)] = d_t[static_cast<std::size_t>(j)];
    rec.y_mid = prof.y_mid;
    out.trajectory.push_back(rec);
  };

  observe(state, HeaterCommand::all_off());

  std::array<bool, kZones> last_relay{};
  for (int p = 0; p < periods; ++p) {
    HeaterCommand cmd = HeaterCommand::all_off();
    if (ctrl) {
      auto [c, cs] = controller_step(state, cstate, *ctrl, beam, settings.controller_period);
      cmd = c;
      cstate = cs;
    }
    if (override_cmds) cmd = override_cmds->apply(cmd);
    for (int z = 0; z < kZones; ++z) {
      const auto k = static_cast<std::size_t>(z);
      if (p > 0 && cmd.on[k] != last_relay[k]) out.relay_switches[k]++;
      last_relay[k] = cmd.on[k];
    }
    for (int i = 0; i < substeps; ++i) state = plant.step(state, cmd);
    observe(state, cmd);
  }

  out.final_state = state;
  out.final_controller = cstate;
  return out;
}

/// The uncontrolled natural-cooldown reference run.
inline RunResult run_uncontrolled(const PlantParams& params, const BeamSpec& beam,
                                  SimSettings settings) {
  return run_closed_loop(params, std::nullopt, beam, settings);
}

/// Everything downstream consumers need from the baseline run: the deflection
/// normalization constant and the shell's natural axial temperature profile
/// at the moment mid-shell reaches the hold temperature.
struct BaselineArtifact {
  double peak_deflection = 0.0;   // m, max |y_mid|; the 100% normalization
  double peak_time_h = 0.0;
  double p2p = 0.0;               // m
  double t_star_h = 0.0;          // h, when mid-shell crosses hold_min
  bool reached_hold = false;
  std::array<double, kZones> natural_profile{};  // K offsets, mirrored per half
};

inline BaselineArtifact derive_baseline(const RunResult& run, double hold_min) {
  if (run.trajectory.empty()) throw param_error("baseline: trajectory recording required");
  BaselineArtifact art;
  for (const auto& rec : run.trajectory) {
    if (std::fabs(rec.y_mid) > art.peak_deflection) {
      art.peak_deflection = std::fabs(rec.y_mid);
      art.peak_time_h = rec.t_h;
    }
  }
  art.p2p = run.peak_to_peak();

  auto mid_temp = [](const TrajectoryRecord& rec) {
    return 0.25 * (rec.zone_temp[4] + rec.zone_temp[5] + rec.zone_temp[14] + rec.zone_temp[15]);
  };
  const TrajectoryRecord* at_hold = &run.trajectory.back();
  for (const auto& rec : run.trajectory) {
    if (mid_temp(rec) <= hold_min) {
      at_hold = &rec;
      art.reached_hold = true;
      break;
    }
  }
  art.t_star_h = at_hold->t_h;
  // Axial shape only: offsets relative to mid-shell, averaged over the two
  // halves so the hold references do not bake in the transient differential.
  const double mid = mid_temp(*at_hold);
  for (int a = 0; a < kZonesPerHalf; ++a) {
    const auto up = static_cast<std::size_t>(zone_index(Half::upper, a));
    const auto lo = static_cast<std::size_t>(zone_index(Half::lower, a));
    const double axial = 0.5 * (at_hold->zone_temp[up] + at_hold->zone_temp[lo]) - mid;
    art.natural_profile[up] = axial;
    art.natural_profile[lo] = axial;
  }
  return art;
}

}  // namespace shellheat
