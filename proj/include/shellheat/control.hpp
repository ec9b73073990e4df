#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>

#include "shellheat/beam.hpp"
#include "shellheat/errors.hpp"
#include "shellheat/params.hpp"
#include "shellheat/plant.hpp"

namespace shellheat {

inline constexpr int kBeamElements = 5;

/// Two-loop controller configuration: per-zone on/off relays track
/// temperature references; the references are the axial hold profile plus a
/// deflection-feedback correction from the beam model.
struct ControllerConfig {
  // Outer loop: per-element deflection error e = y_desired - y_estimated is
  // multiplied by the square gain matrix, then converted to reference trims.
  std::array<std::array<double, kBeamElements>, kBeamElements> k_outer{};  // dimensionless
  double gain_scale = 2.4e5;      // K of reference trim per metre of gained error
  double integral_scale = 0.05;   // K of trim per metre-second of accumulated gained error
  double integral_trim_cap = 150.0;  // K, anti-windup clamp on the integral trim
  double error_filter_tau = 300.0;   // s, first-order filter on the deflection error
  // Errors inside the deadzone draw no correction: the references stay on the
  // hold profile and the shell keeps cooling naturally instead of chasing
  // relay ripple with heat in both halves.
  double error_deadzone = 2.0e-5;    // m
  // References may not run further than this from the zone measurement: the
  // trim keeps its sign authority while the reference stays where the relay
  // can act on it. Must exceed the deadband, which makes the clamp decision-
  // neutral whenever the trim is zero.
  double ref_track_margin = 3.6;  // K, 0 disables tracking

  double hold_min = 533.15;            // K, minimum hold temperature (260 C)
  std::array<double, kZones> natural_profile{};  // per-zone axial reference offsets (K)
  double deadband = 2.0;               // relay hysteresis half-width (K)
  double min_dwell = 300.0;            // s, minimum time between relay switches
  double ref_min = 298.15;             // K, reference clamp (ambient)
  double ref_max = 893.15;             // K (620 C)
  std::array<double, kBeamElements> y_desired{};  // m, default zero
  bool outer_loop_enabled = true;
  bool heaters_enabled = true;

  static ControllerConfig defaults(double t_ambient) {
    ControllerConfig c;
    for (int i = 0; i < kBeamElements; ++i)
      c.k_outer[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 50.0;
    c.ref_min = t_ambient;
    return c;
  }

  void validate() const {
    if (!(deadband > 0.0)) throw param_error("controller: deadband must be positive");
    if (min_dwell < 0.0) throw param_error("controller: min_dwell must be >= 0");
    if (!(ref_max > ref_min)) throw param_error("controller: ref_max must exceed ref_min");
    if (hold_min < ref_min) throw param_error("controller: hold_min below ambient");
    if (!(error_filter_tau >= 0.0)) throw param_error("controller: error_filter_tau must be >= 0");
    if (integral_trim_cap < 0.0) throw param_error("controller: integral_trim_cap must be >= 0");
    if (ref_track_margin != 0.0 && !(ref_track_margin > deadband))
      throw param_error("controller: ref_track_margin must be 0 or exceed the deadband");
    if (error_deadzone < 0.0) throw param_error("controller: error_deadzone must be >= 0");
    for (const auto& row : k_outer)
      for (double v : row)
        if (!std::isfinite(v)) throw param_error("controller: k_outer must be finite");
  }

  /// Hold reference for a zone: minimum hold temperature shaped by the
  /// shell's natural axial profile, never below ambient.
  double hold_reference(int zone) const {
    return std::max(hold_min + natural_profile[static_cast<std::size_t>(zone)], ref_min);
  }
};

struct ControllerState {
  std::array<bool, kZones> relay_on{};
  std::array<double, kZones> dwell_elapsed{};       // s since last switch
  std::array<double, kZones> ref_current{};         // K
  std::array<double, kBeamElements> last_deflection_error{};  // filtered error (m)
  std::array<double, kBeamElements> integral_error{};         // accumulated error (m s)
  std::array<bool, kZones> fault_flagged{};         // non-finite measurement seen

  static ControllerState initial(const ControllerConfig& cfg) {
    ControllerState s;
    s.dwell_elapsed.fill(cfg.min_dwell);  // free to switch at the first sample
    for (int z = 0; z < kZones; ++z)
      s.ref_current[static_cast<std::size_t>(z)] = cfg.hold_reference(z);
    return s;
  }
};

/// Fixed-gain relay with hysteresis and a minimum dwell time. Turns on below
/// ref - deadband, off above ref + deadband, holds inside the band; any
/// commanded change is suppressed until the relay has dwelt min_dwell in its
/// present state (frequent cycling shortens relay life).
inline bool relay_update(double t_meas, double ref, bool was_on, double dwell,
                         const ControllerConfig& cfg) {
  bool want = was_on;
  if (t_meas < ref - cfg.deadband)
    want = true;
  else if (t_meas > ref + cfg.deadband)
    want = false;
  if (want != was_on && dwell < cfg.min_dwell) return was_on;
  return want;
}

/// Instantaneous outer-loop correction. Estimates the deflection profile from
/// the measured zone temperatures, compares element-midpoint deflections with
/// the desired profile, applies the gain matrix, and maps each element's
/// correction to its four zones with opposite signs on the two halves (the
/// half that is too hot gets its references lowered, the other raised).
inline std::array<double, kZones> outer_loop(std::span<const double> t_upper,
                                             std::span<const double> t_lower,
                                             const ControllerConfig& cfg, const BeamSpec& beam) {
  const auto d_t = zone_to_element_dt(t_upper, t_lower);
  const auto profile = solve_beam(d_t, beam);

  std::array<double, kBeamElements> err{};
  for (int j = 0; j < kBeamElements; ++j)
    err[static_cast<std::size_t>(j)] =
        cfg.y_desired[static_cast<std::size_t>(j)] - profile.elem_mid[static_cast<std::size_t>(j)];

  std::array<double, kZones> offsets{};
  for (int j = 0; j < kBeamElements; ++j) {
    double gained = 0.0;
    for (int m = 0; m < kBeamElements; ++m)
      gained += cfg.k_outer[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] *
                err[static_cast<std::size_t>(m)];
    const double trim = cfg.gain_scale * gained;
    for (int a = 2 * j; a < 2 * j + 2; ++a) {
      // Positive differential (top hot) gives negative y and positive error
      // under the model's sign convention; the upper half must then be
      // lowered, so the upper trim carries the minus sign.
      offsets[static_cast<std::size_t>(zone_index(Half::upper, a))] = -trim;
      offsets[static_cast<std::size_t>(zone_index(Half::lower, a))] = trim;
    }
  }
  return offsets;
}

/// One controller sample: updates the outer-loop error states, shapes the
/// per-zone references, runs the relays against the zone thermocouples
/// (zone shell-node temperatures) and returns the binary heater command.
inline std::pair<HeaterCommand, ControllerState> controller_step(const PlantState& meas,
                                                                 const ControllerState& state,
                                                                 const ControllerConfig& cfg,
                                                                 const BeamSpec& beam, double dt) {
  cfg.validate();
  ControllerState next = state;

  std::array<double, kZonesPerHalf> upper = meas.zone_temps(Half::upper);
  std::array<double, kZonesPerHalf> lower = meas.zone_temps(Half::lower);

  // Outer loop: filtered + integrated deflection error.
  std::array<double, kZones> offsets{};
  if (cfg.outer_loop_enabled) {
    bool finite = true;
    for (double v : upper) finite = finite && std::isfinite(v);
    for (double v : lower) finite = finite && std::isfinite(v);
    if (finite) {
      const auto d_t = zone_to_element_dt(upper, lower);
      const auto profile = solve_beam(d_t, beam);
      for (int j = 0; j < kBeamElements; ++j) {
        const auto k = static_cast<std::size_t>(j);
        const double e = cfg.y_desired[k] - profile.elem_mid[k];
        if (cfg.error_filter_tau > 0.0) {
          const double w = dt / (cfg.error_filter_tau + dt);
          next.last_deflection_error[k] += w * (e - next.last_deflection_error[k]);
        } else {
          next.last_deflection_error[k] = e;
        }
        const double fe = next.last_deflection_error[k];
        const double dz = std::clamp(fe, -cfg.error_deadzone, cfg.error_deadzone);
        next.integral_error[k] += dt * (fe - dz);
      }
    }
    for (int j = 0; j < kBeamElements; ++j) {
      double gained_f = 0.0;
      double gained_i = 0.0;
      for (int m = 0; m < kBeamElements; ++m) {
        const double kjm = cfg.k_outer[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)];
        const double fe = next.last_deflection_error[static_cast<std::size_t>(m)];
        gained_f += kjm * (fe - std::clamp(fe, -cfg.error_deadzone, cfg.error_deadzone));
        gained_i += kjm * next.integral_error[static_cast<std::size_t>(m)];
      }
      double trim_i = cfg.integral_scale * gained_i;
      if (cfg.integral_trim_cap > 0.0 && std::fabs(trim_i) > cfg.integral_trim_cap) {
        // Anti-windup back-calculation: absorb the excess into this element's
        // accumulated error so the stored state matches the applied trim
        // (exact for the diagonal default gain matrix).
        const double capped = std::copysign(cfg.integral_trim_cap, trim_i);
        const double kjj = cfg.k_outer[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
        if (kjj != 0.0 && cfg.integral_scale != 0.0)
          next.integral_error[static_cast<std::size_t>(j)] -=
              (trim_i - capped) / (cfg.integral_scale * kjj);
        trim_i = capped;
      }
      const double trim = cfg.gain_scale * gained_f + trim_i;
      for (int a = 2 * j; a < 2 * j + 2; ++a) {
        offsets[static_cast<std::size_t>(zone_index(Half::upper, a))] = -trim;
        offsets[static_cast<std::size_t>(zone_index(Half::lower, a))] = trim;
      }
    }
  }

  HeaterCommand cmd;
  for (int z = 0; z < kZones; ++z) {
    const auto k = static_cast<std::size_t>(z);
    const double t_meas = meas.zone_shell(z);
    double ref = cfg.hold_reference(z) + offsets[k];
    if (cfg.ref_track_margin > 0.0 && std::isfinite(t_meas))
      ref = std::clamp(ref, t_meas - cfg.ref_track_margin, t_meas + cfg.ref_track_margin);
    ref = std::clamp(ref, cfg.ref_min, cfg.ref_max);
    next.ref_current[k] = ref;

    next.dwell_elapsed[k] = state.dwell_elapsed[k] + dt;
    bool on;
    if (!std::isfinite(t_meas)) {
      // A dead thermocouple reads non-finite: fail the zone safe (off) for
      // this sample and flag it.
      on = false;
      next.fault_flagged[k] = true;
    } else {
      on = relay_update(t_meas, ref, state.relay_on[k], next.dwell_elapsed[k], cfg);
    }
    if (!cfg.heaters_enabled) on = false;
    if (on != state.relay_on[k]) next.dwell_elapsed[k] = 0.0;
    next.relay_on[k] = on;
    cmd.on[k] = on;
  }
  return {cmd, next};
}

}  // namespace shellheat
