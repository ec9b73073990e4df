#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "shellheat/errors.hpp"
#include "shellheat/params.hpp"
#include "shellheat/rng.hpp"
#include "shellheat/simulate.hpp"

namespace shellheat {

/// One fault assignment for a scenario run.
struct FaultSpec {
  std::vector<int> failed_off;   // heaters that never energize
  std::vector<int> stuck_on;     // heaters that are always energized
  std::vector<int> airgap_zones; // zones with degraded blanket contact
  double airgap_factor = 20.0;   // contact resistance multiplier
  double lower_loss_multiplier = 1.0;  // scales lower-half shell-to-ambient losses

  void validate() const {
    auto check_zones = [](const std::vector<int>& zs, const char* name) {
      for (int z : zs)
        if (z < 0 || z >= kZones)
          throw param_error(std::string("fault: ") + name + " zone index out of range");
    };
    check_zones(failed_off, "failed_off");
    check_zones(stuck_on, "stuck_on");
    check_zones(airgap_zones, "airgap_zones");
    for (int z : failed_off)
      for (int s : stuck_on)
        if (z == s) throw param_error("fault: a heater cannot be both failed off and stuck on");
    if (!(airgap_factor >= 1.0)) throw param_error("fault: airgap_factor must be >= 1");
    if (!(lower_loss_multiplier > 0.0))
      throw param_error("fault: lower_loss_multiplier must be positive");
  }

  CommandOverride command_override() const {
    CommandOverride ov;
    for (int z : failed_off) ov.force_off[static_cast<std::size_t>(z)] = true;
    for (int z : stuck_on) ov.force_on[static_cast<std::size_t>(z)] = true;
    return ov;
  }

  std::string describe() const {
    auto join = [](const std::vector<int>& v) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(v[i]);
      }
      return s;
    };
    std::string s;
    if (!failed_off.empty()) s += "off=" + join(failed_off);
    if (!stuck_on.empty()) s += (s.empty() ? "" : " ") + std::string("stuck=") + join(stuck_on);
    if (!airgap_zones.empty()) s += (s.empty() ? "" : " ") + std::string("airgap=") + join(airgap_zones);
    if (lower_loss_multiplier != 1.0)
      s += (s.empty() ? "" : " ") + std::string("loss_x=") + std::to_string(lower_loss_multiplier);
    return s.empty() ? "nominal" : s;
  }
};

/// Multiplicative in-process variability on the heat transfer coefficients:
/// every coefficient within 25% of nominal, contact coefficients within 50%
/// (installation quality dominates the blanket-to-shell interface).
struct VariabilitySample {
  std::array<double, kZones> h_contact_factor{};
  std::array<double, kZones> h_shell_ambient_factor{};
  std::array<double, kZones> h_blanket_ambient_factor{};
  std::array<double, kZones> h_rotor_factor{};
  std::uint64_t seed = 0;

  static VariabilitySample unit() {
    VariabilitySample v;
    v.h_contact_factor.fill(1.0);
    v.h_shell_ambient_factor.fill(1.0);
    v.h_blanket_ambient_factor.fill(1.0);
    v.h_rotor_factor.fill(1.0);
    return v;
  }

  static VariabilitySample draw(std::uint64_t seed) {
    VariabilitySample v;
    v.seed = seed;
    SplitMix64 rng(seed);
    for (int z = 0; z < kZones; ++z) v.h_contact_factor[static_cast<std::size_t>(z)] = rng.uniform(0.5, 1.5);
    for (int z = 0; z < kZones; ++z)
      v.h_shell_ambient_factor[static_cast<std::size_t>(z)] = rng.uniform(0.75, 1.25);
    for (int z = 0; z < kZones; ++z)
      v.h_blanket_ambient_factor[static_cast<std::size_t>(z)] = rng.uniform(0.75, 1.25);
    for (int z = 0; z < kZones; ++z) v.h_rotor_factor[static_cast<std::size_t>(z)] = rng.uniform(0.75, 1.25);
    return v;
  }
};

/// Applies variability and plant-side faults to a copy of the nominal
/// parameters. Actuator faults (failed/stuck heaters) act on the command
/// path instead, via FaultSpec::command_override().
inline PlantParams apply_scenario(PlantParams p, const FaultSpec& fault,
                                  const VariabilitySample& var) {
  fault.validate();
  for (int z = 0; z < kZones; ++z) {
    const auto k = static_cast<std::size_t>(z);
    p.h_contact[k] *= var.h_contact_factor[k];
    p.h_shell_ambient[k] *= var.h_shell_ambient_factor[k];
    p.h_blanket_ambient[k] *= var.h_blanket_ambient_factor[k];
    p.h_rotor[k] *= var.h_rotor_factor[k];
  }
  for (int z : fault.airgap_zones)
    p.h_contact[static_cast<std::size_t>(z)] /= fault.airgap_factor;
  for (int a = 0; a < kZonesPerHalf; ++a)
    p.a_shell_ambient[static_cast<std::size_t>(zone_index(Half::lower, a))] *=
        fault.lower_loss_multiplier;
  return p;
}

}  // namespace shellheat
