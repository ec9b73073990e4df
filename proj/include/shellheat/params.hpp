#pragma once

#include <array>
#include <cmath>
#include <string>

#include "shellheat/errors.hpp"

namespace shellheat {

inline constexpr int kZonesPerHalf = 10;
inline constexpr int kZones = 2 * kZonesPerHalf;
// Heated zone nodes plus one unheated half-cell at each shell end. The end
// regions carry no blankets, no thermocouples and no modeled surface losses;
// they participate only through axial conduction.
inline constexpr int kNodesPerHalf = kZonesPerHalf + 2;

enum class Half : int { upper = 0, lower = 1 };

/// Zone numbering: 0..9 upper half (axial, inlet end -> generator end),
/// 10..19 lower half in the same axial order.
inline int zone_index(Half half, int axial) { return static_cast<int>(half) * kZonesPerHalf + axial; }
inline Half zone_half(int zone) { return zone < kZonesPerHalf ? Half::upper : Half::lower; }
inline int zone_axial(int zone) { return zone % kZonesPerHalf; }

/// Geometry, material and heat-transfer data for the shell halves, the 20
/// heating blankets and the rotor. All SI; temperatures in kelvin.
struct PlantParams {
  double alpha = 4.6e-6;           // shell thermal diffusivity (m^2/s)
  double k_cond = 18.0;            // shell thermal conductivity (W/(m K))
  double shell_length = 8.0;       // heated axial span (m)
  double node_volume = 0.512;      // shell material volume per zone node (m^3)
  double node_heat_capacity = 2.0e6;  // per zone node (J/K)

  std::array<double, kZones> blanket_heat_capacity{};  // J/K
  std::array<double, kZones> heater_power{};           // W when on
  std::array<double, kZones> h_contact{};              // blanket-shell contact coefficient (W/(m^2 K))
  std::array<double, kZones> a_contact{};              // contact area (m^2)
  std::array<double, kZones> h_blanket_ambient{};      // blanket -> ambient convection
  std::array<double, kZones> a_blanket_ambient{};
  std::array<double, kZones> h_shell_ambient{};        // direct shell -> ambient loss
  std::array<double, kZones> a_shell_ambient{};        // lower half carries more surface
  std::array<double, kZones> h_rotor{};                // rotor <-> shell convection
  std::array<double, kZones> a_rotor{};

  double rotor_heat_capacity = 1.6e7;  // J/K
  double t_ambient = 298.15;           // K

  /// Axial node spacing: one zone node per tenth of the heated span.
  double h_node() const { return shell_length / kZonesPerHalf; }

  /// Axial conductance between adjacent shell nodes (W/K).
  double axial_conductance() const { return k_cond * node_volume / (h_node() * h_node()); }

  void validate() const {
    auto pos = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v))
        throw param_error(std::string("plant: ") + name + " must be strictly positive");
    };
    pos(alpha, "alpha");
    pos(k_cond, "k_cond");
    pos(shell_length, "shell_length");
    pos(node_volume, "node_volume");
    pos(node_heat_capacity, "node_heat_capacity");
    pos(rotor_heat_capacity, "rotor_heat_capacity");
    pos(t_ambient, "t_ambient");
    auto pos_arr = [&](const std::array<double, kZones>& a, const char* name) {
      for (double v : a) pos(v, name);
    };
    pos_arr(blanket_heat_capacity, "blanket_heat_capacity");
    pos_arr(heater_power, "heater_power");
    pos_arr(h_contact, "h_contact");
    pos_arr(a_contact, "a_contact");
    pos_arr(h_blanket_ambient, "h_blanket_ambient");
    pos_arr(a_blanket_ambient, "a_blanket_ambient");
    pos_arr(h_shell_ambient, "h_shell_ambient");
    pos_arr(a_shell_ambient, "a_shell_ambient");
    pos_arr(h_rotor, "h_rotor");
    pos_arr(a_rotor, "a_rotor");
    // The lower shell has more exposed surface than the upper at every
    // station; this asymmetry is what drives the natural differential.
    for (int a = 0; a < kZonesPerHalf; ++a) {
      if (a_shell_ambient[static_cast<std::size_t>(zone_index(Half::lower, a))] <
          a_shell_ambient[static_cast<std::size_t>(zone_index(Half::upper, a))])
        throw param_error("plant: lower-half a_shell_ambient must be >= upper-half at axial " +
                          std::to_string(a));
    }
    // alpha, k_cond and the per-node volume/capacity describe one material;
    // keep them consistent so the diffusion operator and the energy balance
    // agree: node_heat_capacity = k_cond * node_volume / alpha.
    const double implied = k_cond * node_volume / alpha;
    if (std::fabs(implied - node_heat_capacity) > 1e-6 * node_heat_capacity)
      throw param_error("plant: alpha inconsistent with k_cond*node_volume/node_heat_capacity");
  }
};

/// Nominal parameter set. Magnitudes are sized for a large single-shell unit
/// under insulation: multi-day cooldown, mm-scale deflections, heaters able
/// to carry a zone against several times its nominal direct losses. The
/// asymmetries (lower-half surface 1.5x, rotor coupling biased to the lower
/// half) reproduce the characteristic uncontrolled cooldown shape.
inline PlantParams nominal_params() {
  PlantParams p;
  p.alpha = 4.6e-6;
  p.k_cond = 18.0;
  p.shell_length = 8.0;
  p.node_volume = 0.512;
  p.node_heat_capacity = p.k_cond * p.node_volume / p.alpha;  // ~2.0e6 J/K
  p.rotor_heat_capacity = 1.6e7;
  p.t_ambient = 298.15;
  for (int z = 0; z < kZones; ++z) {
    const auto k = static_cast<std::size_t>(z);
    const bool lower = zone_half(z) == Half::lower;
    p.blanket_heat_capacity[k] = 1.0e5;
    p.heater_power[k] = 5300.0;
    // Lower blankets hang in compression against the casing and make better
    // contact; upper blankets sit looser. The weaker upper coupling lets the
    // upper blankets sag further below their zones right after shutdown,
    // which produces the brief bottom-hot dip seen before the long top-hot
    // cooldown era.
    p.h_contact[k] = lower ? 35.0 : 20.0;
    p.a_contact[k] = 2.0;
    p.h_blanket_ambient[k] = 3.5;
    p.a_blanket_ambient[k] = 2.0;
    p.h_shell_ambient[k] = 1.2;
    p.a_shell_ambient[k] = lower ? 1.5 : 1.0;
    p.h_rotor[k] = lower ? 1.05 : 0.70;
    p.a_rotor[k] = 1.5;
  }
  return p;
}

}  // namespace shellheat
