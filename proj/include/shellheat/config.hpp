#pragma once

#include <array>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "shellheat/beam.hpp"
#include "shellheat/campaign.hpp"
#include "shellheat/control.hpp"
#include "shellheat/errors.hpp"
#include "shellheat/params.hpp"
#include "shellheat/simulate.hpp"

namespace shellheat {

inline constexpr double kCelsiusOffset = 273.15;

/// Scenario file: one JSON document with per-block defaults. Absolute
/// temperatures are written in degrees Celsius (keys ending in _c) and
/// converted to kelvin on load; temperature differences are kelvin-sized
/// (keys ending in _k). Unknown keys are rejected.
struct ScenarioConfig {
  PlantParams plant = nominal_params();
  double beam_expansion_coeff = 1.2e-5;  // 1/K
  double beam_depth = 2.0;               // m
  ControllerConfig controller = ControllerConfig::defaults(plant.t_ambient);
  std::optional<std::array<double, kZones>> natural_profile;  // absent: derive from baseline
  SimSettings simulation;          // dt 30 s, period 60 s, horizon 150 h
  double baseline_horizon_hours = 300.0;
  CampaignSettings campaign;
  SimSettings campaign_sim;        // coarse grid for the brute-force runs
  std::vector<int> airgap_zones{zone_index(Half::lower, 4), zone_index(Half::lower, 5)};
  double airgap_factor = 20.0;
  std::string output_dir = "out";
  bool emit_trajectory = true;
  bool emit_density = true;
  bool emit_plots = true;

  ScenarioConfig() {
    campaign_sim.dt = 120.0;
    campaign_sim.controller_period = 120.0;
    campaign_sim.horizon_hours = 150.0;
    campaign_sim.record = false;
  }

  BeamSpec beam() const {
    return BeamSpec::uniform(kBeamElements, plant.shell_length, beam_expansion_coeff, beam_depth);
  }

  void validate() const {
    plant.validate();
    beam().validate();
    controller.validate();
    simulation.validate();
    campaign_sim.validate();
    campaign.validate();
    if (!(baseline_horizon_hours > 0.0))
      throw config_invalid_error("simulation.baseline_horizon_h must be positive");
    for (int z : airgap_zones)
      if (z < 0 || z >= kZones)
        throw config_invalid_error("campaign.airgap_zones: zone index out of range");
    if (!(airgap_factor >= 1.0))
      throw config_invalid_error("campaign.airgap_factor must be >= 1");
  }
};

namespace detail {

using nlohmann::json;

class KeyChecker {
public:
  KeyChecker(const json& j, std::string scope) : j_(j), scope_(std::move(scope)) {
    if (!j_.is_object())
      throw config_invalid_error("config: " + (scope_.empty() ? "root" : scope_) +
                                 " must be a JSON object");
  }

  ~KeyChecker() = default;

  /// Call after reading every known key: any leftover is a typo.
  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      bool known = false;
      for (const auto& k : seen_)
        if (k == key) known = true;
      if (!known)
        throw config_invalid_error("config: unknown key \"" + path(key) + "\"");
    }
  }

  bool has(const std::string& key) {
    seen_.push_back(key);
    return j_.contains(key);
  }

  const json& at(const std::string& key) const { return j_.at(key); }

  std::string path(const std::string& key) const {
    return scope_.empty() ? key : scope_ + "." + key;
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number())
      throw config_invalid_error("config: \"" + path(key) + "\" must be a number");
    return v.get<double>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean())
      throw config_invalid_error("config: \"" + path(key) + "\" must be a boolean");
    return v.get<bool>();
  }

  std::string text(const std::string& key, std::string fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string())
      throw config_invalid_error("config: \"" + path(key) + "\" must be a string");
    return v.get<std::string>();
  }

  /// Scalar-or-array per-zone field: a number broadcasts to all 20 zones.
  void zone_array(const std::string& key, std::array<double, kZones>& target) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (v.is_number()) {
      target.fill(v.get<double>());
      return;
    }
    if (v.is_array() && v.size() == kZones) {
      for (int z = 0; z < kZones; ++z) {
        if (!v[static_cast<std::size_t>(z)].is_number())
          throw config_invalid_error("config: \"" + path(key) + "\" entries must be numbers");
        target[static_cast<std::size_t>(z)] = v[static_cast<std::size_t>(z)].get<double>();
      }
      return;
    }
    throw config_invalid_error("config: \"" + path(key) + "\" must be a number or an array of " +
                               std::to_string(kZones));
  }

private:
  const json& j_;
  std::string scope_;
  std::vector<std::string> seen_;
};

inline json zone_json(const std::array<double, kZones>& a) {
  // Collapse to a scalar when uniform, keeping files readable.
  bool uniform = true;
  for (double v : a) uniform = uniform && v == a[0];
  if (uniform) return json(a[0]);
  json out = json::array();
  for (double v : a) out.push_back(v);
  return out;
}

}  // namespace detail

inline ScenarioConfig config_from_json(const nlohmann::json& root) {
  using detail::KeyChecker;
  ScenarioConfig cfg;

  KeyChecker top(root, "");
  if (top.has("plant")) {
    KeyChecker p(top.at("plant"), "plant");
    cfg.plant.alpha = p.number("alpha_m2_s", cfg.plant.alpha);
    cfg.plant.k_cond = p.number("k_cond_w_mk", cfg.plant.k_cond);
    cfg.plant.shell_length = p.number("shell_length_m", cfg.plant.shell_length);
    cfg.plant.node_volume = p.number("node_volume_m3", cfg.plant.node_volume);
    cfg.plant.node_heat_capacity = p.number("node_heat_capacity_j_k", cfg.plant.node_heat_capacity);
    cfg.plant.rotor_heat_capacity =
        p.number("rotor_heat_capacity_j_k", cfg.plant.rotor_heat_capacity);
    cfg.plant.t_ambient = p.number("t_ambient_c", cfg.plant.t_ambient - kCelsiusOffset) +
                          kCelsiusOffset;
    p.zone_array("blanket_heat_capacity_j_k", cfg.plant.blanket_heat_capacity);
    p.zone_array("heater_power_w", cfg.plant.heater_power);
    p.zone_array("h_contact_w_m2k", cfg.plant.h_contact);
    p.zone_array("a_contact_m2", cfg.plant.a_contact);
    p.zone_array("h_blanket_ambient_w_m2k", cfg.plant.h_blanket_ambient);
    p.zone_array("a_blanket_ambient_m2", cfg.plant.a_blanket_ambient);
    p.zone_array("h_shell_ambient_w_m2k", cfg.plant.h_shell_ambient);
    p.zone_array("a_shell_ambient_m2", cfg.plant.a_shell_ambient);
    p.zone_array("h_rotor_w_m2k", cfg.plant.h_rotor);
    p.zone_array("a_rotor_m2", cfg.plant.a_rotor);
    p.finish();
  }

  if (top.has("beam")) {
    KeyChecker b(top.at("beam"), "beam");
    cfg.beam_expansion_coeff = b.number("expansion_coeff_1_k", cfg.beam_expansion_coeff);
    cfg.beam_depth = b.number("depth_m", cfg.beam_depth);
    b.finish();
  }

  cfg.controller.ref_min = cfg.plant.t_ambient;
  if (top.has("controller")) {
    KeyChecker c(top.at("controller"), "controller");
    const double diag = c.number("outer_gain_diag", 50.0);
    for (int i = 0; i < kBeamElements; ++i)
      for (int j = 0; j < kBeamElements; ++j)
        cfg.controller.k_outer[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            i == j ? diag : 0.0;
    if (c.has("outer_gain_matrix")) {
      const auto& m = c.at("outer_gain_matrix");
      if (!m.is_array() || m.size() != kBeamElements)
        throw config_invalid_error("config: \"controller.outer_gain_matrix\" must be 5x5");
      for (int i = 0; i < kBeamElements; ++i) {
        const auto& row = m[static_cast<std::size_t>(i)];
        if (!row.is_array() || row.size() != kBeamElements)
          throw config_invalid_error("config: \"controller.outer_gain_matrix\" must be 5x5");
        for (int j = 0; j < kBeamElements; ++j)
          cfg.controller.k_outer[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
              row[static_cast<std::size_t>(j)].get<double>();
      }
    }
    cfg.controller.gain_scale = c.number("gain_scale_k_per_m", cfg.controller.gain_scale);
    cfg.controller.integral_scale =
        c.number("integral_scale_k_per_ms", cfg.controller.integral_scale);
    cfg.controller.integral_trim_cap =
        c.number("integral_trim_cap_k", cfg.controller.integral_trim_cap);
    cfg.controller.error_filter_tau = c.number("error_filter_tau_s", cfg.controller.error_filter_tau);
    cfg.controller.error_deadzone = c.number("error_deadzone_m", cfg.controller.error_deadzone);
    cfg.controller.hold_min = c.number("hold_min_c", cfg.controller.hold_min - kCelsiusOffset) +
                              kCelsiusOffset;
    cfg.controller.deadband = c.number("deadband_k", cfg.controller.deadband);
    cfg.controller.min_dwell = c.number("min_dwell_s", cfg.controller.min_dwell);
    cfg.controller.ref_max = c.number("ref_max_c", cfg.controller.ref_max - kCelsiusOffset) +
                             kCelsiusOffset;
    cfg.controller.ref_track_margin =
        c.number("ref_track_margin_k", cfg.controller.ref_track_margin);
    if (c.has("y_desired_m")) {
      const auto& v = c.at("y_desired_m");
      if (v.is_number()) {
        cfg.controller.y_desired.fill(v.get<double>());
      } else if (v.is_array() && v.size() == kBeamElements) {
        for (int j = 0; j < kBeamElements; ++j)
          cfg.controller.y_desired[static_cast<std::size_t>(j)] =
              v[static_cast<std::size_t>(j)].get<double>();
      } else {
        throw config_invalid_error("config: \"controller.y_desired_m\" must be a number or 5 numbers");
      }
    }
    if (c.has("natural_profile_k")) {
      const auto& v = c.at("natural_profile_k");
      if (!v.is_array() || v.size() != kZones)
        throw config_invalid_error("config: \"controller.natural_profile_k\" must have 20 entries");
      std::array<double, kZones> prof{};
      for (int z = 0; z < kZones; ++z)
        prof[static_cast<std::size_t>(z)] = v[static_cast<std::size_t>(z)].get<double>();
      cfg.natural_profile = prof;
      cfg.controller.natural_profile = prof;
    }
    cfg.controller.outer_loop_enabled = c.boolean("outer_loop", cfg.controller.outer_loop_enabled);
    cfg.controller.heaters_enabled = c.boolean("heaters_enabled", cfg.controller.heaters_enabled);
    c.finish();
  }

  if (top.has("simulation")) {
    KeyChecker s(top.at("simulation"), "simulation");
    cfg.simulation.dt = s.number("dt_s", cfg.simulation.dt);
    cfg.simulation.controller_period = s.number("controller_period_s", cfg.simulation.controller_period);
    cfg.simulation.horizon_hours = s.number("horizon_h", cfg.simulation.horizon_hours);
    cfg.baseline_horizon_hours = s.number("baseline_horizon_h", cfg.baseline_horizon_hours);
    if (s.has("profile")) {
      KeyChecker pr(s.at("profile"), "simulation.profile");
      cfg.simulation.profile.peak_temp =
          pr.number("peak_c", cfg.simulation.profile.peak_temp - kCelsiusOffset) + kCelsiusOffset;
      cfg.simulation.profile.edge_fraction =
          pr.number("edge_fraction", cfg.simulation.profile.edge_fraction);
      cfg.simulation.profile.center = pr.number("center", cfg.simulation.profile.center);
      cfg.simulation.profile.width = pr.number("width", cfg.simulation.profile.width);
      pr.finish();
    }
    cfg.campaign_sim.profile = cfg.simulation.profile;
    s.finish();
  }

  if (top.has("campaign")) {
    KeyChecker c(top.at("campaign"), "campaign");
    cfg.campaign.k_min = static_cast<int>(c.number("k_min", cfg.campaign.k_min));
    cfg.campaign.k_max = static_cast<int>(c.number("k_max", cfg.campaign.k_max));
    cfg.campaign.master_seed =
        static_cast<std::uint64_t>(c.number("master_seed", static_cast<double>(cfg.campaign.master_seed)));
    cfg.campaign.workers = static_cast<int>(c.number("workers", cfg.campaign.workers));
    cfg.campaign.variability = c.boolean("variability", cfg.campaign.variability);
    cfg.campaign.draws_per_combo =
        static_cast<int>(c.number("draws_per_combo", cfg.campaign.draws_per_combo));
    cfg.campaign.bins = static_cast<int>(c.number("bins", cfg.campaign.bins));
    cfg.campaign.bandwidth = c.number("bandwidth", cfg.campaign.bandwidth);
    cfg.campaign_sim.dt = c.number("dt_s", cfg.campaign_sim.dt);
    cfg.campaign_sim.controller_period =
        c.number("controller_period_s", cfg.campaign_sim.controller_period);
    cfg.campaign_sim.horizon_hours = c.number("horizon_h", cfg.campaign_sim.horizon_hours);
    if (c.has("airgap_zones")) {
      const auto& v = c.at("airgap_zones");
      if (!v.is_array())
        throw config_invalid_error("config: \"campaign.airgap_zones\" must be an array");
      cfg.airgap_zones.clear();
      for (const auto& z : v) cfg.airgap_zones.push_back(z.get<int>());
    }
    cfg.airgap_factor = c.number("airgap_factor", cfg.airgap_factor);
    c.finish();
  }

  if (top.has("output")) {
    KeyChecker o(top.at("output"), "output");
    cfg.output_dir = o.text("dir", cfg.output_dir);
    cfg.emit_trajectory = o.boolean("emit_trajectory", cfg.emit_trajectory);
    cfg.emit_density = o.boolean("emit_density", cfg.emit_density);
    cfg.emit_plots = o.boolean("emit_plots", cfg.emit_plots);
    o.finish();
  }
  top.finish();

  try {
    cfg.validate();
  } catch (const param_error& e) {
    throw config_invalid_error(std::string("config: ") + e.what());
  }
  return cfg;
}

inline nlohmann::json config_to_json(const ScenarioConfig& cfg) {
  using detail::zone_json;
  nlohmann::json j;
  auto& p = j["plant"];
  p["alpha_m2_s"] = cfg.plant.alpha;
  p["k_cond_w_mk"] = cfg.plant.k_cond;
  p["shell_length_m"] = cfg.plant.shell_length;
  p["node_volume_m3"] = cfg.plant.node_volume;
  p["node_heat_capacity_j_k"] = cfg.plant.node_heat_capacity;
  p["rotor_heat_capacity_j_k"] = cfg.plant.rotor_heat_capacity;
  p["t_ambient_c"] = cfg.plant.t_ambient - kCelsiusOffset;
  p["blanket_heat_capacity_j_k"] = zone_json(cfg.plant.blanket_heat_capacity);
  p["heater_power_w"] = zone_json(cfg.plant.heater_power);
  p["h_contact_w_m2k"] = zone_json(cfg.plant.h_contact);
  p["a_contact_m2"] = zone_json(cfg.plant.a_contact);
  p["h_blanket_ambient_w_m2k"] = zone_json(cfg.plant.h_blanket_ambient);
  p["a_blanket_ambient_m2"] = zone_json(cfg.plant.a_blanket_ambient);
  p["h_shell_ambient_w_m2k"] = zone_json(cfg.plant.h_shell_ambient);
  p["a_shell_ambient_m2"] = zone_json(cfg.plant.a_shell_ambient);
  p["h_rotor_w_m2k"] = zone_json(cfg.plant.h_rotor);
  p["a_rotor_m2"] = zone_json(cfg.plant.a_rotor);

  j["beam"]["expansion_coeff_1_k"] = cfg.beam_expansion_coeff;
  j["beam"]["depth_m"] = cfg.beam_depth;

  auto& c = j["controller"];
  c["outer_gain_matrix"] = cfg.controller.k_outer;
  c["gain_scale_k_per_m"] = cfg.controller.gain_scale;
  c["integral_scale_k_per_ms"] = cfg.controller.integral_scale;
  c["integral_trim_cap_k"] = cfg.controller.integral_trim_cap;
  c["error_filter_tau_s"] = cfg.controller.error_filter_tau;
  c["error_deadzone_m"] = cfg.controller.error_deadzone;
  c["hold_min_c"] = cfg.controller.hold_min - kCelsiusOffset;
  c["deadband_k"] = cfg.controller.deadband;
  c["min_dwell_s"] = cfg.controller.min_dwell;
  c["ref_max_c"] = cfg.controller.ref_max - kCelsiusOffset;
  c["ref_track_margin_k"] = cfg.controller.ref_track_margin;
  c["y_desired_m"] = cfg.controller.y_desired;
  if (cfg.natural_profile) c["natural_profile_k"] = *cfg.natural_profile;
  c["outer_loop"] = cfg.controller.outer_loop_enabled;
  c["heaters_enabled"] = cfg.controller.heaters_enabled;

  auto& s = j["simulation"];
  s["dt_s"] = cfg.simulation.dt;
  s["controller_period_s"] = cfg.simulation.controller_period;
  s["horizon_h"] = cfg.simulation.horizon_hours;
  s["baseline_horizon_h"] = cfg.baseline_horizon_hours;
  s["profile"]["peak_c"] = cfg.simulation.profile.peak_temp - kCelsiusOffset;
  s["profile"]["edge_fraction"] = cfg.simulation.profile.edge_fraction;
  s["profile"]["center"] = cfg.simulation.profile.center;
  s["profile"]["width"] = cfg.simulation.profile.width;

  auto& k = j["campaign"];
  k["k_min"] = cfg.campaign.k_min;
  k["k_max"] = cfg.campaign.k_max;
  k["master_seed"] = cfg.campaign.master_seed;
  k["workers"] = cfg.campaign.workers;
  k["variability"] = cfg.campaign.variability;
  k["draws_per_combo"] = cfg.campaign.draws_per_combo;
  k["bins"] = cfg.campaign.bins;
  k["bandwidth"] = cfg.campaign.bandwidth;
  k["dt_s"] = cfg.campaign_sim.dt;
  k["controller_period_s"] = cfg.campaign_sim.controller_period;
  k["horizon_h"] = cfg.campaign_sim.horizon_hours;
  k["airgap_zones"] = cfg.airgap_zones;
  k["airgap_factor"] = cfg.airgap_factor;

  auto& o = j["output"];
  o["dir"] = cfg.output_dir;
  o["emit_trajectory"] = cfg.emit_trajectory;
  o["emit_density"] = cfg.emit_density;
  o["emit_plots"] = cfg.emit_plots;
  return j;
}

/// Loads a scenario config. A missing file, a parse failure and an invariant
/// violation are distinct error types (distinct CLI exit codes). An empty or
/// whitespace-only file yields the all-defaults config.
inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_missing_error("config file not found: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  bool blank = true;
  for (char ch : text) blank = blank && (std::isspace(static_cast<unsigned char>(ch)) != 0);
  nlohmann::json root = nlohmann::json::object();
  if (!blank) {
    try {
      root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw config_parse_error("config parse error in " + path + ": " + e.what());
    }
  }
  try {
    return config_from_json(root);
  } catch (const nlohmann::json::exception& e) {
    throw config_invalid_error("config: " + std::string(e.what()));
  }
}

inline void save_config(const ScenarioConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path);
  out << config_to_json(cfg).dump(2) << "\n";
}

/// Baseline artifact: the normalization constant plus the natural axial
/// profile, recorded by the baseline command and consumed by every other one.
inline void save_baseline_json(const BaselineArtifact& art, double hold_min_k,
                               const std::string& path) {
  nlohmann::json j;
  j["schema"] = "baseline.v1";
  j["peak_deflection_m"] = art.peak_deflection;
  j["peak_deflection_mm"] = art.peak_deflection * 1e3;
  j["peak_time_h"] = art.peak_time_h;
  j["p2p_m"] = art.p2p;
  j["t_star_h"] = art.t_star_h;
  j["reached_hold"] = art.reached_hold;
  j["hold_min_c"] = hold_min_k - kCelsiusOffset;
  j["natural_profile_k"] = art.natural_profile;
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

inline BaselineArtifact load_baseline_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("baseline artifact not found: " + path +
                          " (run the baseline command first)");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw io_error("baseline artifact unreadable: " + path + ": " + e.what());
  }
  if (!j.contains("schema") || j["schema"] != "baseline.v1")
    throw io_error("baseline artifact has unexpected schema: " + path);
  BaselineArtifact art;
  art.peak_deflection = j.at("peak_deflection_m").get<double>();
  art.peak_time_h = j.at("peak_time_h").get<double>();
  art.p2p = j.at("p2p_m").get<double>();
  art.t_star_h = j.at("t_star_h").get<double>();
  art.reached_hold = j.at("reached_hold").get<bool>();
  const auto& prof = j.at("natural_profile_k");
  for (int z = 0; z < kZones; ++z)
    art.natural_profile[static_cast<std::size_t>(z)] =
        prof.at(static_cast<std::size_t>(z)).get<double>();
  return art;
}

}  // namespace shellheat
