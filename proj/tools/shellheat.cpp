// shellheat: turbine-shell heating-blanket clearance control simulator.
//
// Subcommands:
//   baseline  - natural cooldown; records the deflection normalization and
//               the natural axial temperature profile
//   simulate  - controlled cooldown with the two-loop controller
//   campaign  - brute-force failed-heater robustness campaign
//   table1    - seven-case fault suite with qualitative ordering checks
//   plot      - regenerate plot data and SVG figures from emitted CSVs

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "shellheat/campaign.hpp"
#include "shellheat/config.hpp"
#include "shellheat/csv.hpp"
#include "shellheat/plot.hpp"
#include "shellheat/version.hpp"

namespace fs = std::filesystem;
using namespace shellheat;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string baseline_path;
  double dt = 0.0;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = -1;
  bool no_outer_loop = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_campaign_flags) {
  cmd->add_option("--config", o.config_path, "Scenario config file (JSON)");
  cmd->add_option("--out", o.out_dir, "Output directory (overrides config)");
  cmd->add_option("--baseline", o.baseline_path,
                  "Baseline artifact JSON (default: <out>/baseline.json, computed inline if absent)");
  cmd->add_option("--dt", o.dt, "Plant time step override (s)");
  cmd->add_option("--horizon", o.horizon, "Simulation horizon override (h)");
  cmd->add_flag("--no-outer-loop", o.no_outer_loop, "Disable the deflection feedback loop");
  if (with_campaign_flags) {
    cmd->add_option("--seed", o.seed, "Campaign master seed")->each([&o](const std::string&) {
      o.seed_set = true;
    });
    cmd->add_option("--workers", o.workers, "Worker thread count (0 = hardware)");
  }
}

ScenarioConfig resolve_config(const CommonOpts& o, bool campaign_scope) {
  ScenarioConfig cfg = o.config_path.empty() ? ScenarioConfig{} : load_config(o.config_path);
  if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
  if (o.dt > 0.0) {
    SimSettings& s = campaign_scope ? cfg.campaign_sim : cfg.simulation;
    s.dt = o.dt;
    if (s.controller_period < s.dt) s.controller_period = s.dt;
  }
  if (o.horizon > 0.0) (campaign_scope ? cfg.campaign_sim : cfg.simulation).horizon_hours = o.horizon;
  if (o.seed_set) cfg.campaign.master_seed = o.seed;
  if (o.workers >= 0) cfg.campaign.workers = o.workers;
  if (o.no_outer_loop) cfg.controller.outer_loop_enabled = false;
  cfg.validate();
  return cfg;
}

void echo_resolved(const ScenarioConfig& cfg) {
  fs::create_directories(cfg.output_dir);
  save_config(cfg, cfg.output_dir + "/resolved_config.json");
}

/// Baseline artifact: loaded from disk when present, else computed inline.
BaselineArtifact obtain_baseline(const ScenarioConfig& cfg, const CommonOpts& o, bool* computed) {
  const std::string path =
      o.baseline_path.empty() ? cfg.output_dir + "/baseline.json" : o.baseline_path;
  if (fs::exists(path)) {
    if (computed) *computed = false;
    return load_baseline_json(path);
  }
  if (!o.baseline_path.empty())
    throw io_error("baseline artifact not found: " + o.baseline_path);
  if (computed) *computed = true;
  SimSettings settings = cfg.simulation;
  settings.horizon_hours = cfg.baseline_horizon_hours;
  settings.record = true;
  RunResult run = run_uncontrolled(cfg.plant, cfg.beam(), settings);
  return derive_baseline(run, cfg.controller.hold_min);
}

ControllerConfig controller_with_profile(const ScenarioConfig& cfg, const BaselineArtifact& art) {
  ControllerConfig ctrl = cfg.controller;
  if (!cfg.natural_profile) ctrl.natural_profile = art.natural_profile;
  return ctrl;
}

void emit_plots(const ScenarioConfig& cfg, const std::string& traj_path) {
  if (!cfg.emit_plots) return;
  const TrajectoryTable t = read_trajectory_csv(traj_path);
  const std::string stem = traj_path.substr(0, traj_path.rfind('.'));
  write_axial_profiles_csv(t, stem + "_axial_profiles.csv", {0.0, 37.0, 117.0, 298.0});
  write_deflection_series_csv(t, stem + "_deflection_series.csv");
  render_cooldown_svg(t, stem + ".svg");
}

int cmd_baseline(const CommonOpts& o) {
  ScenarioConfig cfg = resolve_config(o, false);
  echo_resolved(cfg);
  SimSettings settings = cfg.simulation;
  settings.horizon_hours = o.horizon > 0.0 ? o.horizon : cfg.baseline_horizon_hours;
  settings.record = true;

  RunResult run = run_uncontrolled(cfg.plant, cfg.beam(), settings);
  BaselineArtifact art = derive_baseline(run, cfg.controller.hold_min);
  save_baseline_json(art, cfg.controller.hold_min, cfg.output_dir + "/baseline.json");
  if (cfg.emit_trajectory) {
    const std::string traj = cfg.output_dir + "/baseline_trajectory.csv";
    write_trajectory_csv(traj, run.trajectory, art.peak_deflection);
    emit_plots(cfg, traj);
  }
  std::printf("baseline: peak |y_mid| = %.4f mm at t = %.1f h\n", art.peak_deflection * 1e3,
              art.peak_time_h);
  std::printf("baseline: peak-to-peak = %.1f%% of peak; mid-shell reaches hold at t = %.1f h\n",
              100.0 * art.p2p / art.peak_deflection, art.t_star_h);
  std::printf("baseline: artifact written to %s/baseline.json\n", cfg.output_dir.c_str());
  return 0;
}

int cmd_simulate(const CommonOpts& o) {
  ScenarioConfig cfg = resolve_config(o, false);
  echo_resolved(cfg);
  bool computed = false;
  BaselineArtifact art = obtain_baseline(cfg, o, &computed);
  if (computed)
    save_baseline_json(art, cfg.controller.hold_min, cfg.output_dir + "/baseline.json");
  ControllerConfig ctrl = controller_with_profile(cfg, art);

  SimSettings settings = cfg.simulation;
  settings.record = true;
  RunResult run = run_closed_loop(cfg.plant, ctrl, cfg.beam(), settings);
  const std::string traj = cfg.output_dir + "/trajectory.csv";
  if (cfg.emit_trajectory) {
    write_trajectory_csv(traj, run.trajectory, art.peak_deflection);
    emit_plots(cfg, traj);
  }
  std::printf("simulate: peak-to-peak midspan deflection = %.2f%% of baseline peak\n",
              100.0 * run.peak_to_peak() / art.peak_deflection);
  std::printf("simulate: zone temperatures within [%.1f, %.1f] C\n",
              run.min_zone_temp - kCelsiusOffset, run.max_zone_temp - kCelsiusOffset);
  return 0;
}

RunContext make_context(const ScenarioConfig& cfg, const BaselineArtifact& art) {
  RunContext ctx;
  ctx.plant = cfg.plant;
  ctx.controller = controller_with_profile(cfg, art);
  ctx.beam = cfg.beam();
  ctx.sim = cfg.campaign_sim;
  ctx.baseline_peak = art.peak_deflection;
  return ctx;
}

int cmd_campaign(const CommonOpts& o, const std::string& k_range) {
  ScenarioConfig cfg = resolve_config(o, true);
  if (!k_range.empty()) {
    const auto dots = k_range.find("..");
    if (dots == std::string::npos) throw config_invalid_error("--k-range expects A..B");
    cfg.campaign.k_min = std::stoi(k_range.substr(0, dots));
    cfg.campaign.k_max = std::stoi(k_range.substr(dots + 2));
    cfg.campaign.validate();
  }
  echo_resolved(cfg);
  bool computed = false;
  BaselineArtifact art = obtain_baseline(cfg, o, &computed);
  if (computed)
    save_baseline_json(art, cfg.controller.hold_min, cfg.output_dir + "/baseline.json");

  const RunContext ctx = make_context(cfg, art);
  CampaignResult result = run_campaign(ctx, cfg.campaign, true);
  result.baseline_p2p_pct = 100.0 * art.p2p / art.peak_deflection;

  write_campaign_csv(cfg.output_dir + "/campaign.csv", result);
  if (cfg.emit_density) {
    write_density_csv(cfg.output_dir + "/density.csv", result);
    if (cfg.emit_plots)
      render_density_svg(cfg.output_dir + "/density.csv", cfg.output_dir + "/density.svg");
  }
  std::printf("campaign: %zu scenarios, master seed %llu\n", result.scenarios.size(),
              static_cast<unsigned long long>(result.master_seed));
  for (const auto& g : result.groups)
    std::printf("  %-10s n=%5d  worst p2p = %7.2f%%  mean = %6.2f%%\n", g.name.c_str(), g.count,
                g.worst_p2p, g.mean_p2p);
  return 0;
}

int cmd_table1(const CommonOpts& o) {
  ScenarioConfig cfg = resolve_config(o, true);
  echo_resolved(cfg);
  bool computed = false;
  BaselineArtifact art = obtain_baseline(cfg, o, &computed);
  if (computed)
    save_baseline_json(art, cfg.controller.hold_min, cfg.output_dir + "/baseline.json");

  const RunContext ctx = make_context(cfg, art);
  Table1Report rep = run_table1_suite(ctx, cfg.campaign, cfg.airgap_zones, cfg.airgap_factor, true);
  rep.baseline_p2p_pct = 100.0 * art.p2p / art.peak_deflection;
  write_table1_csv(cfg.output_dir + "/table1.csv", rep);

  std::printf("%-30s %6s  %s\n", "case", "runs", "worst p2p (% of baseline peak)");
  for (const auto& row : rep.rows)
    std::printf("%-30s %6d  %7.1f   [%s]\n", row.label.c_str(), row.runs, row.worst_p2p,
                row.worst_detail.c_str());
  std::printf("checks:\n");
  bool all = true;
  for (const auto& c : rep.checks) {
    std::printf("  %-28s %s  (%s)\n", c.name.c_str(), c.pass ? "pass" : "FAIL", c.detail.c_str());
    all = all && c.pass;
  }
  return all ? 0 : static_cast<int>(ExitCode::numeric);
}

int cmd_plot(const std::string& trajectory, const std::string& density, const std::string& out) {
  fs::create_directories(out);
  if (!trajectory.empty()) {
    const TrajectoryTable t = read_trajectory_csv(trajectory);
    write_axial_profiles_csv(t, out + "/axial_profiles.csv", {0.0, 37.0, 117.0, 298.0});
    write_deflection_series_csv(t, out + "/deflection_series.csv");
    render_cooldown_svg(t, out + "/cooldown.svg");
    std::printf("plot: wrote %s/{axial_profiles.csv,deflection_series.csv,cooldown.svg}\n",
                out.c_str());
  }
  if (!density.empty()) {
    render_density_svg(density, out + "/density.svg");
    std::printf("plot: wrote %s/density.svg\n", out.c_str());
  }
  if (trajectory.empty() && density.empty())
    throw config_invalid_error("plot: provide --trajectory and/or --density");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"turbine-shell heating-blanket clearance control simulator"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonOpts base_o, sim_o, camp_o, tab_o;
  std::string k_range, plot_traj, plot_density, plot_out = "out";

  auto* baseline = app.add_subcommand("baseline", "Run the uncontrolled natural cooldown");
  add_common(baseline, base_o, false);
  auto* simulate = app.add_subcommand("simulate", "Run the controlled cooldown");
  add_common(simulate, sim_o, false);
  auto* campaign = app.add_subcommand("campaign", "Run the failed-heater robustness campaign");
  add_common(campaign, camp_o, true);
  campaign->add_option("--k-range", k_range, "Failure-count range, e.g. 1..4");
  auto* table1 = app.add_subcommand("table1", "Run the seven-case fault suite");
  add_common(table1, tab_o, true);
  auto* plot = app.add_subcommand("plot", "Regenerate plot data and figures from CSVs");
  plot->add_option("--trajectory", plot_traj, "Trajectory CSV to plot");
  plot->add_option("--density", plot_density, "Density CSV to plot");
  plot->add_option("--out", plot_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return static_cast<int>(ExitCode::usage);
  }

  try {
    if (baseline->parsed()) return cmd_baseline(base_o);
    if (simulate->parsed()) return cmd_simulate(sim_o);
    if (campaign->parsed()) return cmd_campaign(camp_o, k_range);
    if (table1->parsed()) return cmd_table1(tab_o);
    if (plot->parsed()) return cmd_plot(plot_traj, plot_density, plot_out);
  } catch (const config_missing_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(ExitCode::config_missing);
  } catch (const config_parse_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(ExitCode::config_parse);
  } catch (const config_invalid_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(ExitCode::config_invalid);
  } catch (const param_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(ExitCode::config_invalid);
  } catch (const numeric_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(ExitCode::numeric);
  } catch (const io_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(ExitCode::io);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return static_cast<int>(ExitCode::internal);
  }
  return static_cast<int>(ExitCode::usage);
}
