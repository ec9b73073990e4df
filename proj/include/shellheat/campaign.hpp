#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "shellheat/control.hpp"
#include "shellheat/errors.hpp"
#include "shellheat/faults.hpp"
#include "shellheat/rng.hpp"
#include "shellheat/simulate.hpp"
#include "shellheat/stats.hpp"

namespace shellheat {

/// All possible failure combinations of k zones out of `zones`, in
/// lexicographic order of the index sets.
inline std::vector<std::vector<int>> enumerate_failures(int k, int zones = kZones) {
  if (k < 0 || k > zones) throw param_error("enumerate_failures: k out of range");
  std::vector<std::vector<int>> out;
  std::vector<int> combo(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) combo[static_cast<std::size_t>(i)] = i;
  if (k == 0) {
    out.push_back({});
    return out;
  }
  while (true) {
    out.push_back(combo);
    int i = k - 1;
    while (i >= 0 && combo[static_cast<std::size_t>(i)] == zones - k + i) --i;
    if (i < 0) break;
    ++combo[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

/// Everything a scenario run needs besides its fault assignment. The baseline
/// normalization constant comes from the nominal uncontrolled run and is
/// shared by every scenario.
struct RunContext {
  PlantParams plant;
  ControllerConfig controller;
  BeamSpec beam;
  SimSettings sim;
  double baseline_peak = 0.0;  // m
};

struct ScenarioResult {
  int index = -1;
  std::string group;
  FaultSpec fault;
  std::uint64_t seed = 0;
  double p2p_pct = 0.0;       // peak-to-peak midspan deflection, % of baseline peak
  double peak_pct = 0.0;      // max |y_mid|, % of baseline peak
  double min_zone_temp = 0.0; // K
  double max_zone_temp = 0.0; // K
};

/// Runs one fault scenario: applies the variability sample and the fault to
/// the nominal plant, simulates the controlled cooldown, and reports the
/// deflection extrema as percentages of the baseline peak.
inline ScenarioResult run_scenario(const FaultSpec& fault, const VariabilitySample& var,
                                   const RunContext& ctx) {
  if (!(ctx.baseline_peak > 0.0))
    throw param_error("run_scenario: baseline normalization missing (run the baseline first)");
  ScenarioResult res;
  res.fault = fault;
  res.seed = var.seed;
  const PlantParams plant = apply_scenario(ctx.plant, fault, var);
  const CommandOverride override_cmds = fault.command_override();
  SimSettings settings = ctx.sim;
  settings.record = false;
  RunResult run;
  try {
    run = run_closed_loop(plant, ctx.controller, ctx.beam, settings, &override_cmds);
  } catch (const numeric_error& e) {
    throw numeric_error(std::string(e.what()) + " [scenario fault: " + fault.describe() +
                        ", seed: " + std::to_string(var.seed) + "]");
  }
  res.p2p_pct = 100.0 * run.peak_to_peak() / ctx.baseline_peak;
  res.peak_pct = 100.0 * run.y_peak_abs / ctx.baseline_peak;
  res.min_zone_temp = run.min_zone_temp;
  res.max_zone_temp = run.max_zone_temp;
  return res;
}

struct CampaignSettings {
  int k_min = 1;
  int k_max = 4;
  std::uint64_t master_seed = 20240811ULL;
  int workers = 0;  // <= 0: hardware concurrency
  bool variability = true;
  int draws_per_combo = 1;
  int bins = 40;
  double bandwidth = 0.0;  // 0: Silverman

  void validate() const {
    if (k_min < 0 || k_max > kZones || k_min > k_max)
      throw param_error("campaign: k range invalid");
    if (draws_per_combo < 1) throw param_error("campaign: draws_per_combo must be >= 1");
  }
};

struct GroupSummary {
  std::string name;
  int count = 0;
  double worst_p2p = 0.0;
  double mean_p2p = 0.0;
  int worst_index = -1;
  DensityCurve density;  // empty x when count < 2
};

struct CampaignResult {
  std::vector<ScenarioResult> scenarios;  // ordered by scenario index
  std::vector<GroupSummary> groups;       // one per k in [k_min, k_max]
  double baseline_peak = 0.0;             // m
  double baseline_p2p_pct = 0.0;          // baseline peak-to-peak, % of its own peak
  std::uint64_t master_seed = 0;
};

/// Deterministic parallel map: scenarios are claimed from an atomic counter,
/// each is computed wholly inside one worker, results land in their slot.
/// The output is independent of the worker count.
template <typename Fn>
inline void parallel_for_indexed(std::size_t n, int workers, Fn&& fn) {
  int nw = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
  if (nw < 1) nw = 1;
  nw = std::min<std::size_t>(static_cast<std::size_t>(nw), n) > 0
           ? static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(nw), n))
           : 1;
  if (nw == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  pool.reserve(static_cast<std::size_t>(nw));
  for (int w = 0; w < nw; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

/// The brute-force robustness campaign: enumerates all failed-heater
/// combinations per group, pairs each with a seeded variability sample, runs
/// the closed loop for every scenario in parallel, and aggregates worst cases
/// and density estimates per group.
inline CampaignResult run_campaign(const RunContext& ctx, const CampaignSettings& settings,
                                   bool progress = false) {
  settings.validate();
  struct Pending {
    FaultSpec fault;
    std::string group;
  };
  std::vector<Pending> pending;
  for (int k = settings.k_min; k <= settings.k_max; ++k) {
    for (const auto& combo : enumerate_failures(k)) {
      for (int d = 0; d < settings.draws_per_combo; ++d) {
        Pending p;
        p.fault.failed_off = combo;
        p.group = "failed_" + std::to_string(k);
        pending.push_back(std::move(p));
      }
    }
  }

  CampaignResult out;
  out.master_seed = settings.master_seed;
  out.baseline_peak = ctx.baseline_peak;
  out.scenarios.resize(pending.size());

  std::atomic<std::size_t> done{0};
  parallel_for_indexed(pending.size(), settings.workers, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(settings.master_seed, static_cast<std::uint64_t>(i));
    const VariabilitySample var =
        settings.variability ? VariabilitySample::draw(seed) : VariabilitySample::unit();
    ScenarioResult res = run_scenario(pending[i].fault, var, ctx);
    res.index = static_cast<int>(i);
    res.group = pending[i].group;
    res.seed = seed;
    out.scenarios[i] = std::move(res);
    const std::size_t d = done.fetch_add(1) + 1;
    if (progress && (d % 500 == 0 || d == pending.size()))
      std::fprintf(stderr, "campaign: %zu/%zu scenarios\n", d, pending.size());
  });

  for (int k = settings.k_min; k <= settings.k_max; ++k) {
    GroupSummary g;
    g.name = "failed_" + std::to_string(k);
    std::vector<double> samples;
    for (const auto& s : out.scenarios) {
      if (s.group != g.name) continue;
      ++g.count;
      g.mean_p2p += s.p2p_pct;
      if (s.p2p_pct > g.worst_p2p) {
        g.worst_p2p = s.p2p_pct;
        g.worst_index = s.index;
      }
      samples.push_back(s.p2p_pct);
    }
    if (g.count > 0) g.mean_p2p /= g.count;
    if (samples.size() >= 2)
      g.density = estimate_pdf(samples, settings.bins, settings.bandwidth);
    out.groups.push_back(std::move(g));
  }
  return out;
}

/// One row of the fault-case summary table.
struct Table1Row {
  std::string label;
  int runs = 0;
  double worst_p2p = 0.0;
  std::string worst_detail;
};

struct Table1Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Table1Report {
  std::vector<Table1Row> rows;
  std::vector<Table1Check> checks;
  double baseline_p2p_pct = 0.0;
};

/// Runs the seven-case fault-tolerance suite: enumerated failed-heater groups
/// (worst case over one to four and over five simultaneous failures), stuck
/// relays, degraded blanket contact, and elevated lower-shell losses. Each
/// row reports the worst peak-to-peak deflection over its combinations, and
/// the qualitative orderings between rows are evaluated alongside.
inline Table1Report run_table1_suite(const RunContext& ctx, const CampaignSettings& settings,
                                     const std::vector<int>& airgap_zones, double airgap_factor,
                                     bool progress = false) {
  struct Pending {
    FaultSpec fault;
    int row = 0;
  };
  std::vector<Pending> pending;
  auto add = [&](FaultSpec f, int row) {
    Pending p;
    p.fault = std::move(f);
    p.row = row;
    pending.push_back(std::move(p));
  };

  // Rows 0..3: failed heaters, k = 1..4 (row 0 aggregates them).
  for (int k = 1; k <= 4; ++k)
    for (const auto& combo : enumerate_failures(k)) {
      FaultSpec f;
      f.failed_off = combo;
      add(std::move(f), 0);
    }
  // Row 1: five failed heaters.
  for (const auto& combo : enumerate_failures(5)) {
    FaultSpec f;
    f.failed_off = combo;
    add(std::move(f), 1);
  }
  // Row 2: one heater stuck on.
  for (const auto& combo : enumerate_failures(1)) {
    FaultSpec f;
    f.stuck_on = combo;
    add(std::move(f), 2);
  }
  // Row 3: two heaters stuck on.
  for (const auto& combo : enumerate_failures(2)) {
    FaultSpec f;
    f.stuck_on = combo;
    add(std::move(f), 3);
  }
  // Row 4: out-of-spec air gaps on the configured zones.
  {
    FaultSpec f;
    f.airgap_zones = airgap_zones;
    f.airgap_factor = airgap_factor;
    add(std::move(f), 4);
  }
  // Rows 5, 6: elevated lower-shell heat losses.
  {
    FaultSpec f6;
    f6.lower_loss_multiplier = 6.0;
    add(std::move(f6), 5);
    FaultSpec f7;
    f7.lower_loss_multiplier = 7.0;
    add(std::move(f7), 6);
  }

  std::vector<ScenarioResult> results(pending.size());
  std::atomic<std::size_t> done{0};
  parallel_for_indexed(pending.size(), settings.workers, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(settings.master_seed ^ 0x7461626c6531ULL,
                                           static_cast<std::uint64_t>(i));
    const VariabilitySample var =
        settings.variability ? VariabilitySample::draw(seed) : VariabilitySample::unit();
    results[i] = run_scenario(pending[i].fault, var, ctx);
    results[i].index = static_cast<int>(i);
    results[i].seed = seed;
    const std::size_t d = done.fetch_add(1) + 1;
    if (progress && (d % 2000 == 0 || d == pending.size()))
      std::fprintf(stderr, "table1: %zu/%zu scenarios\n", d, pending.size());
  });

  static const char* kLabels[7] = {
      "One to four failed heaters", "Five failed heaters",   "One heater stuck on",
      "Two heaters stuck on",       "Out-of-spec air gaps (2)", "6x heat losses - lower shell",
      "7x heat losses - lower shell"};

  Table1Report rep;
  rep.rows.resize(7);
  for (int r = 0; r < 7; ++r) rep.rows[static_cast<std::size_t>(r)].label = kLabels[r];
  for (std::size_t i = 0; i < pending.size(); ++i) {
    auto& row = rep.rows[static_cast<std::size_t>(pending[i].row)];
    ++row.runs;
    if (results[i].p2p_pct > row.worst_p2p) {
      row.worst_p2p = results[i].p2p_pct;
      row.worst_detail = pending[i].fault.describe();
    }
  }

  const double failed14 = rep.rows[0].worst_p2p;
  const double failed5 = rep.rows[1].worst_p2p;
  const double stuck1 = rep.rows[2].worst_p2p;
  const double stuck2 = rep.rows[3].worst_p2p;
  const double airgap = rep.rows[4].worst_p2p;
  const double loss6 = rep.rows[5].worst_p2p;
  const double loss7 = rep.rows[6].worst_p2p;
  auto check = [&](const std::string& name, bool pass, const std::string& detail) {
    rep.checks.push_back({name, pass, detail});
  };
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return std::string(buf);
  };
  check("failed_1_4 <= failed_5", failed14 <= failed5, fmt(failed14) + " vs " + fmt(failed5));
  check("failed_5 < loss_7x", failed5 < loss7, fmt(failed5) + " vs " + fmt(loss7));
  check("stuck_2 >= stuck_1", stuck2 >= stuck1, fmt(stuck2) + " vs " + fmt(stuck1));
  check("airgap <= failed_1_4 + 10", airgap <= failed14 + 10.0,
        fmt(airgap) + " vs " + fmt(failed14) + " + 10");
  check("loss_6x < 50", loss6 < 50.0, fmt(loss6));
  check("loss_7x > 50", loss7 > 50.0, fmt(loss7));
  return rep;
}

}  // namespace shellheat
