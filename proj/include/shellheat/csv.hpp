#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "shellheat/campaign.hpp"
#include "shellheat/errors.hpp"
#include "shellheat/simulate.hpp"

namespace shellheat {

namespace detail {

class CsvFile {
public:
  explicit CsvFile(const std::string& path) : f_(std::fopen(path.c_str(), "w")), path_(path) {
    if (!f_) throw io_error("cannot write " + path);
  }
  ~CsvFile() {
    if (f_) std::fclose(f_);
  }
  CsvFile(const CsvFile&) = delete;
  CsvFile& operator=(const CsvFile&) = delete;

  void line(const std::string& s) { std::fprintf(f_, "%s\n", s.c_str()); }
  std::FILE* raw() { return f_; }

private:
  std::FILE* f_ = nullptr;
  std::string path_;
};

}  // namespace detail

inline std::string trajectory_header() {
  std::string h = "t_h";
  for (int z = 0; z < kZones; ++z) h += ",shell" + std::to_string(z) + "_c";
  for (int z = 0; z < kZones; ++z) h += ",blanket" + std::to_string(z) + "_c";
  h += ",rotor_c";
  for (int z = 0; z < kZones; ++z) h += ",relay" + std::to_string(z);
  for (int z = 0; z < kZones; ++z) h += ",ref" + std::to_string(z) + "_c";
  for (int j = 0; j < kBeamElements; ++j) h += ",dt_e" + std::to_string(j) + "_k";
  h += ",y_mid_mm,y_mid_pct";
  return h;
}

/// Trajectory CSV, one row per controller period. Deflection percentages are
/// relative to the baseline peak recorded in the file header, never rescaled.
inline void write_trajectory_csv(const std::string& path,
                                 const std::vector<TrajectoryRecord>& records,
                                 double baseline_peak_m) {
  detail::CsvFile f(path);
  f.line("# trajectory-schema: 1");
  char meta[64];
  std::snprintf(meta, sizeof meta, "# baseline_peak_mm: %.9g", baseline_peak_m * 1e3);
  f.line(meta);
  f.line(trajectory_header());
  for (const auto& r : records) {
    std::fprintf(f.raw(), "%.6f", r.t_h);
    for (int z = 0; z < kZones; ++z)
      std::fprintf(f.raw(), ",%.4f", r.zone_temp[static_cast<std::size_t>(z)] - 273.15);
    for (int z = 0; z < kZones; ++z)
      std::fprintf(f.raw(), ",%.4f", r.blanket_temp[static_cast<std::size_t>(z)] - 273.15);
    std::fprintf(f.raw(), ",%.4f", r.rotor_temp - 273.15);
    for (int z = 0; z < kZones; ++z)
      std::fprintf(f.raw(), ",%d", r.relay[static_cast<std::size_t>(z)] ? 1 : 0);
    for (int z = 0; z < kZones; ++z)
      std::fprintf(f.raw(), ",%.4f", r.reference[static_cast<std::size_t>(z)] - 273.15);
    for (int j = 0; j < kBeamElements; ++j)
      std::fprintf(f.raw(), ",%.5f", r.element_dt[static_cast<std::size_t>(j)]);
    std::fprintf(f.raw(), ",%.6f,%.4f\n", r.y_mid * 1e3,
                 baseline_peak_m > 0.0 ? 100.0 * r.y_mid / baseline_peak_m : 0.0);
  }
}

inline std::string campaign_header() {
  return "scenario,group,failed_off,stuck_on,airgap_zones,loss_mult,seed,p2p_pct,peak_pct,"
         "min_zone_c,max_zone_c";
}

inline void write_campaign_csv(const std::string& path, const CampaignResult& result) {
  detail::CsvFile f(path);
  f.line("# campaign-schema: 1");
  char meta[96];
  std::snprintf(meta, sizeof meta, "# baseline_peak_mm: %.9g", result.baseline_peak * 1e3);
  f.line(meta);
  std::snprintf(meta, sizeof meta, "# master_seed: %llu",
                static_cast<unsigned long long>(result.master_seed));
  f.line(meta);
  f.line(campaign_header());
  auto join = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ';';
      s += std::to_string(v[static_cast<std::size_t>(i)]);
    }
    return s;
  };
  for (const auto& s : result.scenarios) {
    std::fprintf(f.raw(), "%d,%s,%s,%s,%s,%.6g,%llu,%.6g,%.6g,%.4f,%.4f\n", s.index,
                 s.group.c_str(), join(s.fault.failed_off).c_str(), join(s.fault.stuck_on).c_str(),
                 join(s.fault.airgap_zones).c_str(), s.fault.lower_loss_multiplier,
                 static_cast<unsigned long long>(s.seed), s.p2p_pct, s.peak_pct,
                 s.min_zone_temp - 273.15, s.max_zone_temp - 273.15);
  }
}

/// Density curves per campaign group: histogram rows carry kind=hist on the
/// bin centers, KDE rows kind=kde on the evaluation grid.
inline void write_density_csv(const std::string& path, const CampaignResult& result) {
  detail::CsvFile f(path);
  f.line("# density-schema: 1");
  f.line("group,kind,x_pct,density");
  for (const auto& g : result.groups) {
    if (g.density.x.empty()) continue;
    for (std::size_t i = 0; i < g.density.bin_center.size(); ++i)
      std::fprintf(f.raw(), "%s,hist,%.6g,%.6g\n", g.name.c_str(), g.density.bin_center[i],
                   g.density.bin_density[i]);
    for (std::size_t i = 0; i < g.density.x.size(); ++i)
      std::fprintf(f.raw(), "%s,kde,%.6g,%.6g\n", g.name.c_str(), g.density.x[i],
                   g.density.kde_density[i]);
  }
}

inline void write_table1_csv(const std::string& path, const Table1Report& rep) {
  detail::CsvFile f(path);
  f.line("# table1-schema: 1");
  f.line("case,runs,worst_p2p_pct,worst_case_detail");
  for (const auto& row : rep.rows)
    std::fprintf(f.raw(), "\"%s\",%d,%.6g,\"%s\"\n", row.label.c_str(), row.runs, row.worst_p2p,
                 row.worst_detail.c_str());
  f.line("");
  f.line("check,pass,detail");
  for (const auto& c : rep.checks)
    std::fprintf(f.raw(), "%s,%d,\"%s\"\n", c.name.c_str(), c.pass ? 1 : 0, c.detail.c_str());
}

}  // namespace shellheat
