#pragma once

// Plot-data extraction and minimal SVG rendering. Everything here is a pure
// function of the emitted CSV files, so figures can be regenerated offline
// without rerunning the simulation.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "shellheat/errors.hpp"
#include "shellheat/params.hpp"

namespace shellheat {

struct TrajectoryTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  double baseline_peak_mm = 0.0;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return static_cast<int>(i);
    throw io_error("trajectory CSV: missing column " + name);
  }
};

inline TrajectoryTable read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot read " + path);
  TrajectoryTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string key = "# baseline_peak_mm:";
      if (line.rfind(key, 0) == 0) t.baseline_peak_mm = std::stod(line.substr(key.size()));
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    if (t.columns.empty()) {
      while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
      continue;
    }
    std::vector<double> row;
    row.reserve(t.columns.size());
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (row.size() == t.columns.size()) t.rows.push_back(std::move(row));
  }
  if (t.columns.empty()) throw io_error("trajectory CSV: no header in " + path);
  return t;
}

/// Axial temperature profiles at marker times (cooldown-figure top panel).
inline void write_axial_profiles_csv(const TrajectoryTable& t, const std::string& path,
                                     const std::vector<double>& marker_hours) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw io_error("cannot write " + path);
  std::fprintf(f, "# axial-profiles-schema: 1\n");
  std::fprintf(f, "x_norm");
  for (double m : marker_hours) std::fprintf(f, ",upper_%gh_c,lower_%gh_c", m, m);
  std::fprintf(f, "\n");
  const int t_col = t.column("t_h");
  for (int a = 0; a < kZonesPerHalf; ++a) {
    std::fprintf(f, "%.3f", (a + 0.5) / kZonesPerHalf);
    for (double m : marker_hours) {
      std::size_t best = 0;
      for (std::size_t r = 0; r < t.rows.size(); ++r)
        if (std::fabs(t.rows[r][static_cast<std::size_t>(t_col)] - m) <
            std::fabs(t.rows[best][static_cast<std::size_t>(t_col)] - m))
          best = r;
      const int up = t.column("shell" + std::to_string(a) + "_c");
      const int lo = t.column("shell" + std::to_string(a + kZonesPerHalf) + "_c");
      std::fprintf(f, ",%.4f,%.4f", t.rows[best][static_cast<std::size_t>(up)],
                   t.rows[best][static_cast<std::size_t>(lo)]);
    }
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

/// Differential and normalized-deflection time series (middle/bottom panels).
inline void write_deflection_series_csv(const TrajectoryTable& t, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw io_error("cannot write " + path);
  std::fprintf(f, "# deflection-series-schema: 1\n");
  std::fprintf(f, "t_h,dt_e0_k,dt_e1_k,dt_e2_k,dt_e3_k,dt_e4_k,y_mid_pct\n");
  const int t_col = t.column("t_h");
  std::vector<int> dt_cols;
  for (int j = 0; j < kBeamElements; ++j)
    dt_cols.push_back(t.column("dt_e" + std::to_string(j) + "_k"));
  const int y_col = t.column("y_mid_pct");
  for (const auto& row : t.rows) {
    std::fprintf(f, "%.6f", row[static_cast<std::size_t>(t_col)]);
    for (int c : dt_cols) std::fprintf(f, ",%.5f", row[static_cast<std::size_t>(c)]);
    std::fprintf(f, ",%.4f\n", row[static_cast<std::size_t>(y_col)]);
  }
  std::fclose(f);
}

namespace detail {

/// Bare-bones multi-panel polyline SVG.
class SvgCanvas {
public:
  SvgCanvas(int width, int height) : w_(width), h_(height) {
    body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w_) +
             "\" height=\"" + std::to_string(h_) + "\" viewBox=\"0 0 " + std::to_string(w_) + " " +
             std::to_string(h_) + "\">\n";
    body_ += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }

  struct Panel {
    double x0, y0, w, h;        // pixels
    double xmin, xmax, ymin, ymax;  // data range
    double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
    double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
  };

  void frame(const Panel& p, const std::string& title) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                  "stroke=\"black\" stroke-width=\"1\"/>\n",
                  p.x0, p.y0, p.w, p.h);
    body_ += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" font-family=\"sans-serif\">%s"
                  "</text>\n",
                  p.x0, p.y0 - 5.0, title.c_str());
    body_ += buf;
  }

  void polyline(const Panel& p, const std::vector<double>& x, const std::vector<double>& y,
                const std::string& color, double width = 1.0) {
    if (x.size() < 2) return;
    // Decimate long series; sub-pixel detail is invisible anyway.
    const std::size_t step = std::max<std::size_t>(1, x.size() / 800);
    std::string pts;
    char buf[48];
    for (std::size_t i = 0; i < x.size(); i += step) {
      const std::size_t k = std::min(i, x.size() - 1);
      const double cx = std::clamp(p.px(x[k]), p.x0, p.x0 + p.w);
      const double cy = std::clamp(p.py(y[k]), p.y0, p.y0 + p.h);
      std::snprintf(buf, sizeof buf, "%.1f,%.1f ", cx, cy);
      pts += buf;
    }
    const double cx = std::clamp(p.px(x.back()), p.x0, p.x0 + p.w);
    const double cy = std::clamp(p.py(y.back()), p.y0, p.y0 + p.h);
    std::snprintf(buf, sizeof buf, "%.1f,%.1f ", cx, cy);
    pts += buf;
    body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
             std::to_string(width) + "\" points=\"" + pts + "\"/>\n";
  }

  void hline(const Panel& p, double y, const std::string& color) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\" "
                  "stroke-dasharray=\"4 3\"/>\n",
                  p.x0, p.py(y), p.x0 + p.w, p.py(y), color.c_str());
    body_ += buf;
  }

  void save(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path);
    out << body_ << "</svg>\n";
  }

private:
  int w_, h_;
  std::string body_;
};

}  // namespace detail

/// Renders the three-panel cooldown figure (zone temperatures, element
/// differentials, normalized midspan deflection) from a trajectory CSV.
inline void render_cooldown_svg(const TrajectoryTable& t, const std::string& path) {
  detail::SvgCanvas svg(720, 760);
  const int t_col = t.column("t_h");
  std::vector<double> hours;
  for (const auto& row : t.rows) hours.push_back(row[static_cast<std::size_t>(t_col)]);
  if (hours.empty()) throw io_error("trajectory CSV has no data rows");
  const double tmax = std::max(hours.back(), 1.0);

  auto col_values = [&](int c) {
    std::vector<double> v;
    v.reserve(t.rows.size());
    for (const auto& row : t.rows) v.push_back(row[static_cast<std::size_t>(c)]);
    return v;
  };
  auto range_of = [](const std::vector<std::vector<double>>& series, double& lo, double& hi) {
    for (const auto& s : series)
      for (double v : s) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    if (hi <= lo) hi = lo + 1.0;
  };

  // Panel 1: zone temperatures, upper dark / lower grey.
  std::vector<std::vector<double>> upper_temps, lower_temps;
  for (int a = 0; a < kZonesPerHalf; ++a) {
    upper_temps.push_back(col_values(t.column("shell" + std::to_string(a) + "_c")));
    lower_temps.push_back(
        col_values(t.column("shell" + std::to_string(a + kZonesPerHalf) + "_c")));
  }
  double t_lo = 1e30, t_hi = -1e30;
  range_of(upper_temps, t_lo, t_hi);
  range_of(lower_temps, t_lo, t_hi);
  detail::SvgCanvas::Panel p1{60, 30, 620, 200, 0, tmax, t_lo, t_hi};
  svg.frame(p1, "shell zone temperatures (C), upper dark / lower grey");
  for (const auto& s : lower_temps) svg.polyline(p1, hours, s, "#9e9e9e");
  for (const auto& s : upper_temps) svg.polyline(p1, hours, s, "#1a1a1a");

  // Panel 2: per-element top-to-bottom differentials.
  std::vector<std::vector<double>> dts;
  for (int j = 0; j < kBeamElements; ++j)
    dts.push_back(col_values(t.column("dt_e" + std::to_string(j) + "_k")));
  double d_lo = 1e30, d_hi = -1e30;
  range_of(dts, d_lo, d_hi);
  detail::SvgCanvas::Panel p2{60, 280, 620, 200, 0, tmax, d_lo, d_hi};
  svg.frame(p2, "element differentials, upper minus lower (K)");
  static const char* kColors[5] = {"#d32f2f", "#f57c00", "#388e3c", "#1976d2", "#7b1fa2"};
  for (int j = 0; j < kBeamElements; ++j)
    svg.polyline(p2, hours, dts[static_cast<std::size_t>(j)], kColors[j]);
  if (d_lo < 0.0 && d_hi > 0.0) svg.hline(p2, 0.0, "#888888");

  // Panel 3: normalized midspan deflection.
  std::vector<double> y = col_values(t.column("y_mid_pct"));
  double y_lo = 1e30, y_hi = -1e30;
  range_of({y}, y_lo, y_hi);
  detail::SvgCanvas::Panel p3{60, 530, 620, 200, 0, tmax, y_lo, y_hi};
  svg.frame(p3, "midspan deflection (% of baseline peak)");
  svg.polyline(p3, hours, y, "#1976d2", 1.5);
  if (y_lo < 0.0 && y_hi > 0.0) svg.hline(p3, 0.0, "#888888");

  svg.save(path);
}

/// Renders the per-group probability-density panels from a density CSV.
inline void render_density_svg(const std::string& density_csv, const std::string& path) {
  std::ifstream in(density_csv);
  if (!in) throw io_error("cannot read " + density_csv);
  struct Curve {
    std::vector<double> hx, hd, kx, kd;
  };
  std::map<std::string, Curve> groups;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("group,", 0) == 0) continue;
    std::stringstream ss(line);
    std::string group, kind, xs, ds;
    std::getline(ss, group, ',');
    std::getline(ss, kind, ',');
    std::getline(ss, xs, ',');
    std::getline(ss, ds, ',');
    auto& c = groups[group];
    const double x = std::strtod(xs.c_str(), nullptr);
    const double d = std::strtod(ds.c_str(), nullptr);
    if (kind == "hist") {
      c.hx.push_back(x);
      c.hd.push_back(d);
    } else {
      c.kx.push_back(x);
      c.kd.push_back(d);
    }
  }
  if (groups.empty()) throw io_error("density CSV has no data rows: " + density_csv);

  const int n = static_cast<int>(groups.size());
  const int panel_h = 170;
  detail::SvgCanvas svg(720, 40 + n * (panel_h + 40));
  int row = 0;
  for (auto& [name, c] : groups) {
    double x_lo = 1e30, x_hi = -1e30, d_hi = 0.0;
    for (std::size_t i = 0; i < c.kx.size(); ++i) {
      x_lo = std::min(x_lo, c.kx[i]);
      x_hi = std::max(x_hi, c.kx[i]);
      d_hi = std::max(d_hi, c.kd[i]);
    }
    for (std::size_t i = 0; i < c.hx.size(); ++i) d_hi = std::max(d_hi, c.hd[i]);
    if (x_hi <= x_lo) x_hi = x_lo + 1.0;
    if (d_hi <= 0.0) d_hi = 1.0;
    detail::SvgCanvas::Panel p{60, 40.0 + row * (panel_h + 40), 620, static_cast<double>(panel_h),
                               x_lo, x_hi, 0.0, 1.1 * d_hi};
    svg.frame(p, name + ": peak-to-peak deflection density (% of baseline)");
    // Histogram as steps, KDE as a smooth line.
    if (!c.hx.empty()) {
      std::vector<double> sx, sy;
      const double half_bin = c.hx.size() > 1 ? 0.5 * (c.hx[1] - c.hx[0]) : 0.5;
      for (std::size_t i = 0; i < c.hx.size(); ++i) {
        sx.push_back(c.hx[i] - half_bin);
        sy.push_back(c.hd[i]);
        sx.push_back(c.hx[i] + half_bin);
        sy.push_back(c.hd[i]);
      }
      svg.polyline(p, sx, sy, "#9e9e9e");
    }
    svg.polyline(p, c.kx, c.kd, "#1976d2", 1.5);
    ++row;
  }
  svg.save(path);
}

}  // namespace shellheat
