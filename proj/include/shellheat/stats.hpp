#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "shellheat/errors.hpp"

namespace shellheat {

/// Histogram plus Gaussian kernel-density estimate of a sample set. The
/// histogram integrates to one exactly by construction; the KDE is
/// renormalized on its evaluation grid.
struct DensityCurve {
  std::vector<double> bin_center;   // histogram bin centers
  std::vector<double> bin_density;  // count / (n * bin_width)
  double bin_width = 0.0;

  std::vector<double> x;            // KDE evaluation grid
  std::vector<double> kde_density;
  double bandwidth = 0.0;

  double hist_integral() const {
    double s = 0.0;
    for (double v : bin_density) s += v * bin_width;
    return s;
  }

  double kde_integral() const {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
      s += 0.5 * (kde_density[i - 1] + kde_density[i]) * (x[i] - x[i - 1]);
    return s;
  }
};

/// Estimates the sample density. bandwidth <= 0 selects Silverman's rule;
/// the KDE grid extends four bandwidths past the sample range.
inline DensityCurve estimate_pdf(std::span<const double> samples, int bins = 40,
                                 double bandwidth = 0.0) {
  const std::size_t n = samples.size();
  if (n < 2) throw param_error("estimate_pdf: needs at least 2 samples");
  if (bins < 1) throw param_error("estimate_pdf: needs at least 1 bin");

  double lo = samples[0], hi = samples[0];
  double mean = 0.0;
  for (double v : samples) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    mean += v;
  }
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : samples) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n - 1);
  const double sd = std::sqrt(var);

  if (bandwidth <= 0.0) {
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double iqr = sorted[static_cast<std::size_t>(0.75 * (n - 1))] -
                       sorted[static_cast<std::size_t>(0.25 * (n - 1))];
    double spread = std::min(sd, iqr / 1.34);
    if (spread <= 0.0) spread = std::max({sd, std::fabs(mean) * 1e-3, 1e-9});
    bandwidth = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
  }

  // Degenerate sample sets (all values equal) still get a well-formed curve.
  if (hi <= lo) {
    lo -= 0.5;
    hi += 0.5;
  }

  DensityCurve curve;
  curve.bandwidth = bandwidth;
  curve.bin_width = (hi - lo) / bins;
  curve.bin_center.resize(static_cast<std::size_t>(bins));
  curve.bin_density.assign(static_cast<std::size_t>(bins), 0.0);
  for (int b = 0; b < bins; ++b)
    curve.bin_center[static_cast<std::size_t>(b)] = lo + (b + 0.5) * curve.bin_width;
  for (double v : samples) {
    int b = static_cast<int>((v - lo) / curve.bin_width);
    b = std::clamp(b, 0, bins - 1);
    curve.bin_density[static_cast<std::size_t>(b)] +=
        1.0 / (static_cast<double>(n) * curve.bin_width);
  }

  const double grid_lo = lo - 4.0 * bandwidth;
  const double grid_hi = hi + 4.0 * bandwidth;
  const int grid_points = std::max(201, 4 * bins + 1);
  const double dx = (grid_hi - grid_lo) / (grid_points - 1);
  curve.x.resize(static_cast<std::size_t>(grid_points));
  curve.kde_density.resize(static_cast<std::size_t>(grid_points));
  const double inv = 1.0 / (static_cast<double>(n) * bandwidth * std::sqrt(2.0 * M_PI));
  for (int i = 0; i < grid_points; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double xi = grid_lo + dx * i;
    curve.x[k] = xi;
    double acc = 0.0;
    for (double v : samples) {
      const double u = (xi - v) / bandwidth;
      acc += std::exp(-0.5 * u * u);
    }
    curve.kde_density[k] = acc * inv;
  }
  const double integral = curve.kde_integral();
  if (integral > 0.0)
    for (double& v : curve.kde_density) v /= integral;
  return curve;
}

/// Percentile by linear interpolation on the sorted sample (p in [0, 1]).
inline double percentile(std::vector<double> samples, double p) {
  if (samples.empty()) throw param_error("percentile: empty sample");
  std::sort(samples.begin(), samples.end());
  const double pos = p * static_cast<double>(samples.size() - 1);
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= samples.size()) return samples.back();
  const double w = pos - static_cast<double>(i);
  return samples[i] * (1.0 - w) + samples[i + 1] * w;
}

}  // namespace shellheat
