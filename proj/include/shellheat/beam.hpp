#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "shellheat/errors.hpp"

namespace shellheat {

/// Geometry of the stringed-beam deflection model: the shell is treated as a
/// chain of simply supported beam elements, each carrying a uniform
/// top-to-bottom temperature differential.
struct BeamSpec {
  std::vector<double> lengths;       // element lengths (m), sum = shell length
  double expansion_coeff = 1.2e-5;   // thermal expansion coefficient (1/K)
  double depth = 2.0;                // beam depth, top surface to bottom surface (m)

  int n_elements() const { return static_cast<int>(lengths.size()); }

  double total_length() const {
    double s = 0.0;
    for (double l : lengths) s += l;
    return s;
  }

  static BeamSpec uniform(int n, double total_length, double expansion_coeff, double depth) {
    BeamSpec spec;
    spec.lengths.assign(static_cast<std::size_t>(n), total_length / n);
    spec.expansion_coeff = expansion_coeff;
    spec.depth = depth;
    return spec;
  }

  void validate() const {
    if (lengths.empty()) throw param_error("beam: at least one element required");
    for (double l : lengths)
      if (!(l > 0.0)) throw param_error("beam: element lengths must be positive");
    if (!(expansion_coeff > 0.0)) throw param_error("beam: expansion_coeff must be positive");
    if (!(depth > 0.0)) throw param_error("beam: depth must be positive");
  }
};

struct SlopeDeflection {
  double theta = 0.0;  // rad
  double y = 0.0;      // m
};

/// Slope and deflection at local position x inside one uniform-differential
/// element, carried forward from the element's start state (theta0, y0):
///   theta(x) = theta0 + (g/d) dT x
///   y(x)     = y0 + theta0 x + (g/2d) dT x^2
/// where g is the expansion coefficient and d the beam depth. dT > 0 means
/// top hotter than bottom.
inline SlopeDeflection element_slope_deflection(double theta0, double y0, double d_t, double x,
                                                double length, const BeamSpec& spec) {
  if (x < 0.0 || x > length) throw param_error("beam: position outside element");
  const double curv = spec.expansion_coeff / spec.depth * d_t;
  return {theta0 + curv * x, y0 + theta0 * x + 0.5 * curv * x * x};
}

/// Deflection solution at the element boundaries. y positive follows the
/// element formula above: a uniform positive differential (top hotter) gives
/// a negative midspan value. Both supports are at zero exactly.
struct DeflectionProfile {
  std::vector<double> y;         // n+1 boundary deflections (m)
  std::vector<double> theta;     // n+1 boundary slopes (rad)
  std::vector<double> elem_mid;  // deflection at each element midpoint (m)
  double y_mid = 0.0;            // deflection at the span midpoint (m)
};

/// Solves the chained simply supported beam for a per-element differential
/// vector. Slope and deflection are matched at every interior joint; with
/// y(0) = 0 fixed, forward propagation leaves the single unknown theta(0),
/// which the far-end support condition y(L) = 0 determines in closed form.
inline DeflectionProfile solve_beam(std::span<const double> d_t, const BeamSpec& spec) {
  spec.validate();
  const int n = spec.n_elements();
  if (static_cast<int>(d_t.size()) != n)
    throw param_error("beam: differential count must equal element count");

  // Propagate with theta(0) = 0; superpose the rigid rotation afterwards.
  std::vector<double> y0(n + 1, 0.0), th0(n + 1, 0.0), xpos(n + 1, 0.0);
  for (int j = 0; j < n; ++j) {
    const double l = spec.lengths[static_cast<std::size_t>(j)];
    const double curv = spec.expansion_coeff / spec.depth * d_t[static_cast<std::size_t>(j)];
    th0[j + 1] = th0[j] + curv * l;
    y0[j + 1] = y0[j] + th0[j] * l + 0.5 * curv * l * l;
    xpos[j + 1] = xpos[j] + l;
  }
  const double span = xpos[n];
  const double theta_start = -y0[n] / span;

  DeflectionProfile out;
  out.y.resize(n + 1);
  out.theta.resize(n + 1);
  out.elem_mid.resize(n);
  for (int i = 0; i <= n; ++i) {
    out.theta[i] = th0[i] + theta_start;
    out.y[i] = y0[i] + theta_start * xpos[i];
  }
  out.y.front() = 0.0;
  out.y.back() = 0.0;  // enforced analytically; assign exactly

  auto eval = [&](double x) {
    int j = 0;
    while (j + 1 < n && x > xpos[j + 1]) ++j;
    const double lx = x - xpos[j];
    const double curv = spec.expansion_coeff / spec.depth * d_t[static_cast<std::size_t>(j)];
    return out.y[j] + out.theta[j] * lx + 0.5 * curv * lx * lx;
  };
  for (int j = 0; j < n; ++j)
    out.elem_mid[static_cast<std::size_t>(j)] =
        eval(xpos[j] + 0.5 * spec.lengths[static_cast<std::size_t>(j)]);
  out.y_mid = eval(0.5 * span);
  return out;
}

/// Collapses the 10 axial shell zones per half onto the beam elements:
/// element j carries the mean upper-minus-lower differential of the two
/// zones it spans. Positive = top hotter.
inline std::vector<double> zone_to_element_dt(std::span<const double> t_upper,
                                              std::span<const double> t_lower) {
  if (t_upper.size() != 10 || t_lower.size() != 10)
    throw param_error("zone_to_element_dt: expected 10 zone temperatures per half");
  std::vector<double> d_t(5, 0.0);
  for (int j = 0; j < 5; ++j) {
    const std::size_t a = static_cast<std::size_t>(2 * j);
    d_t[static_cast<std::size_t>(j)] =
        0.5 * ((t_upper[a] - t_lower[a]) + (t_upper[a + 1] - t_lower[a + 1]));
  }
  return d_t;
}

}  // namespace shellheat
