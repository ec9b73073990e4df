#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "shellheat/errors.hpp"
#include "shellheat/linalg.hpp"
#include "shellheat/params.hpp"

namespace shellheat {

/// Full thermal state: two axial node chains (one per shell half, including
/// the unheated end half-cells), one lumped mass per blanket, one rotor node.
struct PlantState {
  std::array<double, kNodesPerHalf> shell_upper{};
  std::array<double, kNodesPerHalf> shell_lower{};
  std::array<double, kZones> blanket{};
  double rotor = 0.0;
  double sim_time = 0.0;  // s

  /// Shell node temperature of a heating zone (zone nodes sit between the
  /// two end half-cells, so axial index a maps to node a+1).
  double zone_shell(int zone) const {
    const auto& half = zone_half(zone) == Half::upper ? shell_upper : shell_lower;
    return half[static_cast<std::size_t>(zone_axial(zone) + 1)];
  }

  std::array<double, kZonesPerHalf> zone_temps(Half half) const {
    const auto& nodes = half == Half::upper ? shell_upper : shell_lower;
    std::array<double, kZonesPerHalf> out{};
    for (int a = 0; a < kZonesPerHalf; ++a) out[static_cast<std::size_t>(a)] = nodes[static_cast<std::size_t>(a + 1)];
    return out;
  }
};

struct HeaterCommand {
  std::array<bool, kZones> on{};  // binary by construction; heaters are never modulated

  static HeaterCommand all_off() { return HeaterCommand{}; }
};

/// Contact-resistance heat flow between two touching surfaces:
/// q = a_s * h_c * (t_a - t_b), positive from A to B.
inline double contact_heat_flow(double t_a, double t_b, double h_c, double a_s) {
  if (!(h_c > 0.0)) throw param_error("contact_heat_flow: h_c must be positive");
  if (!(a_s > 0.0)) throw param_error("contact_heat_flow: a_s must be positive");
  return a_s * h_c * (t_a - t_b);
}

/// The discrete axial diffusion operator for one shell half with insulated
/// (zero-gradient) ends, in its normalized form: interior rows
/// (1/h^2)[1 -2 1], boundary rows (1/h^2)[-h h], with time-derivative weights
/// 1/alpha on interior nodes and h/(2 alpha) on the half-width end cells.
/// The heat-input slot is structurally zero at both ends: the shell ends
/// carry no blankets and are modeled as conduction-only half-cells.
struct ShellSystem {
  int n = 0;
  double h = 0.0;
  double alpha = 0.0;
  std::vector<double> sub, diag, sup;   // tridiagonal bands, 1/h^2 factor included
  std::vector<double> time_weight;      // multiplies dT/dt on the right-hand side
  std::vector<bool> heat_input_mask;    // false where the input slot is structurally zero

  /// Applies the operator to a temperature vector.
  std::vector<double> apply(std::span<const double> t) const {
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      double v = diag[k] * t[k];
      if (i > 0) v += sub[k] * t[k - 1];
      if (i + 1 < n) v += sup[k] * t[k + 1];
      out[k] = v;
    }
    return out;
  }
};

inline ShellSystem assemble_shell_system(int n_nodes, double h, double alpha) {
  if (n_nodes < 3) throw param_error("shell system needs at least 3 nodes");
  if (!(h > 0.0) || !(alpha > 0.0)) throw param_error("shell system: h and alpha must be positive");
  ShellSystem s;
  s.n = n_nodes;
  s.h = h;
  s.alpha = alpha;
  const auto n = static_cast<std::size_t>(n_nodes);
  s.sub.assign(n, 0.0);
  s.diag.assign(n, 0.0);
  s.sup.assign(n, 0.0);
  s.time_weight.assign(n, 1.0 / alpha);
  s.heat_input_mask.assign(n, true);
  const double inv_h2 = 1.0 / (h * h);
  s.diag[0] = -h * inv_h2;
  s.sup[0] = h * inv_h2;
  s.diag[n - 1] = -h * inv_h2;
  s.sub[n - 1] = h * inv_h2;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    s.sub[i] = inv_h2;
    s.diag[i] = -2.0 * inv_h2;
    s.sup[i] = inv_h2;
  }
  s.time_weight[0] = 0.5 * h / alpha;
  s.time_weight[n - 1] = 0.5 * h / alpha;
  s.heat_input_mask[0] = false;
  s.heat_input_mask[n - 1] = false;
  return s;
}

inline ShellSystem assemble_shell_system(const PlantParams& p) {
  return assemble_shell_system(kNodesPerHalf, p.h_node(), p.alpha);
}

/// Axial shape of the hot-shutdown initial condition: a smooth bump peaking
/// near mid-shell (the inlet region), decaying toward the ends.
struct InitialProfileSpec {
  double peak_temp = 838.15;   // K at the profile center (565 C default)
  double edge_fraction = 0.55; // end temperature as a fraction of (peak - ambient)
  double center = 0.45;        // normalized axial position of the peak
  double width = 0.30;         // normalized gaussian width

  double shape(double x_norm) const {
    const double u = (x_norm - center) / width;
    return edge_fraction + (1.0 - edge_fraction) * std::exp(-0.5 * u * u);
  }
};

/// State immediately after a hot shutdown: both halves on the same smooth
/// axial profile, blankets equilibrated to their zone nodes, rotor at the
/// mid-shell temperature.
inline PlantState initial_hot_shutdown_state(const PlantParams& p, const InitialProfileSpec& spec) {
  if (spec.peak_temp < p.t_ambient)
    throw param_error("initial profile: peak temperature below ambient");
  if (!(spec.width > 0.0)) throw param_error("initial profile: width must be positive");

  PlantState s;
  const double rise = spec.peak_temp - p.t_ambient;
  auto temp_at = [&](double x_norm) { return p.t_ambient + rise * spec.shape(x_norm); };

  for (int i = 0; i < kNodesPerHalf; ++i) {
    // Zone node a sits at (a + 0.5)/10 of the heated span; the end half-cells
    // extend half a spacing beyond it.
    const double x_norm = (i - 0.5) / kZonesPerHalf;
    const auto k = static_cast<std::size_t>(i);
    s.shell_upper[k] = temp_at(x_norm);
    s.shell_lower[k] = s.shell_upper[k];
  }
  for (int z = 0; z < kZones; ++z) s.blanket[static_cast<std::size_t>(z)] = s.zone_shell(z);
  s.rotor = temp_at(0.5);
  s.sim_time = 0.0;
  return s;
}

/// Implicit (backward-Euler) integrator for the coupled shell/blanket/rotor
/// system. The system matrix is constant for fixed parameters and time step,
/// so it is assembled and factored once; heater commands only move the
/// right-hand side. Backward Euler keeps the stiff contact coupling stable at
/// plant-scale steps and preserves the comparison bounds (no overshoot below
/// ambient, no spurious new maxima).
class ThermalPlant {
public:
  static constexpr int kStates = 2 * kNodesPerHalf + kZones + 1;

  ThermalPlant(const PlantParams& p, double dt) : params_(p), dt_(dt) {
    p.validate();
    if (!(dt > 0.0)) throw param_error("plant: dt must be positive");
    build();
  }

  const PlantParams& params() const { return params_; }
  double dt() const { return dt_; }

  PlantState step(const PlantState& s, const HeaterCommand& cmd) const {
    check_finite(s);  // name the offending component before NaNs spread through the solve
    std::array<double, kStates> x{};
    pack(s, x);
    // Increment form of backward Euler: (M - dt A) dx = dt (A x + b). The
    // right-hand side vanishes identically at equilibrium, so fixed points
    // are preserved exactly and roundoff acts on the increment, not on the
    // state level.
    std::array<double, kStates> rhs{};
    for (int i = 0; i < kStates; ++i) {
      const auto k = static_cast<std::size_t>(i);
      double acc = b_ambient_[k];
      for (int j = 0; j < kStates; ++j) {
        const double a_ij = a_.at(i, j);
        if (a_ij != 0.0) acc += a_ij * x[static_cast<std::size_t>(j)];
      }
      rhs[k] = dt_ * acc;
    }
    for (int z = 0; z < kZones; ++z) {
      if (cmd.on[static_cast<std::size_t>(z)])
        rhs[static_cast<std::size_t>(blanket_idx(z))] +=
            dt_ * params_.heater_power[static_cast<std::size_t>(z)];
    }
    const std::vector<double> dx = lhs_.solve(rhs);
    PlantState out;
    std::array<double, kStates> xn{};
    for (int i = 0; i < kStates; ++i) {
      const auto k = static_cast<std::size_t>(i);
      xn[k] = x[k] + dx[k];
    }
    std::vector<double> xv(xn.begin(), xn.end());
    unpack(xv, out);
    out.sim_time = s.sim_time + dt_;
    check_finite(out);
    return out;
  }

  /// Total stored thermal energy relative to 0 K (J).
  double stored_energy(const PlantState& s) const {
    std::array<double, kStates> x{};
    pack(s, x);
    double e = 0.0;
    for (int i = 0; i < kStates; ++i) e += capacity_[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    return e;
  }

  struct BoundaryFlows {
    double heater_in = 0.0;     // W
    double ambient_loss = 0.0;  // W, positive out of the system
  };

  /// Instantaneous boundary heat flows. For a backward-Euler step the energy
  /// audit closes exactly when the flows are evaluated at the end-of-step
  /// state: dE = dt * (heater_in - ambient_loss).
  BoundaryFlows boundary_flows(const PlantState& s, const HeaterCommand& cmd) const {
    BoundaryFlows f;
    for (int z = 0; z < kZones; ++z) {
      const auto k = static_cast<std::size_t>(z);
      if (cmd.on[k]) f.heater_in += params_.heater_power[k];
      f.ambient_loss += params_.h_shell_ambient[k] * params_.a_shell_ambient[k] *
                        (s.zone_shell(z) - params_.t_ambient);
      f.ambient_loss += params_.h_blanket_ambient[k] * params_.a_blanket_ambient[k] *
                        (s.blanket[k] - params_.t_ambient);
    }
    return f;
  }

  /// External heat delivered to each shell node (W): blanket contact inflow
  /// minus direct ambient loss minus flow to the rotor. The first and last
  /// slots of each half are structurally zero (no blankets at the shell
  /// ends), matching the zero end entries of the discrete system's input
  /// vector.
  std::array<std::array<double, kNodesPerHalf>, 2> shell_external_heat(
      const PlantState& s, const HeaterCommand& /*cmd*/) const {
    std::array<std::array<double, kNodesPerHalf>, 2> q{};
    for (int z = 0; z < kZones; ++z) {
      const auto k = static_cast<std::size_t>(z);
      const int half = static_cast<int>(zone_half(z));
      const auto node = static_cast<std::size_t>(zone_axial(z) + 1);
      const double t_node = s.zone_shell(z);
      double v = contact_heat_flow(s.blanket[k], t_node, params_.h_contact[k], params_.a_contact[k]);
      v -= params_.h_shell_ambient[k] * params_.a_shell_ambient[k] * (t_node - params_.t_ambient);
      v -= params_.h_rotor[k] * params_.a_rotor[k] * (t_node - s.rotor);
      q[static_cast<std::size_t>(half)][node] = v;
    }
    return q;
  }

private:
  static int upper_idx(int node) { return node; }
  static int lower_idx(int node) { return kNodesPerHalf + node; }
  static int blanket_idx(int zone) { return 2 * kNodesPerHalf + zone; }
  static constexpr int rotor_idx() { return 2 * kNodesPerHalf + kZones; }

  static void pack(const PlantState& s, std::array<double, kStates>& x) {
    for (int i = 0; i < kNodesPerHalf; ++i) {
      x[static_cast<std::size_t>(upper_idx(i))] = s.shell_upper[static_cast<std::size_t>(i)];
      x[static_cast<std::size_t>(lower_idx(i))] = s.shell_lower[static_cast<std::size_t>(i)];
    }
    for (int z = 0; z < kZones; ++z)
      x[static_cast<std::size_t>(blanket_idx(z))] = s.blanket[static_cast<std::size_t>(z)];
    x[static_cast<std::size_t>(rotor_idx())] = s.rotor;
  }

  static void unpack(const std::vector<double>& x, PlantState& s) {
    for (int i = 0; i < kNodesPerHalf; ++i) {
      s.shell_upper[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(upper_idx(i))];
      s.shell_lower[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(lower_idx(i))];
    }
    for (int z = 0; z < kZones; ++z)
      s.blanket[static_cast<std::size_t>(z)] = x[static_cast<std::size_t>(blanket_idx(z))];
    s.rotor = x[static_cast<std::size_t>(rotor_idx())];
  }

  void build() {
    Matrix a(kStates);
    capacity_.fill(0.0);
    b_ambient_.fill(0.0);

    const double g_axial = params_.axial_conductance();
    for (int half = 0; half < 2; ++half) {
      auto idx = [&](int node) { return half == 0 ? upper_idx(node) : lower_idx(node); };
      for (int node = 0; node < kNodesPerHalf; ++node) {
        const auto k = static_cast<std::size_t>(idx(node));
        const bool end_cell = node == 0 || node == kNodesPerHalf - 1;
        capacity_[k] = end_cell ? 0.5 * params_.node_heat_capacity : params_.node_heat_capacity;
        if (node > 0) {
          a.at(idx(node), idx(node)) -= g_axial;
          a.at(idx(node), idx(node - 1)) += g_axial;
        }
        if (node + 1 < kNodesPerHalf) {
          a.at(idx(node), idx(node)) -= g_axial;
          a.at(idx(node), idx(node + 1)) += g_axial;
        }
      }
    }

    for (int z = 0; z < kZones; ++z) {
      const auto k = static_cast<std::size_t>(z);
      const int node = zone_axial(z) + 1;
      const int ni = zone_half(z) == Half::upper ? upper_idx(node) : lower_idx(node);
      const int bi = blanket_idx(z);

      capacity_[static_cast<std::size_t>(bi)] = params_.blanket_heat_capacity[k];

      const double g_contact = params_.h_contact[k] * params_.a_contact[k];
      a.at(ni, ni) -= g_contact;
      a.at(ni, bi) += g_contact;
      a.at(bi, bi) -= g_contact;
      a.at(bi, ni) += g_contact;

      const double g_shell_amb = params_.h_shell_ambient[k] * params_.a_shell_ambient[k];
      a.at(ni, ni) -= g_shell_amb;
      b_ambient_[static_cast<std::size_t>(ni)] += g_shell_amb * params_.t_ambient;

      const double g_blanket_amb = params_.h_blanket_ambient[k] * params_.a_blanket_ambient[k];
      a.at(bi, bi) -= g_blanket_amb;
      b_ambient_[static_cast<std::size_t>(bi)] += g_blanket_amb * params_.t_ambient;

      const double g_rotor = params_.h_rotor[k] * params_.a_rotor[k];
      const int ri = rotor_idx();
      a.at(ni, ni) -= g_rotor;
      a.at(ni, ri) += g_rotor;
      a.at(ri, ri) -= g_rotor;
      a.at(ri, ni) += g_rotor;
    }
    capacity_[static_cast<std::size_t>(rotor_idx())] = params_.rotor_heat_capacity;

    Matrix lhs(kStates);
    for (int i = 0; i < kStates; ++i)
      for (int j = 0; j < kStates; ++j)
        lhs.at(i, j) = (i == j ? capacity_[static_cast<std::size_t>(i)] : 0.0) - dt_ * a.at(i, j);
    lhs_ = LuSolver(std::move(lhs));
    a_ = std::move(a);
  }

  void check_finite(const PlantState& s) const {
    auto name_for = [](const char* base, int i) {
      return std::string(base) + "[" + std::to_string(i) + "]";
    };
    for (int i = 0; i < kNodesPerHalf; ++i) {
      if (!std::isfinite(s.shell_upper[static_cast<std::size_t>(i)]))
        throw numeric_error("non-finite state: " + name_for("shell_upper", i));
      if (!std::isfinite(s.shell_lower[static_cast<std::size_t>(i)]))
        throw numeric_error("non-finite state: " + name_for("shell_lower", i));
    }
    for (int z = 0; z < kZones; ++z)
      if (!std::isfinite(s.blanket[static_cast<std::size_t>(z)]))
        throw numeric_error("non-finite state: " + name_for("blanket", z));
    if (!std::isfinite(s.rotor)) throw numeric_error("non-finite state: rotor");
  }

  PlantParams params_;
  double dt_ = 0.0;
  std::array<double, kStates> capacity_{};
  std::array<double, kStates> b_ambient_{};
  Matrix a_;
  LuSolver lhs_;
};

/// One-off step helper; campaigns should hold a ThermalPlant and reuse its
/// factorization.
inline PlantState step(const PlantState& s, const HeaterCommand& cmd, const PlantParams& p,
                       double dt) {
  return ThermalPlant(p, dt).step(s, cmd);
}

}  // namespace shellheat
