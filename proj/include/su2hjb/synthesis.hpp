// Copyright 2026 The su2hjb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Feedback extraction from a solved field, closed-loop trajectories to the
// identity, and their compilation into elementary X/Z rotations.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "su2hjb/dynamics.hpp"
#include "su2hjb/error.hpp"
#include "su2hjb/hjb_solver.hpp"
#include "su2hjb/su2.hpp"

namespace su2hjb {

struct FeedbackChoice {
  std::size_t index = 0;
  ControlVector control;
  double value = 0.0;  // minimized scheme right-hand side
};

//! Argmin over the control set of the scheme's right-hand side at x, with
//! neighbor values x +- h e_i read by trilinear interpolation. Ties go to the
//! smallest direction index.
inline FeedbackChoice optimal_control_choice(const AlgebraElement& x, const ValueField& field,
                                             const ControlSet& controls) {
  if (group_distance(exp_map(x), GroupElement::identity()) <= field.config.target_radius) {
    throw Error(ErrorCode::kOnTarget, "chart point lies inside the target set");
  }
  if (!field.grid.contains(x)) {
    throw Error(ErrorCode::kOutOfGrid, "chart point outside the grid cube");
  }
  const double h = field.grid.spacing();
  std::array<double, 3> plus{};
  std::array<double, 3> minus{};
  for (int k = 0; k < 3; ++k) {
    AlgebraElement step;
    step[k] = h;
    plus[k] = sample_value(field, x + step);
    minus[k] = sample_value(field, x - step);
  }
  const VelocityBasis basis = velocity_basis(x);
  FeedbackChoice best{0, {}, std::numeric_limits<double>::infinity()};
  for (std::size_t d = 0; d < controls.size(); ++d) {
    const ChartVelocity f = basis(controls[d]);
    const double value = detail::upwind_update<3>(h, field.config.running_cost(controls[d]),
                                                  {f.da, f.db, f.dc}, plus, minus);
    if (value < best.value) best = {d, controls[d], value};
  }
  return best;
}

inline ControlVector optimal_control(const AlgebraElement& x, const ValueField& field,
                                     const ControlSet& controls) {
  return optimal_control_choice(x, field, controls).control;
}

struct TrajectorySample {
  double time = 0.0;
  AlgebraElement point;
  //! Control held from this sample to the next; zero on the last sample.
  ControlVector control;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double dt = 0.0;
  GroupElement start;
  double terminal_distance = 0.0;
  bool terminal = false;

  std::size_t steps() const { return samples.empty() ? 0 : samples.size() - 1; }
  double duration() const { return samples.empty() ? 0.0 : samples.back().time; }
  const AlgebraElement& end_point() const { return samples.back().point; }

  //! max over samples of the distance from the line spanned by `axis`.
  double lateral_excursion(int axis) const {
    double worst = 0.0;
    for (const auto& s : samples) {
      double off = 0.0;
      for (int k = 0; k < 3; ++k) {
        if (k != axis) off = std::max(off, std::abs(s.point[k]));
      }
      worst = std::max(worst, off);
    }
    return worst;
  }
};

struct TraceOptions {
  //! Euler step; h / 2 when unset.
  std::optional<double> dt;
  //! Capture radius around I (Frobenius); 2 * target_radius when unset.
  std::optional<double> reach_radius;
  //! Steps longer than the last sample's remaining distance are truncated in
  //! the straight landing phase; residuals with |b| above this are not landed.
  double landing_tolerance = 1e-9;
  double time_cap_factor = 4.0;
};

namespace detail {

//! Inside the capture ball the field carries no information. When the
//! residual lies in the (a, c) plane, flowing straight back along
//! -(a, c)/|(a, c)| reaches I exactly, so those residuals are landed.
inline void land(Trajectory& traj, double dt, double tolerance) {
  AlgebraElement x = traj.end_point();
  if (std::abs(x.b) > tolerance) return;
  double remaining = std::hypot(x.a, x.c);
  if (remaining <= tolerance) return;
  const ControlVector v{-x.a / remaining, -x.c / remaining};
  double t = traj.duration();
  while (remaining > tolerance) {
    const double step = remaining <= dt * (1.0 + 1e-9) ? remaining : dt;
    traj.samples.back().control = v;
    x = flow_step(x, v, step);
    t += step;
    remaining -= step;
    traj.samples.push_back({t, x, {}});
  }
}

}  // namespace detail

//! Closed-loop integration of the controlled flow under optimal_control from
//! U0 until the state is within the capture radius of I. Each step applies
//! the exact group flow exp(-i dt (v1 I_x + v2 I_z)). When the time cap
//! 4 C(U0) + 1 runs out the partial trajectory comes back with
//! terminal == false.
inline Trajectory trace_trajectory(const GroupElement& start, const ValueField& field,
                                   const TraceOptions& options = {}) {
  const double dt = options.dt.value_or(0.5 * field.grid.spacing());
  const double reach = options.reach_radius.value_or(2.0 * field.config.target_radius);
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidConfig, "dt must be positive");
  const ControlSet controls = make_control_set(field.config.n_dir);
  const GroupElement id = GroupElement::identity();

  Trajectory traj;
  traj.dt = dt;
  traj.start = start;
  AlgebraElement x = log_map(start).point;
  traj.samples.push_back({0.0, x, {}});

  double distance = group_distance(exp_map(x), id);
  if (distance > reach) {
    const double cap = options.time_cap_factor * kruskov_inverse(field, x) + 1.0;
    double t = 0.0;
    while (distance > reach) {
      if (t >= cap) {
        traj.terminal_distance = distance;
        traj.terminal = false;
        return traj;
      }
      const ControlVector v = optimal_control(x, field, controls);
      traj.samples.back().control = v;
      x = flow_step(x, v, dt);
      t += dt;
      traj.samples.push_back({t, x, {}});
      distance = group_distance(exp_map(x), id);
    }
  }
  detail::land(traj, dt, options.landing_tolerance);
  traj.terminal_distance = group_distance(exp_map(traj.end_point()), id);
  traj.terminal = true;
  return traj;
}

enum class GateAxis { kX, kZ };

struct Gate {
  GateAxis axis = GateAxis::kX;
  double angle = 0.0;  // the gate is exp(-i angle I_axis)

  GroupElement matrix() const {
    return axis_rotation(axis == GateAxis::kX ? Axis::kX : Axis::kZ, angle);
  }
  friend bool operator==(const Gate&, const Gate&) = default;
};

enum class Direction { kToIdentity, kFromIdentity };

inline constexpr double kGateElisionThreshold = 1e-12;

//! Gates in application order: the product is g_n ... g_2 g_1.
struct GateSequence {
  std::vector<Gate> gates;
  GroupElement target;
  Direction direction = Direction::kToIdentity;
  double dt = 0.0;
  //! TO_IDENTITY: |product * target - I|_F. FROM_IDENTITY: |product - target|_F.
  double error_estimate = 0.0;
  //! |product * target - U_end|_F against the exact closed-loop endpoint;
  //! the part of the error owed to splitting each step.
  double splitting_error = 0.0;
};

inline GroupElement gate_product(const std::vector<Gate>& gates) {
  GroupElement product;
  for (const auto& g : gates) product = g.matrix() * product;
  return product;
}

//! Splits every step exp(-i tau (v1 I_x + v2 I_z)) into
//! exp(-i v1 tau I_x) exp(-i v2 tau I_z); the Z factor is applied first.
inline GateSequence compile_gates(const Trajectory& traj) {
  if (!traj.terminal) {
    throw Error(ErrorCode::kNonTerminalTrajectory, "trajectory did not reach the identity");
  }
  GateSequence seq;
  seq.target = traj.start;
  seq.direction = Direction::kToIdentity;
  seq.dt = traj.dt;
  for (std::size_t k = 0; k + 1 < traj.samples.size(); ++k) {
    const double tau = traj.samples[k + 1].time - traj.samples[k].time;
    const ControlVector& v = traj.samples[k].control;
    const double z_angle = v.v2 * tau;
    const double x_angle = v.v1 * tau;
    if (std::abs(z_angle) > kGateElisionThreshold) seq.gates.push_back({GateAxis::kZ, z_angle});
    if (std::abs(x_angle) > kGateElisionThreshold) seq.gates.push_back({GateAxis::kX, x_angle});
  }
  const GroupElement reached = gate_product(seq.gates) * traj.start;
  seq.error_estimate = group_distance(reached, GroupElement::identity());
  seq.splitting_error = group_distance(reached, exp_map(traj.end_point()));
  return seq;
}

//! Turns a sequence steering U0 to I into one synthesizing U0 from I:
//! reverse the order and negate every angle.
inline GateSequence reverse_to_forward(const GateSequence& seq) {
  if (seq.direction != Direction::kToIdentity) {
    throw Error(ErrorCode::kWrongDirection, "sequence is already FROM_IDENTITY");
  }
  GateSequence out = seq;
  out.direction = Direction::kFromIdentity;
  out.gates.assign(seq.gates.rbegin(), seq.gates.rend());
  for (auto& g : out.gates) g.angle = -g.angle;
  return out;
}

//! Asymptotic gate-count figures; the constants hidden in the O(.) are
//! unknown, so only the scale n^6 C^3 / eps^2 is computed.
struct BoundsReport {
  double cost = 0.0;
  int n_qubits = 1;
  double epsilon = 0.0;
  double l_max = 1.0;
  //! n^6 C^3 / eps^2, the order of the approximate gate complexity upper bound.
  double approximate_complexity_scale = 0.0;
  //! C / L_max, a lower bound on G(U0) * T_max.
  double gate_time_product_lower_bound = 0.0;
  std::string lower_bound_form = "C(U0) <= L_max * G(U0) * T_max";
  std::string upper_bound_form = "G(U0, eps) <= O(n^6 * C(U0)^3 / eps^2)";
  std::string disclaimer =
      "asymptotic orders only: the constants are unknown and T_max, G(U0) are not computed";
};

inline BoundsReport bounds_report(double cost, int n_qubits, double epsilon) {
  if (!(cost >= 0.0) || !std::isfinite(cost)) {
    throw Error(ErrorCode::kInvalidConfig, "cost must be finite and non-negative");
  }
  if (!(epsilon > 0.0)) throw Error(ErrorCode::kInvalidConfig, "epsilon must be positive");
  if (n_qubits < 1) throw Error(ErrorCode::kInvalidConfig, "n_qubits must be positive");
  BoundsReport report;
  report.cost = cost;
  report.n_qubits = n_qubits;
  report.epsilon = epsilon;
  report.approximate_complexity_scale =
      std::pow(static_cast<double>(n_qubits), 6) * cost * cost * cost / (epsilon * epsilon);
  report.gate_time_product_lower_bound = cost / report.l_max;
  return report;
}

}  // namespace su2hjb
