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

// Controlled right-invariant flow dU/dt = -i (v1 I_x + v2 I_z) U pushed into
// chart coordinates.

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "su2hjb/error.hpp"
#include "su2hjb/su2.hpp"

namespace su2hjb {

//! Chart radius beyond which the chart derivative is treated as singular.
inline constexpr double kBranchMargin = 0.1;
inline constexpr double kMaxChartRadius = 2.0 * std::numbers::pi - kBranchMargin;

struct ControlVector {
  double v1 = 0.0;  // multiplies I_x
  double v2 = 0.0;  // multiplies I_z

  double norm() const { return std::hypot(v1, v2); }
  //! The control Hamiltonian's coefficients as an algebra element.
  AlgebraElement as_algebra() const { return {v1, 0.0, v2}; }
  friend bool operator==(const ControlVector&, const ControlVector&) = default;
};

//! Running cost l(v) of the minimum-time problem; the shipped problem uses 1.
using RunningCost = std::function<double(const ControlVector&)>;

inline double unit_running_cost(const ControlVector&) { return 1.0; }

//! Unit-norm bang-bang directions, uniformly spaced in angle, counterclockwise
//! from (1, 0).
struct ControlSet {
  std::vector<ControlVector> directions;

  std::size_t size() const { return directions.size(); }
  const ControlVector& operator[](std::size_t k) const { return directions[k]; }
};

inline constexpr int kMinDirections = 8;

inline ControlSet make_control_set(int n_dir) {
  if (n_dir < kMinDirections) {
    throw Error(ErrorCode::kBadResolution,
                "need at least " + std::to_string(kMinDirections) +
                    " control directions, got " + std::to_string(n_dir));
  }
  ControlSet set;
  set.directions.reserve(static_cast<std::size_t>(n_dir));
  for (int k = 0; k < n_dir; ++k) {
    // Quarter turns are written exactly so axis-aligned members carry no
    // rounding noise in the zero component.
    if ((4 * k) % n_dir == 0) {
      constexpr ControlVector quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      set.directions.push_back(quarter[(4 * k) / n_dir]);
      continue;
    }
    const double angle = 2.0 * std::numbers::pi * k / n_dir;
    set.directions.push_back({std::cos(angle), std::sin(angle)});
  }
  return set;
}

//! Time derivative of the chart point (da/dt, db/dt, dc/dt).
struct ChartVelocity {
  double da = 0.0;
  double db = 0.0;
  double dc = 0.0;

  double operator[](int k) const { return k == 0 ? da : (k == 1 ? db : dc); }
  double l1_norm() const { return std::abs(da) + std::abs(db) + std::abs(dc); }
  AlgebraElement as_algebra() const { return {da, db, dc}; }
};

//! (r/2) cot(r/2), with its series near r = 0.
inline double half_cot_factor(double r) {
  if (r < 1e-4) return 1.0 - r * r / 12.0;
  const double half = 0.5 * r;
  return half * std::cos(half) / std::sin(half);
}

//! Inverse right-trivialized differential of exp applied to the increment w:
//! w_par + (r/2) cot(r/2) w_perp - (x cross w) / 2.
inline AlgebraElement dexp_inverse(const AlgebraElement& x, const AlgebraElement& w) {
  const double r = x.norm();
  const AlgebraElement twist = cross(x, w);
  AlgebraElement out;
  if (r == 0.0) {
    out = w;
  } else {
    const AlgebraElement n = (1.0 / r) * x;
    const AlgebraElement par = dot(n, w) * n;
    out = par + half_cot_factor(r) * (w - par);
  }
  return out - 0.5 * twist;
}

namespace detail {

inline ChartVelocity to_velocity(const AlgebraElement& f) { return {f.a, f.b, f.c}; }

}  // namespace detail

//! Chart velocity for control v at x. Throws NEAR_BRANCH when |x| exceeds
//! kMaxChartRadius.
inline ChartVelocity coordinate_velocity(const AlgebraElement& x, const ControlVector& v) {
  if (!(x.norm() <= kMaxChartRadius)) {
    throw Error(ErrorCode::kNearBranch,
                "chart radius " + std::to_string(x.norm()) + " too close to 2*pi");
  }
  return detail::to_velocity(dexp_inverse(x, v.as_algebra()));
}

//! f(x, (1,0)) and f(x, (0,1)); the flow is control-affine, so
//! f(x, v) = v1 * x_part + v2 * z_part.
struct VelocityBasis {
  ChartVelocity x_part;
  ChartVelocity z_part;

  ChartVelocity operator()(const ControlVector& v) const {
    return {v.v1 * x_part.da + v.v2 * z_part.da, v.v1 * x_part.db + v.v2 * z_part.db,
            v.v1 * x_part.dc + v.v2 * z_part.dc};
  }
};

inline VelocityBasis velocity_basis(const AlgebraElement& x) {
  return {coordinate_velocity(x, {1.0, 0.0}), coordinate_velocity(x, {0.0, 1.0})};
}

//! Exact group step exp(-i dt (v1 I_x + v2 I_z)) U in chart coordinates.
inline AlgebraElement flow_step(const AlgebraElement& x, const ControlVector& v, double dt) {
  return log_map(exp_map(dt * v.as_algebra()) * exp_map(x)).point;
}

}  // namespace su2hjb
