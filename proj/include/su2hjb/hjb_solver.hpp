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

// Discounted minimum-time value S = 1 - exp(-C) on a uniform chart grid,
// computed by upwind (Kushner-Dupuis) value iteration with Jacobi sweeps.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "su2hjb/dynamics.hpp"
#include "su2hjb/error.hpp"
#include "su2hjb/su2.hpp"

namespace su2hjb {

struct SolverConfig {
  double h = 0.1;
  double extent = 3.0;
  //! Frobenius radius around I identified with the target; 1.5 h by default.
  double target_radius = 0.15;
  int n_dir = 16;
  double tol = 1e-6;
  int max_iters = 3000;
  RunningCost running_cost = unit_running_cost;

  static SolverConfig with_spacing(double h, double extent = 3.0) {
    SolverConfig config;
    config.h = h;
    config.extent = extent;
    config.target_radius = 1.5 * h;
    return config;
  }

  void validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidConfig, what); };
    if (!(h > 0.0) || !std::isfinite(h)) fail("grid spacing must be positive");
    if (!(extent >= h) || !std::isfinite(extent)) fail("grid extent must be at least h");
    if (!(target_radius > 0.0 && target_radius < 0.5)) fail("target radius must lie in (0, 0.5)");
    if (n_dir < kMinDirections) {
      throw Error(ErrorCode::kBadResolution, "need at least 8 control directions");
    }
    // tol = 0 is accepted: it requests an exact fixed point.
    if (!(tol >= 0.0)) fail("tolerance must be non-negative");
    if (max_iters < 1) fail("max_iters must be positive");
    if (!running_cost) fail("running cost must be set");
  }
};

enum class CellKind : std::uint8_t { kInterior = 0, kTarget = 1, kExcluded = 2 };

//! Cube [-R, R]^3 sampled at spacing h; the center cell is exactly (0,0,0).
//! Linear index runs a-fastest, then b, then c.
class Grid {
 public:
  Grid() = default;

  Grid(double h, double extent, double target_radius) : h_(h), extent_(extent) {
    half_ = static_cast<int>(std::floor(extent / h + 1e-9));
    dim_ = 2 * half_ + 1;
    kinds_.resize(cell_count());
    const GroupElement id = GroupElement::identity();
    for (int k = 0; k < dim_; ++k) {
      for (int j = 0; j < dim_; ++j) {
        for (int i = 0; i < dim_; ++i) {
          const AlgebraElement x = point(i, j, k);
          CellKind kind = CellKind::kInterior;
          if (!(x.norm() < kMaxChartRadius)) {
            kind = CellKind::kExcluded;
          } else if (group_distance(exp_map(x), id) <= target_radius) {
            kind = CellKind::kTarget;
          }
          kinds_[index(i, j, k)] = kind;
        }
      }
    }
  }

  double spacing() const { return h_; }
  double extent() const { return extent_; }
  //! Cells per axis, 2 floor(R/h) + 1.
  int dim() const { return dim_; }
  int half() const { return half_; }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(dim_) * static_cast<std::size_t>(dim_) *
           static_cast<std::size_t>(dim_);
  }

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dim_) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dim_) * static_cast<std::size_t>(k));
  }

  std::array<int, 3> cell(std::size_t idx) const {
    const auto d = static_cast<std::size_t>(dim_);
    return {static_cast<int>(idx % d), static_cast<int>((idx / d) % d),
            static_cast<int>(idx / (d * d))};
  }

  double coordinate(int i) const { return (i - half_) * h_; }

  AlgebraElement point(int i, int j, int k) const {
    return {coordinate(i), coordinate(j), coordinate(k)};
  }

  AlgebraElement point(std::size_t idx) const {
    const auto c = cell(idx);
    return point(c[0], c[1], c[2]);
  }

  CellKind kind(std::size_t idx) const { return kinds_[idx]; }
  const std::vector<CellKind>& kinds() const { return kinds_; }

  std::size_t count(CellKind kind) const {
    return static_cast<std::size_t>(std::count(kinds_.begin(), kinds_.end(), kind));
  }

  //! Fractional grid index of a chart coordinate.
  double fractional_index(double coord) const { return coord / h_ + half_; }

  bool contains(const AlgebraElement& x) const {
    for (int k = 0; k < 3; ++k) {
      const double f = fractional_index(x[k]);
      if (!(f >= -1e-9 && f <= dim_ - 1 + 1e-9)) return false;
    }
    return true;
  }

 private:
  double h_ = 0.0;
  double extent_ = 0.0;
  int half_ = 0;
  int dim_ = 0;
  std::vector<CellKind> kinds_;
};

//! Throws EMPTY_TARGET when the target set has collapsed to the center cell.
inline Grid build_grid(const SolverConfig& config) {
  config.validate();
  Grid grid(config.h, config.extent, config.target_radius);
  if (grid.count(CellKind::kTarget) < 2) {
    throw Error(ErrorCode::kEmptyTarget,
                "target radius " + std::to_string(config.target_radius) +
                    " resolves no cell besides the center at h = " + std::to_string(config.h));
  }
  return grid;
}

struct ValueField {
  Grid grid;
  SolverConfig config;
  //! Discounted value per cell, a-fastest.
  std::vector<double> values;
  int iterations = 0;
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
  std::vector<double> residual_history;

  double at(int i, int j, int k) const { return values[grid.index(i, j, k)]; }

  //! S^0: 0 on target cells, 1 elsewhere.
  static ValueField initial(const SolverConfig& config) {
    ValueField field;
    field.grid = build_grid(config);
    field.config = config;
    field.values.assign(field.grid.cell_count(), 1.0);
    for (std::size_t idx = 0; idx < field.values.size(); ++idx) {
      if (field.grid.kind(idx) == CellKind::kTarget) field.values[idx] = 0.0;
    }
    return field;
  }
};

namespace detail {

//! One evaluation of the upwind scheme for a single control:
//!   (h l + sum_i S^i_+ f^i_+ + S^i_- f^i_-) / (h + |f|_1).
template <std::size_t N>
inline double upwind_update(double h, double cost, const std::array<double, N>& f,
                            const std::array<double, N>& plus_values,
                            const std::array<double, N>& minus_values) {
  double numerator = h * cost;
  double l1 = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    if (f[i] > 0.0) {
      numerator += plus_values[i] * f[i];
      l1 += f[i];
    } else {
      numerator -= minus_values[i] * f[i];
      l1 -= f[i];
    }
  }
  return numerator / (h + l1);
}

//! Precomputed stencil data for repeated Jacobi sweeps over a padded copy of
//! the field (one ghost layer of value 1 around the cube).
class SweepKernel {
 public:
  SweepKernel(const Grid& grid, const ControlSet& controls, const RunningCost& cost)
      : grid_(grid), dim_(grid.dim()), pdim_(grid.dim() + 2) {
    costs_.reserve(controls.size());
    for (const auto& v : controls.directions) {
      controls_.push_back(v);
      costs_.push_back(cost(v));
    }
    for (std::size_t idx = 0; idx < grid.cell_count(); ++idx) {
      if (grid.kind(idx) != CellKind::kInterior) continue;
      const auto c = grid.cell(idx);
      cells_.push_back({idx, padded_index(c[0], c[1], c[2]), velocity_basis(grid.point(idx))});
    }
  }

  std::size_t padded_size() const {
    return static_cast<std::size_t>(pdim_) * pdim_ * pdim_;
  }

  std::size_t padded_index(int i, int j, int k) const {
    return static_cast<std::size_t>(i + 1) +
           static_cast<std::size_t>(pdim_) *
               (static_cast<std::size_t>(j + 1) + static_cast<std::size_t>(pdim_) * static_cast<std::size_t>(k + 1));
  }

  std::vector<double> pad(const std::vector<double>& values) const {
    std::vector<double> padded(padded_size(), 1.0);
    for (int k = 0; k < dim_; ++k)
      for (int j = 0; j < dim_; ++j)
        for (int i = 0; i < dim_; ++i) padded[padded_index(i, j, k)] = values[grid_.index(i, j, k)];
    return padded;
  }

  void unpad(const std::vector<double>& padded, std::vector<double>& values) const {
    for (int k = 0; k < dim_; ++k)
      for (int j = 0; j < dim_; ++j)
        for (int i = 0; i < dim_; ++i) values[grid_.index(i, j, k)] = padded[padded_index(i, j, k)];
  }

  //! Reads only `previous`, writes interior cells of `next`; returns the
  //! sup-norm change.
  double sweep(const std::vector<double>& previous, std::vector<double>& next) const {
    const std::array<std::size_t, 3> stride = {1, static_cast<std::size_t>(pdim_),
                                               static_cast<std::size_t>(pdim_) * pdim_};
    const double h = grid_.spacing();
    double residual = 0.0;
    for (const auto& cell : cells_) {
      const std::size_t p = cell.padded;
      const std::array<double, 3> plus = {previous[p + stride[0]], previous[p + stride[1]],
                                          previous[p + stride[2]]};
      const std::array<double, 3> minus = {previous[p - stride[0]], previous[p - stride[1]],
                                           previous[p - stride[2]]};
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t d = 0; d < controls_.size(); ++d) {
        const ChartVelocity f = cell.basis(controls_[d]);
        const double candidate =
            upwind_update<3>(h, costs_[d], {f.da, f.db, f.dc}, plus, minus);
        if (std::isnan(candidate)) {
          throw Error(ErrorCode::kNanDetected,
                      "scheme produced NaN at cell " + std::to_string(cell.index));
        }
        best = std::min(best, candidate);
      }
      next[p] = best;
      residual = std::max(residual, std::abs(best - previous[p]));
    }
    return residual;
  }

 private:
  struct Cell {
    std::size_t index;
    std::size_t padded;
    VelocityBasis basis;
  };

  const Grid& grid_;
  int dim_;
  int pdim_;
  std::vector<ControlVector> controls_;
  std::vector<double> costs_;
  std::vector<Cell> cells_;
};

}  // namespace detail

struct SweepResult {
  ValueField field;
  double residual = 0.0;
};

//! One Jacobi sweep: every interior cell is recomputed from the previous
//! iterate; target and excluded cells are left untouched.
inline SweepResult value_iteration_sweep(const ValueField& field, const ControlSet& controls) {
  const detail::SweepKernel kernel(field.grid, controls, field.config.running_cost);
  const std::vector<double> previous = kernel.pad(field.values);
  std::vector<double> next = previous;
  SweepResult result{field, kernel.sweep(previous, next)};
  kernel.unpad(next, result.field.values);
  result.field.iterations = field.iterations + 1;
  result.field.residual = result.residual;
  result.field.residual_history.push_back(result.residual);
  result.field.converged = result.residual <= field.config.tol;
  return result;
}

//! Iterates sweeps from S^0 until the sup-norm change is at most tol or
//! max_iters is hit. A field that did not converge is still returned with
//! converged == false; see require_converged().
inline ValueField solve(const SolverConfig& config) {
  ValueField field = ValueField::initial(config);
  const ControlSet controls = make_control_set(config.n_dir);
  const detail::SweepKernel kernel(field.grid, controls, config.running_cost);
  std::vector<double> current = kernel.pad(field.values);
  std::vector<double> next = current;
  field.iterations = 0;
  while (field.iterations < config.max_iters) {
    const double residual = kernel.sweep(current, next);
    current.swap(next);
    ++field.iterations;
    field.residual = residual;
    field.residual_history.push_back(residual);
    if (residual <= config.tol) {
      field.converged = true;
      break;
    }
  }
  kernel.unpad(current, field.values);
  return field;
}

inline void require_converged(const ValueField& field) {
  if (!field.converged) {
    throw Error(ErrorCode::kNoConvergence,
                "no convergence after " + std::to_string(field.iterations) +
                    " sweeps, residual " + std::to_string(field.residual));
  }
}

//! Trilinear interpolation of S; points outside the grid read as 1, the
//! value assigned to every cell beyond the computational domain.
inline double sample_value(const ValueField& field, const AlgebraElement& x) {
  const Grid& grid = field.grid;
  if (!grid.contains(x)) return 1.0;
  std::array<int, 3> base{};
  std::array<double, 3> frac{};
  for (int k = 0; k < 3; ++k) {
    const double f = std::clamp(grid.fractional_index(x[k]), 0.0, static_cast<double>(grid.dim() - 1));
    int b = static_cast<int>(std::floor(f));
    b = std::min(b, grid.dim() - 2);
    base[k] = std::max(b, 0);
    frac[k] = f - base[k];
  }
  double s = 0.0;
  for (int corner = 0; corner < 8; ++corner) {
    double weight = 1.0;
    std::array<int, 3> c{};
    for (int k = 0; k < 3; ++k) {
      const int bit = (corner >> k) & 1;
      weight *= bit ? frac[k] : 1.0 - frac[k];
      c[k] = std::min(base[k] + bit, grid.dim() - 1);
    }
    if (weight != 0.0) s += weight * field.at(c[0], c[1], c[2]);
  }
  return s;
}

//! Same as sample_value but requires x to lie inside the grid.
inline double interpolate_value(const ValueField& field, const AlgebraElement& x) {
  if (!field.grid.contains(x)) {
    throw Error(ErrorCode::kOutOfGrid, "chart point outside the grid cube");
  }
  return sample_value(field, x);
}

inline constexpr double kUnreachableMargin = 1e-12;

//! C = -ln(1 - S) from a discounted value.
inline double minimum_time_from_discounted(double s) {
  if (s >= 1.0 - kUnreachableMargin) {
    throw Error(ErrorCode::kUnreachable, "discounted value " + std::to_string(s) + " is 1");
  }
  return -std::log1p(-s);
}

//! Un-normalized minimum time at a chart point, from the interpolated S.
inline double kruskov_inverse(const ValueField& field, const AlgebraElement& x) {
  return minimum_time_from_discounted(interpolate_value(field, x));
}

struct SlicePlane {
  int first_axis = 0;   // 0 = a, 1 = b, 2 = c
  int second_axis = 1;
  double offset = 0.0;  // coordinate along the remaining axis

  int normal_axis() const { return 3 - first_axis - second_axis; }
};

struct SliceRow {
  double first = 0.0;
  double second = 0.0;
  double time = 0.0;  // +inf where unreachable
};

struct SliceTable {
  SlicePlane plane;
  std::vector<SliceRow> rows;
};

inline char axis_name(int axis) { return "abc"[axis]; }

//! Minimum-time values C over one coordinate plane, first axis fastest.
inline SliceTable slice_export(const ValueField& field, const SlicePlane& plane) {
  const Grid& grid = field.grid;
  if (plane.first_axis == plane.second_axis || plane.first_axis < 0 || plane.first_axis > 2 ||
      plane.second_axis < 0 || plane.second_axis > 2) {
    throw Error(ErrorCode::kInvalidConfig, "slice plane needs two distinct axes");
  }
  const double f = grid.fractional_index(plane.offset);
  const long nearest = std::lround(f);
  if (std::abs(f - nearest) > 1e-6 || nearest < 0 || nearest >= grid.dim()) {
    throw Error(ErrorCode::kOutOfGrid, "slice offset " + std::to_string(plane.offset) +
                                           " is not a grid coordinate");
  }
  SliceTable table{plane, {}};
  table.rows.reserve(static_cast<std::size_t>(grid.dim()) * grid.dim());
  std::array<int, 3> c{};
  c[plane.normal_axis()] = static_cast<int>(nearest);
  for (int q = 0; q < grid.dim(); ++q) {
    for (int p = 0; p < grid.dim(); ++p) {
      c[plane.first_axis] = p;
      c[plane.second_axis] = q;
      const double s = field.at(c[0], c[1], c[2]);
      const double time = s >= 1.0 - kUnreachableMargin
                              ? std::numeric_limits<double>::infinity()
                              : -std::log1p(-s);
      table.rows.push_back({grid.coordinate(p), grid.coordinate(q), time});
    }
  }
  return table;
}

}  // namespace su2hjb
