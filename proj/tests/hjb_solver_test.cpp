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

#include "su2hjb/hjb_solver.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "su2hjb/oracle.hpp"
#include "test_oracles.hpp"

using namespace su2hjb;

namespace {

const ValueField& small_field() {
  static const ValueField field = [] {
    SolverConfig config = SolverConfig::with_spacing(0.1, 0.5);
    return solve(config);
  }();
  return field;
}

const ValueField& coarse_field() {
  static const ValueField field = solve(SolverConfig::with_spacing(0.2, 2.0));
  return field;
}

SolverConfig coarse_config() {
  SolverConfig config = SolverConfig::with_spacing(0.5, 1.0);
  config.target_radius = 0.45;
  return config;
}

template <typename F>
ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kBadFormat;
}

}  // namespace

TEST(hjb_grid, small_grid_construction) {
  SolverConfig config = SolverConfig::with_spacing(0.5, 1.0);
  config.target_radius = 0.45;
  const Grid grid = build_grid(config);
  EXPECT_EQ(grid.dim(), 5);
  const std::size_t center = grid.index(2, 2, 2);
  EXPECT_EQ(grid.point(center), (AlgebraElement{0, 0, 0}));
  EXPECT_EQ(grid.kind(center), CellKind::kTarget);
}

TEST(hjb_grid, dims_follow_floor_rule) {
  EXPECT_EQ(build_grid(SolverConfig::with_spacing(0.1, 3.0)).dim(), 61);
  EXPECT_EQ(build_grid(SolverConfig::with_spacing(0.2, 2.0)).dim(), 21);
  EXPECT_EQ(build_grid(SolverConfig::with_spacing(0.3, 1.0)).dim(), 7);
}

TEST(hjb_grid, excluded_shell) {
  // Corner radius sqrt(3) * 3.5 ~ 6.06 stays below 2 pi - 0.1 ~ 6.18.
  const Grid inside = build_grid(SolverConfig::with_spacing(0.1, 3.5));
  EXPECT_EQ(inside.count(CellKind::kExcluded), 0u);
  // Corners reach ~6.93 at R = 4.
  const Grid beyond = build_grid(SolverConfig::with_spacing(0.1, 4.0));
  EXPECT_GT(beyond.count(CellKind::kExcluded), 0u);
  EXPECT_EQ(beyond.kind(beyond.index(0, 0, 0)), CellKind::kExcluded);
  for (std::size_t idx = 0; idx < beyond.cell_count(); ++idx) {
    const double r = beyond.point(idx).norm();
    EXPECT_EQ(beyond.kind(idx) == CellKind::kExcluded, !(r < kMaxChartRadius));
  }
}

TEST(hjb_grid, target_cells_are_within_radius) {
  const SolverConfig config = SolverConfig::with_spacing(0.1, 1.0);
  const Grid grid = build_grid(config);
  for (std::size_t idx = 0; idx < grid.cell_count(); ++idx) {
    const double d = group_distance(exp_map(grid.point(idx)), GroupElement::identity());
    EXPECT_EQ(grid.kind(idx) == CellKind::kTarget, d <= config.target_radius);
  }
}

TEST(hjb_grid, collapsed_target_is_rejected) {
  SolverConfig config = SolverConfig::with_spacing(0.5, 1.0);
  config.target_radius = 0.05;
  EXPECT_EQ(error_code_of([&] { build_grid(config); }), ErrorCode::kEmptyTarget);
}

TEST(hjb_grid, invalid_configs) {
  SolverConfig config;
  config.h = 0.0;
  EXPECT_EQ(error_code_of([&] { config.validate(); }), ErrorCode::kInvalidConfig);
  config = SolverConfig{};
  config.target_radius = 0.6;
  EXPECT_EQ(error_code_of([&] { config.validate(); }), ErrorCode::kInvalidConfig);
  config = SolverConfig{};
  config.n_dir = 6;
  EXPECT_EQ(error_code_of([&] { config.validate(); }), ErrorCode::kBadResolution);
  config = SolverConfig{};
  config.tol = -1.0;
  EXPECT_EQ(error_code_of([&] { config.validate(); }), ErrorCode::kInvalidConfig);
}

TEST(hjb_sweep, all_zero_field_is_a_fixed_point) {
  // Every cell of this 3x3x3 grid lies within the target radius.
  SolverConfig config = SolverConfig::with_spacing(0.2, 0.2);
  config.target_radius = 0.3;
  ValueField field = ValueField::initial(config);
  ASSERT_EQ(field.grid.count(CellKind::kTarget), field.grid.cell_count());
  std::fill(field.values.begin(), field.values.end(), 0.0);
  const SweepResult result = value_iteration_sweep(field, make_control_set(16));
  EXPECT_EQ(result.residual, 0.0);
  EXPECT_EQ(result.field.values, field.values);
}

TEST(hjb_sweep, three_cell_toy) {
  // Cells at -h, 0, +h; the center is the target; each outer cell flows
  // toward the center at unit speed, the neighbor beyond the grid reads 1.
  const double h = 0.1;
  std::array<double, 3> s = {1.0, 0.0, 1.0};
  auto sweep = [&](const std::array<double, 3>& old) {
    std::array<double, 3> next = old;
    next[0] = detail::upwind_update<1>(h, 1.0, {+1.0}, {old[1]}, {1.0});
    next[2] = detail::upwind_update<1>(h, 1.0, {-1.0}, {1.0}, {old[1]});
    return next;
  };
  const auto first = sweep(s);
  EXPECT_NEAR(first[0], h / (1 + h), 1e-12);
  EXPECT_NEAR(first[2], h / (1 + h), 1e-12);
  EXPECT_NEAR(first[2], 0.0909090909090909, 1e-12);
  EXPECT_EQ(first[1], 0.0);
  const auto second = sweep(first);
  EXPECT_EQ(second, first);
}

TEST(hjb_sweep, first_sweep_next_to_target_on_axis) {
  // (0.3, 0, 0) borders the target cell (0.2, 0, 0); the straight control
  // (-1, 0) gives f = (-1, 0, 0) and the value h / (1 + h).
  const SolverConfig config = SolverConfig::with_spacing(0.1, 1.0);
  const ValueField initial = ValueField::initial(config);
  ASSERT_EQ(initial.grid.kind(initial.grid.index(12, 10, 10)), CellKind::kTarget);
  ASSERT_EQ(initial.grid.kind(initial.grid.index(13, 10, 10)), CellKind::kInterior);
  const SweepResult result = value_iteration_sweep(initial, make_control_set(16));
  EXPECT_NEAR(result.field.at(13, 10, 10), 0.1 / 1.1, 1e-12);
}

TEST(hjb_sweep, monotone_improvement_and_pinned_target) {
  ValueField field = ValueField::initial(SolverConfig::with_spacing(0.2, 1.2));
  const ControlSet controls = make_control_set(16);
  double last_residual = std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < 40; ++sweep) {
    const SweepResult next = value_iteration_sweep(field, controls);
    for (std::size_t idx = 0; idx < field.values.size(); ++idx) {
      EXPECT_LE(next.field.values[idx], field.values[idx]);
      EXPECT_GE(next.field.values[idx], 0.0);
      if (field.grid.kind(idx) == CellKind::kTarget) {
        EXPECT_EQ(next.field.values[idx], 0.0);
      }
    }
    if (sweep > 0) {
      EXPECT_LE(next.residual, last_residual);
    }
    last_residual = next.residual;
    field = next.field;
  }
}

TEST(hjb_solve, small_solve) {
  const ValueField& field = small_field();
  EXPECT_TRUE(field.converged);
  EXPECT_LE(field.residual, 1e-6);
  EXPECT_EQ(field.iterations, static_cast<int>(field.residual_history.size()));
  EXPECT_EQ(kruskov_inverse(field, {0, 0, 0}), 0.0);
  // Along the a axis from the center outward S never decreases.
  const int c = field.grid.half();
  for (int i = c; i + 1 < field.grid.dim(); ++i) {
    EXPECT_LE(field.at(i, c, c), field.at(i + 1, c, c));
    EXPECT_LE(field.at(c - (i - c), c, c), field.at(c - (i - c) - 1, c, c));
  }
  const double h = field.grid.spacing();
  EXPECT_NEAR(kruskov_inverse(field, {0.3, 0, 0}), 0.3, std::max(0.15, 3 * h));
}

TEST(hjb_solve, axis_values_against_dijkstra) {
  const ValueField& field = small_field();
  OracleOptions options;
  options.extent = 0.5;
  for (double theta : {0.3, 0.4}) {
    const double oracle = dijkstra_min_time(exp_map({theta, 0, 0}), options).time;
    EXPECT_NEAR(kruskov_inverse(field, {theta, 0, 0}), oracle, 0.3);
  }
}

TEST(hjb_solve, deterministic) {
  const SolverConfig config = SolverConfig::with_spacing(0.2, 1.0);
  const ValueField a = solve(config);
  const ValueField b = solve(config);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(hjb_solve, no_convergence_is_reported) {
  SolverConfig config = SolverConfig::with_spacing(0.2, 1.0);
  config.max_iters = 3;
  const ValueField field = solve(config);
  EXPECT_FALSE(field.converged);
  EXPECT_EQ(field.iterations, 3);
  EXPECT_EQ(error_code_of([&] { require_converged(field); }), ErrorCode::kNoConvergence);
}

TEST(hjb_solve, axis_error_shrinks_with_refinement) {
  const ValueField coarse = solve(SolverConfig::with_spacing(0.2, 2.2));
  const ValueField fine = solve(SolverConfig::with_spacing(0.1, 2.2));
  for (double theta : {0.6, 1.0, 2.0}) {
    const double coarse_err = std::abs(kruskov_inverse(coarse, {theta, 0, 0}) - theta);
    const double fine_err = std::abs(kruskov_inverse(fine, {theta, 0, 0}) - theta);
    EXPECT_LT(fine_err, coarse_err) << theta;
    // Refinement stays within the coarse grid's error bound.
    EXPECT_LT(std::abs(kruskov_inverse(fine, {theta, 0, 0}) - kruskov_inverse(coarse, {theta, 0, 0})),
              std::max(0.2, 3 * 0.2));
  }
}

TEST(hjb_solve, values_bounded_and_target_pinned) {
  const ValueField& field = coarse_field();
  for (std::size_t idx = 0; idx < field.values.size(); ++idx) {
    const double s = field.values[idx];
    if (field.grid.kind(idx) == CellKind::kTarget) {
      EXPECT_EQ(s, 0.0);
    } else {
      EXPECT_GT(s, 0.0);
      EXPECT_LE(s, 1.0);
    }
  }
}

TEST(hjb_kruskov, inverse_transform) {
  EXPECT_NEAR(minimum_time_from_discounted(0.5), 0.6931471805599453, 1e-15);
  EXPECT_NEAR(minimum_time_from_discounted(1.0 - std::exp(-2.0)), 2.0, 1e-12);
  EXPECT_EQ(minimum_time_from_discounted(0.0), 0.0);
  EXPECT_EQ(error_code_of([] { minimum_time_from_discounted(1.0); }), ErrorCode::kUnreachable);

  ValueField field = ValueField::initial(coarse_config());
  field.values[field.grid.index(4, 2, 2)] = 0.5;
  EXPECT_NEAR(kruskov_inverse(field, {1.0, 0, 0}), std::log(2.0), 1e-15);
  EXPECT_EQ(kruskov_inverse(field, {0, 0, 0}), 0.0);
  EXPECT_EQ(error_code_of([&] { kruskov_inverse(field, {1.0, 1.0, 1.0}); }),
            ErrorCode::kUnreachable);
  EXPECT_EQ(error_code_of([&] { kruskov_inverse(field, {1.6, 0, 0}); }), ErrorCode::kOutOfGrid);
}

TEST(hjb_kruskov, trilinear_interpolation_is_exact_on_affine_data) {
  ValueField field = ValueField::initial(coarse_config());
  for (std::size_t idx = 0; idx < field.values.size(); ++idx) {
    const AlgebraElement x = field.grid.point(idx);
    field.values[idx] = 0.5 + 0.1 * x.a - 0.05 * x.b + 0.02 * x.c;
  }
  const AlgebraElement probe{0.31, -0.77, 0.12};
  EXPECT_NEAR(interpolate_value(field, probe), 0.5 + 0.031 + 0.0385 + 0.0024, 1e-14);
  EXPECT_EQ(sample_value(field, {2.0, 0, 0}), 1.0);
}

TEST(hjb_slice, center_plane) {
  const ValueField& field = coarse_field();
  const SliceTable table = slice_export(field, {0, 1, 0.0});
  ASSERT_EQ(table.rows.size(), 21u * 21u);
  bool saw_center = false;
  for (const auto& row : table.rows) {
    EXPECT_GE(row.time, 0.0);
    if (row.first == 0.0 && row.second == 0.0) {
      saw_center = true;
      EXPECT_EQ(row.time, 0.0);
    }
  }
  EXPECT_TRUE(saw_center);
}

TEST(hjb_slice, x_and_z_controls_are_symmetric) {
  const ValueField& field = coarse_field();
  const SliceTable ab = slice_export(field, {0, 1, 0.0});
  const SliceTable cb = slice_export(field, {2, 1, 0.0});
  ASSERT_EQ(ab.rows.size(), cb.rows.size());
  const double h = field.grid.spacing();
  for (std::size_t k = 0; k < ab.rows.size(); ++k) {
    EXPECT_EQ(ab.rows[k].first, cb.rows[k].first);
    EXPECT_EQ(ab.rows[k].second, cb.rows[k].second);
    EXPECT_NEAR(ab.rows[k].time, cb.rows[k].time, 2 * h);
  }
}

TEST(hjb_slice, off_grid_offset) {
  const ValueField& field = coarse_field();
  EXPECT_EQ(error_code_of([&] { slice_export(field, {0, 1, 0.05}); }), ErrorCode::kOutOfGrid);
  EXPECT_EQ(error_code_of([&] { slice_export(field, {0, 1, 5.0}); }), ErrorCode::kOutOfGrid);
  EXPECT_NO_THROW(slice_export(field, {1, 2, 0.4}));
}
