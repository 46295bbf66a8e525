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

#include "su2hjb/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "test_oracles.hpp"

using namespace su2hjb;
using su2hjb::testing::richardson_velocity;

namespace {

double relative_error(const ChartVelocity& f, const AlgebraElement& g) {
  const AlgebraElement diff = f.as_algebra() - g;
  return diff.norm() / std::max(g.norm(), 1e-300);
}

}  // namespace

TEST(dynamics, velocity_at_identity_is_the_control) {
  const ChartVelocity f = coordinate_velocity({0, 0, 0}, {1, 0});
  EXPECT_EQ(f.da, 1.0);
  EXPECT_EQ(f.db, 0.0);
  EXPECT_EQ(f.dc, 0.0);
  std::mt19937_64 rng(1);
  for (int n = 0; n < 20; ++n) {
    const ControlVector v = su2hjb::testing::random_control(rng);
    const ChartVelocity g = coordinate_velocity({0, 0, 0}, v);
    EXPECT_EQ(g.da, v.v1);
    EXPECT_EQ(g.db, 0.0);
    EXPECT_EQ(g.dc, v.v2);
  }
}

TEST(dynamics, flow_along_own_axis_is_linear) {
  const ChartVelocity f = coordinate_velocity({1.0, 0, 0}, {1, 0});
  EXPECT_NEAR(f.da, 1.0, 1e-15);
  EXPECT_NEAR(f.db, 0.0, 1e-15);
  EXPECT_NEAR(f.dc, 0.0, 1e-15);
  const AlgebraElement fd = richardson_velocity({1.0, 0, 0}, {1, 0}, 1e-6);
  EXPECT_LT(relative_error(f, fd), 1e-8);
}

TEST(dynamics, velocity_off_axis_matches_finite_difference) {
  const AlgebraElement x{0, 1.0, 0};
  const ChartVelocity f = coordinate_velocity(x, {0, 1});
  const AlgebraElement fd = richardson_velocity(x, {0, 1}, 1e-6);
  EXPECT_LT(relative_error(f, fd), 1e-8);
  // (r/2) cot(r/2) on the perpendicular Z increment, and the twist -x cross w / 2.
  EXPECT_NEAR(f.da, -0.5, 1e-14);
  EXPECT_NEAR(f.db, 0.0, 1e-14);
  EXPECT_NEAR(f.dc, 0.5 / std::tan(0.5), 1e-14);
}

TEST(dynamics, closed_form_matches_finite_difference_property) {
  std::mt19937_64 rng(2024);
  const ControlSet controls = make_control_set(8);
  for (int n = 0; n < 60; ++n) {
    const AlgebraElement x = su2hjb::testing::random_point(rng, kMaxChartRadius - 0.2);
    for (const auto& v : controls.directions) {
      const ChartVelocity f = coordinate_velocity(x, v);
      const AlgebraElement fd = richardson_velocity(x, v, 1e-5);
      EXPECT_LE(relative_error(f, fd), 1e-6) << x.a << ' ' << x.b << ' ' << x.c;
    }
  }
}

TEST(dynamics, velocity_is_linear_in_control) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int n = 0; n < 100; ++n) {
    const AlgebraElement x = su2hjb::testing::random_point(rng, 5.5);
    const ControlVector v = su2hjb::testing::random_control(rng);
    const ControlVector w = su2hjb::testing::random_control(rng);
    const double alpha = coef(rng);
    const double beta = coef(rng);
    const ChartVelocity lhs =
        coordinate_velocity(x, {alpha * v.v1 + beta * w.v1, alpha * v.v2 + beta * w.v2});
    const ChartVelocity fv = coordinate_velocity(x, v);
    const ChartVelocity fw = coordinate_velocity(x, w);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(lhs[k], alpha * fv[k] + beta * fw[k], 1e-9);
  }
}

TEST(dynamics, velocity_basis_agrees_with_direct_evaluation) {
  const AlgebraElement x{0.7, -1.2, 2.1};
  const VelocityBasis basis = velocity_basis(x);
  const ControlVector v{0.6, -0.8};
  const ChartVelocity direct = coordinate_velocity(x, v);
  const ChartVelocity combined = basis(v);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(direct[k], combined[k], 1e-14);
}

TEST(dynamics, near_branch_is_rejected) {
  const double r = 2 * std::numbers::pi - 0.05;
  try {
    coordinate_velocity({r, 0, 0}, {1, 0});
    FAIL() << "expected NEAR_BRANCH";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNearBranch);
  }
  EXPECT_NO_THROW(coordinate_velocity({2 * std::numbers::pi - 0.15, 0, 0}, {1, 0}));
}

TEST(dynamics, control_set_resolution) {
  try {
    make_control_set(4);
    FAIL() << "expected BAD_RESOLUTION";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadResolution);
  }
  const ControlSet eight = make_control_set(8);
  ASSERT_EQ(eight.size(), 8u);
  EXPECT_EQ(eight[0], (ControlVector{1, 0}));
  EXPECT_EQ(eight[2], (ControlVector{0, 1}));
  EXPECT_EQ(eight[4], (ControlVector{-1, 0}));
  EXPECT_EQ(eight[6], (ControlVector{0, -1}));
}

TEST(dynamics, control_set_members_are_distinct_unit_vectors) {
  const ControlSet set = make_control_set(16);
  ASSERT_EQ(set.size(), 16u);
  for (std::size_t i = 0; i < set.size(); ++i) {
    EXPECT_NEAR(set[i].norm(), 1.0, 1e-12);
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      EXPECT_GT(std::hypot(set[i].v1 - set[j].v1, set[i].v2 - set[j].v2), 0.1);
    }
    const std::size_t next = (i + 1) % set.size();
    const double step = std::atan2(set[i].v1 * set[next].v2 - set[i].v2 * set[next].v1,
                                   set[i].v1 * set[next].v1 + set[i].v2 * set[next].v2);
    EXPECT_NEAR(step, 2 * std::numbers::pi / 16, 1e-12);
  }
}

TEST(dynamics, flow_step_matches_velocity_to_first_order) {
  const AlgebraElement x{0.4, 0.9, -1.3};
  const ControlVector v{0.0, -1.0};
  const ChartVelocity f = coordinate_velocity(x, v);
  for (double dt : {1e-2, 5e-3}) {
    const AlgebraElement step = flow_step(x, v, dt);
    const AlgebraElement predicted = x + dt * f.as_algebra();
    EXPECT_LT((step - predicted).norm(), 2 * dt * dt);
  }
}
