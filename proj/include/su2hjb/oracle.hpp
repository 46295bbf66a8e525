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

// Independent minimum-time estimate: Dijkstra over a chart lattice whose
// edges are exact group flows of duration tau along bang-bang controls.
//
// Each lattice node keeps the exact chart state of the earliest path that
// snapped into it, and edges are integrated from that state. Every returned
// time is therefore the duration of a feasible control history whose endpoint
// snaps to the identity node.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "su2hjb/dynamics.hpp"
#include "su2hjb/error.hpp"
#include "su2hjb/su2.hpp"

namespace su2hjb {

struct OracleOptions {
  double spacing = 0.05;   // h_o
  double tau = 0.05;       // edge duration
  int n_dir = 16;
  double extent = 3.0;     // lattice covers [-R_o, R_o]^3
  std::size_t node_budget = 2'000'000;
  RunningCost running_cost = unit_running_cost;
};

struct OracleResult {
  double time = 0.0;
  //! Over-estimate bound of the lattice: snapping plus time quantization.
  double quantization_bound = 0.0;
  std::size_t settled = 0;
  //! Distance from I of the exact state that reached the identity node.
  double terminal_distance = 0.0;
};

class LatticeGraph {
 public:
  explicit LatticeGraph(const OracleOptions& options)
      : options_(options),
        half_(static_cast<int>(std::floor(options.extent / options.spacing + 1e-9))),
        dim_(2 * half_ + 1) {}

  int dim() const { return dim_; }
  std::size_t node_count() const {
    return static_cast<std::size_t>(dim_) * dim_ * dim_;
  }

  //! Nearest node, or -1 when x falls outside the lattice or the chart domain.
  std::int64_t snap(const AlgebraElement& x) const {
    if (!(x.norm() < kMaxChartRadius)) return -1;
    std::int64_t idx = 0;
    std::int64_t stride = 1;
    for (int k = 0; k < 3; ++k) {
      const long q = std::lround(x[k] / options_.spacing) + half_;
      if (q < 0 || q >= dim_) return -1;
      idx += q * stride;
      stride *= dim_;
    }
    return idx;
  }

  std::int64_t identity_node() const { return snap({0.0, 0.0, 0.0}); }

 private:
  OracleOptions options_;
  int half_;
  int dim_;
};

inline OracleResult dijkstra_min_time(const GroupElement& target, const OracleOptions& options) {
  if (!(options.tau >= options.spacing) || !(options.spacing > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "oracle needs spacing > 0 and tau >= spacing");
  }
  const ControlSet controls = make_control_set(options.n_dir);
  const LatticeGraph graph(options);
  const AlgebraElement start_point = log_map(target).point;
  const std::int64_t start = graph.snap(start_point);
  if (start < 0) {
    throw Error(ErrorCode::kOutOfGrid, "target lies outside the oracle lattice");
  }
  const std::int64_t goal = graph.identity_node();
  // Any cost-free terminal error is bounded by half a cell diagonal; each
  // step can lose at most one tau of progress at the final edge.
  const double bound = options.spacing + options.tau;
  if (start == goal) {
    return {0.0, bound, 1, group_distance(exp_map(start_point), GroupElement::identity())};
  }

  std::vector<GroupElement> steps;
  std::vector<double> weights;
  for (const auto& v : controls.directions) {
    steps.push_back(exp_map(options.tau * v.as_algebra()));
    weights.push_back(options.tau * options.running_cost(v));
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(graph.node_count(), inf);
  std::vector<AlgebraElement> state(graph.node_count());
  std::vector<std::uint8_t> settled(graph.node_count(), 0);

  using Entry = std::pair<double, std::int64_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  best[start] = 0.0;
  state[start] = start_point;
  queue.push({0.0, start});
  std::size_t settled_count = 0;

  while (!queue.empty()) {
    const auto [time, node] = queue.top();
    queue.pop();
    if (settled[node]) continue;
    settled[node] = 1;
    ++settled_count;
    if (node == goal) {
      return {time, bound, settled_count,
              group_distance(exp_map(state[node]), GroupElement::identity())};
    }
    if (settled_count >= options.node_budget) break;
    const GroupElement here = exp_map(state[node]);
    for (std::size_t d = 0; d < steps.size(); ++d) {
      const AlgebraElement next = log_map(steps[d] * here).point;
      const std::int64_t to = graph.snap(next);
      if (to < 0 || settled[to]) continue;
      const double arrival = time + weights[d];
      if (arrival < best[to]) {
        best[to] = arrival;
        state[to] = next;
        queue.push({arrival, to});
      }
    }
  }
  throw Error(ErrorCode::kUnreached, "identity node not settled within " +
                                         std::to_string(settled_count) + " nodes");
}

}  // namespace su2hjb
