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

// Command-line front end: solve, slice, trace, synth, oracle, bounds.
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "su2hjb/su2hjb.hpp"

namespace {

using namespace su2hjb;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

struct GridFlags {
  double h = 0.1;
  double extent = 3.0;
  std::optional<double> target_radius;
  int dirs = 16;
  double tol = 1e-6;
  int max_iters = 3000;

  SolverConfig config() const {
    SolverConfig c = SolverConfig::with_spacing(h, extent);
    if (target_radius) c.target_radius = *target_radius;
    c.n_dir = dirs;
    c.tol = tol;
    c.max_iters = max_iters;
    return c;
  }
};

struct StartFlags {
  std::vector<double> point;
  std::vector<std::string> matrix;

  GroupElement resolve() const {
    if (!matrix.empty()) return parse_group_element(matrix);
    if (point.size() != 3) {
      throw Error(ErrorCode::kInvalidConfig, "give --start a,b,c or --matrix with four entries");
    }
    return exp_map({point[0], point[1], point[2]});
  }
};

void add_start_flags(CLI::App* cmd, StartFlags& flags) {
  auto* start = cmd->add_option("--start", flags.point, "chart point a,b,c")->delimiter(',')->expected(3);
  auto* matrix = cmd->add_option("--matrix", flags.matrix,
                                 "four row-major complex entries, e.g. 0.8+0i 0-0.6i 0-0.6i 0.8+0i")
                     ->expected(4);
  start->excludes(matrix);
}

nlohmann::json config_json(const SolverConfig& c) {
  return {{"h", c.h},           {"extent", c.extent}, {"target_radius", c.target_radius},
          {"n_dir", c.n_dir},   {"tol", c.tol},       {"max_iters", c.max_iters}};
}

std::ostream& open_output(const std::string& path, std::unique_ptr<std::ofstream>& file) {
  if (path.empty() || path == "-") return std::cout;
  file = std::make_unique<std::ofstream>(path);
  if (!*file) throw Error(ErrorCode::kInvalidConfig, "cannot open " + path + " for writing");
  return *file;
}

void write_sidecar(const std::string& path, const nlohmann::json& meta) {
  if (path.empty() || path == "-") return;
  std::ofstream out(path + ".meta.json");
  out << meta.dump(2) << '\n';
}

SlicePlane parse_plane(const std::string& axes, double offset) {
  auto axis = [&](char ch) {
    switch (ch) {
      case 'a': return 0;
      case 'b': return 1;
      case 'c': return 2;
    }
    throw Error(ErrorCode::kInvalidConfig, "plane axes must be drawn from a, b, c");
  };
  if (axes.size() != 2) throw Error(ErrorCode::kInvalidConfig, "plane must name two axes, e.g. ab");
  return {axis(axes[0]), axis(axes[1]), offset};
}

int run_solve(const GridFlags& grid, const std::string& out) {
  const SolverConfig config = grid.config();
  const auto t0 = std::chrono::steady_clock::now();
  const ValueField field = solve(config);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  save_field(out, field);
  std::cout << "iterations=" << field.iterations << " residual=" << std::setprecision(6)
            << field.residual << " wall_time=" << std::fixed << std::setprecision(3) << wall
            << "s converged=" << (field.converged ? "yes" : "no") << '\n';
  if (!field.converged) {
    std::cerr << "NO_CONVERGENCE: max_iters=" << field.config.max_iters
              << " residual=" << field.residual << " (field written)\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int run_slice(const std::string& field_path, const std::string& plane, double offset,
              const std::string& out) {
  const ValueField field = load_field(field_path);
  const SliceTable table = slice_export(field, parse_plane(plane, offset));
  std::unique_ptr<std::ofstream> file;
  write_slice_csv(open_output(out, file), table);
  write_sidecar(out, {{"field", field_path}, {"plane", plane}, {"offset", offset},
                      {"solver", config_json(field.config)}});
  return kExitOk;
}

TraceOptions trace_options(std::optional<double> dt) {
  TraceOptions options;
  options.dt = dt;
  return options;
}

int run_trace(const std::string& field_path, const StartFlags& start, std::optional<double> dt,
              const std::string& out) {
  const ValueField field = load_field(field_path);
  const Trajectory traj = trace_trajectory(start.resolve(), field, trace_options(dt));
  std::unique_ptr<std::ofstream> file;
  write_trajectory_csv(open_output(out, file), traj);
  write_sidecar(out, {{"field", field_path}, {"dt", traj.dt}, {"terminal", traj.terminal},
                      {"terminal_distance", traj.terminal_distance},
                      {"solver", config_json(field.config)}});
  std::cerr << "duration=" << traj.duration() << " steps=" << traj.steps()
            << " terminal_distance=" << traj.terminal_distance << '\n';
  if (!traj.terminal) {
    std::cerr << "TIME_CAP_EXCEEDED: partial trajectory written\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int run_synth(const std::string& field_path, const StartFlags& start, std::optional<double> dt,
              const std::string& out) {
  const ValueField field = load_field(field_path);
  const Trajectory traj = trace_trajectory(start.resolve(), field, trace_options(dt));
  const GateSequence forward = reverse_to_forward(compile_gates(traj));
  nlohmann::json j = gates_to_json(forward);
  j["solver"] = config_json(field.config);
  j["field"] = field_path;
  std::unique_ptr<std::ofstream> file;
  open_output(out, file) << j.dump(2) << '\n';
  std::cerr << "gates=" << forward.gates.size() << " error_estimate=" << forward.error_estimate
            << " splitting_error=" << forward.splitting_error << '\n';
  return kExitOk;
}

int run_oracle(const std::string& field_path, const StartFlags& start, const OracleOptions& options) {
  const GroupElement target = start.resolve();
  const OracleResult r = dijkstra_min_time(target, options);
  std::cout << std::setprecision(10) << "oracle_time=" << r.time
            << " quantization_bound=" << r.quantization_bound << " settled=" << r.settled;
  if (!field_path.empty()) {
    const ValueField field = load_field(field_path);
    const double c = kruskov_inverse(field, log_map(target).point);
    std::cout << " solver_time=" << c << " gap=" << std::abs(c - r.time);
  }
  std::cout << '\n';
  return kExitOk;
}

int run_bounds(double cost, int qubits, double epsilon) {
  const BoundsReport r = bounds_report(cost, qubits, epsilon);
  const nlohmann::json j = {{"cost", r.cost},
                            {"n_qubits", r.n_qubits},
                            {"epsilon", r.epsilon},
                            {"l_max", r.l_max},
                            {"approximate_complexity_scale", r.approximate_complexity_scale},
                            {"gate_time_product_lower_bound", r.gate_time_product_lower_bound},
                            {"lower_bound_form", r.lower_bound_form},
                            {"upper_bound_form", r.upper_bound_form},
                            {"disclaimer", r.disclaimer}};
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-time HJB solver and X/Z gate compiler for SU(2)"};
  app.set_config("--config", "", "TOML/INI file; command-line flags take precedence");
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "seed for randomized sampling (recorded only)");

  GridFlags grid;
  std::string out;
  std::string field_path;
  std::optional<double> dt;
  StartFlags start;

  auto add_grid_flags = [&](CLI::App* cmd) {
    cmd->add_option("--grid-h", grid.h, "grid spacing h")->capture_default_str();
    cmd->add_option("--grid-extent", grid.extent, "grid covers [-R, R]^3")->capture_default_str();
    cmd->add_option("--target-radius", grid.target_radius, "Frobenius radius of the target (default 1.5 h)");
    cmd->add_option("--dirs", grid.dirs, "number of bang-bang control directions")->capture_default_str();
    cmd->add_option("--tol", grid.tol, "sup-norm convergence threshold")->capture_default_str();
    cmd->add_option("--max-iters", grid.max_iters, "sweep limit")->capture_default_str();
  };

  auto* solve_cmd = app.add_subcommand("solve", "solve the discounted HJB equation and write a field file");
  add_grid_flags(solve_cmd);
  solve_cmd->add_option("--out", out, "field file to write")->required();

  std::string plane = "ab";
  double offset = 0.0;
  auto* slice_cmd = app.add_subcommand("slice", "export minimum-time values on a coordinate plane as CSV");
  slice_cmd->add_option("--field", field_path, "field file")->required();
  slice_cmd->add_option("--plane", plane, "two axes from a, b, c, e.g. ab")->capture_default_str();
  slice_cmd->add_option("--offset", offset, "coordinate of the third axis")->capture_default_str();
  slice_cmd->add_option("--out", out, "CSV path (default stdout)");

  auto* trace_cmd = app.add_subcommand("trace", "trace the optimal trajectory to the identity as CSV");
  trace_cmd->add_option("--field", field_path, "field file")->required();
  add_start_flags(trace_cmd, start);
  trace_cmd->add_option("--dt", dt, "integration step (default h/2)");
  trace_cmd->add_option("--out", out, "CSV path (default stdout)");

  auto* synth_cmd = app.add_subcommand("synth", "compile a target into X/Z rotation gates (JSON)");
  synth_cmd->add_option("--field", field_path, "field file")->required();
  add_start_flags(synth_cmd, start);
  synth_cmd->add_option("--dt", dt, "integration step (default h/2)");
  synth_cmd->add_option("--out", out, "JSON path (default stdout)");

  OracleOptions oracle_options;
  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force minimum time by lattice Dijkstra");
  oracle_cmd->add_option("--field", field_path, "optional field file to compare against");
  add_start_flags(oracle_cmd, start);
  oracle_cmd->add_option("--grid-h", oracle_options.spacing, "lattice spacing")->capture_default_str();
  oracle_cmd->add_option("--tau", oracle_options.tau, "edge duration")->capture_default_str();
  oracle_cmd->add_option("--dirs", oracle_options.n_dir, "control directions")->capture_default_str();
  oracle_cmd->add_option("--grid-extent", oracle_options.extent, "lattice extent")->capture_default_str();

  double cost = 0.0;
  int qubits = 1;
  double epsilon = 0.1;
  auto* bounds_cmd = app.add_subcommand("bounds", "print asymptotic gate-complexity figures");
  bounds_cmd->add_option("--cost", cost, "optimal cost C(U0)")->required();
  bounds_cmd->add_option("--qubits", qubits, "number of qubits n")->capture_default_str();
  bounds_cmd->add_option("--epsilon", epsilon, "approximation accuracy")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*solve_cmd) return run_solve(grid, out);
    if (*slice_cmd) return run_slice(field_path, plane, offset, out);
    if (*trace_cmd) return run_trace(field_path, start, dt, out);
    if (*synth_cmd) return run_synth(field_path, start, dt, out);
    if (*oracle_cmd) return run_oracle(field_path, start, oracle_options);
    if (*bounds_cmd) return run_bounds(cost, qubits, epsilon);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return is_numerical_failure(e.code()) ? kExitNumerical : kExitInvalid;
  }
  return kExitInvalid;
}
