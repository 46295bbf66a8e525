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

// File formats.
//
// Value field (binary, little-endian, IEEE-754 doubles), format version 1:
//   offset  type        field
//   0       char[8]     magic "SU2HJBVF"
//   8       uint32      format version (1)
//   12      uint32      n_dir
//   16      float64     h
//   24      float64     extent R
//   32      float64     target radius
//   40      float64     tol
//   48      uint64      max_iters
//   56      uint64      iterations performed
//   64      float64     final sup-norm residual
//   72      uint32      converged flag (0 or 1)
//   76      uint32      cells per axis, d = 2 floor(R/h) + 1
//   80      float64[d^3] S, a-fastest, then b, then c
//
// Slice and trajectory tables are CSV with a one-line header. Gate sequences
// are JSON objects carrying a "format_version" key.

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ios>
#include <limits>
#include <locale>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "su2hjb/error.hpp"
#include "su2hjb/hjb_solver.hpp"
#include "su2hjb/synthesis.hpp"

namespace su2hjb {

static_assert(std::endian::native == std::endian::little,
              "field files are written in host byte order");

inline constexpr std::uint32_t kFieldFormatVersion = 1;
inline constexpr int kGateFormatVersion = 1;
inline constexpr char kFieldMagic[8] = {'S', 'U', '2', 'H', 'J', 'B', 'V', 'F'};

namespace detail {

template <typename T>
void put(std::ostream& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.write(bytes, sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  char bytes[sizeof(T)];
  if (!in.read(bytes, sizeof(T))) throw Error(ErrorCode::kBadFormat, "truncated field file");
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace detail

inline void write_field(std::ostream& out, const ValueField& field) {
  const SolverConfig& c = field.config;
  out.write(kFieldMagic, sizeof(kFieldMagic));
  detail::put<std::uint32_t>(out, kFieldFormatVersion);
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(c.n_dir));
  detail::put<double>(out, c.h);
  detail::put<double>(out, c.extent);
  detail::put<double>(out, c.target_radius);
  detail::put<double>(out, c.tol);
  detail::put<std::uint64_t>(out, static_cast<std::uint64_t>(c.max_iters));
  detail::put<std::uint64_t>(out, static_cast<std::uint64_t>(field.iterations));
  detail::put<double>(out, field.residual);
  detail::put<std::uint32_t>(out, field.converged ? 1u : 0u);
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(field.grid.dim()));
  out.write(reinterpret_cast<const char*>(field.values.data()),
            static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  if (!out) throw Error(ErrorCode::kBadFormat, "failed writing field");
}

inline ValueField read_field(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kFieldMagic, sizeof(magic)) != 0) {
    throw Error(ErrorCode::kBadFormat, "not a value field file");
  }
  const auto version = detail::get<std::uint32_t>(in);
  if (version != kFieldFormatVersion) {
    throw Error(ErrorCode::kBadFormat, "unsupported field format version " + std::to_string(version));
  }
  SolverConfig config;
  config.n_dir = static_cast<int>(detail::get<std::uint32_t>(in));
  config.h = detail::get<double>(in);
  config.extent = detail::get<double>(in);
  config.target_radius = detail::get<double>(in);
  config.tol = detail::get<double>(in);
  config.max_iters = static_cast<int>(detail::get<std::uint64_t>(in));
  ValueField field;
  field.iterations = static_cast<int>(detail::get<std::uint64_t>(in));
  field.residual = detail::get<double>(in);
  field.converged = detail::get<std::uint32_t>(in) != 0;
  const auto dim = detail::get<std::uint32_t>(in);
  field.grid = build_grid(config);
  field.config = config;
  if (static_cast<int>(dim) != field.grid.dim()) {
    throw Error(ErrorCode::kBadFormat, "cell count does not match the stored grid geometry");
  }
  field.values.resize(field.grid.cell_count());
  if (!in.read(reinterpret_cast<char*>(field.values.data()),
               static_cast<std::streamsize>(field.values.size() * sizeof(double)))) {
    throw Error(ErrorCode::kBadFormat, "truncated value array");
  }
  return field;
}

inline void save_field(const std::string& path, const ValueField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidConfig, "cannot open " + path + " for writing");
  write_field(out, field);
}

inline ValueField load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidConfig, "cannot open " + path);
  return read_field(in);
}

namespace detail {

inline std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace detail

inline void write_slice_csv(std::ostream& out, const SliceTable& table) {
  out << axis_name(table.plane.first_axis) << ',' << axis_name(table.plane.second_axis) << ",C\n";
  for (const auto& row : table.rows) {
    out << detail::format_number(row.first) << ',' << detail::format_number(row.second) << ','
        << detail::format_number(row.time) << '\n';
  }
}

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,a,b,c,v1,v2\n";
  for (const auto& s : traj.samples) {
    out << detail::format_number(s.time) << ',' << detail::format_number(s.point.a) << ','
        << detail::format_number(s.point.b) << ',' << detail::format_number(s.point.c) << ','
        << detail::format_number(s.control.v1) << ',' << detail::format_number(s.control.v2)
        << '\n';
  }
}

//! Parses "re+imi", "re-imi", "re" or "imi" (e.g. "0.5-0.25i", "-1", "2i").
inline Complex parse_complex_token(const std::string& token) {
  auto fail = [&]() -> Complex {
    throw Error(ErrorCode::kBadFormat, "bad complex token '" + token + "'");
  };
  if (token.empty()) return fail();
  const char* begin = token.data();
  const char* end = begin + token.size();
  const bool imaginary = token.back() == 'i';
  if (imaginary) --end;
  double first = 0.0;
  auto [p, ec] = std::from_chars(begin, end, first);
  if (ec != std::errc() && !(imaginary && (p == begin))) return fail();
  if (p == end) return imaginary ? Complex{0.0, first} : Complex{first, 0.0};
  if (!imaginary || (*p != '+' && *p != '-')) return fail();
  // from_chars rejects a leading '+'.
  const char* q = *p == '+' ? p + 1 : p;
  double second = 0.0;
  auto [r, ec2] = std::from_chars(q, end, second);
  if (ec2 != std::errc() || r != end) return fail();
  return {first, second};
}

//! Nearest matrix of the form ((p, q), (-q*, p*)) with |p|^2 + |q|^2 = 1.
inline GroupElement project_to_su2(const Matrix2& m) {
  Complex p = 0.5 * (m[0] + std::conj(m[3]));
  Complex q = 0.5 * (m[1] - std::conj(m[2]));
  const double n = std::sqrt(std::norm(p) + std::norm(q));
  p /= n;
  q /= n;
  return GroupElement({p, q, -std::conj(q), std::conj(p)});
}

//! Four row-major complex tokens. The matrix must be special unitary within
//! `tol` (typed decimals are rarely exact) and is then projected onto SU(2).
inline GroupElement parse_group_element(const std::vector<std::string>& tokens,
                                        double tol = 1e-6) {
  if (tokens.size() != 4) {
    throw Error(ErrorCode::kBadFormat, "a matrix needs exactly four complex entries");
  }
  Matrix2 m;
  for (std::size_t k = 0; k < 4; ++k) m[k] = parse_complex_token(tokens[k]);
  GroupElement u(m);
  if (!u.is_special_unitary(tol)) {
    throw Error(ErrorCode::kBadFormat, "matrix is not special unitary (defect " +
                                           std::to_string(u.unitarity_defect()) + ")");
  }
  return project_to_su2(m);
}

inline std::string to_string(Direction d) {
  return d == Direction::kToIdentity ? "TO_IDENTITY" : "FROM_IDENTITY";
}

inline nlohmann::json gates_to_json(const GateSequence& seq) {
  nlohmann::json j;
  j["format_version"] = kGateFormatVersion;
  j["direction"] = to_string(seq.direction);
  j["dt"] = seq.dt;
  j["error_estimate"] = seq.error_estimate;
  j["splitting_error"] = seq.splitting_error;
  nlohmann::json target = nlohmann::json::array();
  for (const auto& z : seq.target.matrix()) target.push_back({z.real(), z.imag()});
  j["target"] = target;
  nlohmann::json gates = nlohmann::json::array();
  for (const auto& g : seq.gates) {
    gates.push_back({{"axis", g.axis == GateAxis::kX ? "X" : "Z"}, {"angle", g.angle}});
  }
  j["gates"] = gates;
  return j;
}

inline GateSequence gates_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format_version").get<int>() != kGateFormatVersion) {
      throw Error(ErrorCode::kBadFormat, "unsupported gate format version");
    }
    GateSequence seq;
    const auto direction = j.at("direction").get<std::string>();
    if (direction == "TO_IDENTITY") {
      seq.direction = Direction::kToIdentity;
    } else if (direction == "FROM_IDENTITY") {
      seq.direction = Direction::kFromIdentity;
    } else {
      throw Error(ErrorCode::kBadFormat, "unknown direction " + direction);
    }
    seq.dt = j.at("dt").get<double>();
    seq.error_estimate = j.at("error_estimate").get<double>();
    seq.splitting_error = j.value("splitting_error", 0.0);
    const auto& target = j.at("target");
    if (target.size() != 4) throw Error(ErrorCode::kBadFormat, "target needs four entries");
    Matrix2 m;
    for (std::size_t k = 0; k < 4; ++k) {
      m[k] = {target[k].at(0).get<double>(), target[k].at(1).get<double>()};
    }
    seq.target = GroupElement(m);
    for (const auto& g : j.at("gates")) {
      const auto axis = g.at("axis").get<std::string>();
      if (axis != "X" && axis != "Z") throw Error(ErrorCode::kBadFormat, "gate axis must be X or Z");
      seq.gates.push_back({axis == "X" ? GateAxis::kX : GateAxis::kZ, g.at("angle").get<double>()});
    }
    return seq;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadFormat, e.what());
  }
}

}  // namespace su2hjb
