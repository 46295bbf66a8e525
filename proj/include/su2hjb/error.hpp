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

#include <stdexcept>
#include <string>
#include <string_view>

namespace su2hjb {

enum class ErrorCode {
  kBadResolution,
  kNearBranch,
  kInvalidConfig,
  kEmptyTarget,
  kNanDetected,
  kNoConvergence,
  kUnreachable,
  kOutOfGrid,
  kOnTarget,
  kTimeCapExceeded,
  kNonTerminalTrajectory,
  kWrongDirection,
  kUnreached,
  kBadFormat,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadResolution: return "BAD_RESOLUTION";
    case ErrorCode::kNearBranch: return "NEAR_BRANCH";
    case ErrorCode::kInvalidConfig: return "INVALID_CONFIG";
    case ErrorCode::kEmptyTarget: return "EMPTY_TARGET";
    case ErrorCode::kNanDetected: return "NAN_DETECTED";
    case ErrorCode::kNoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::kUnreachable: return "UNREACHABLE";
    case ErrorCode::kOutOfGrid: return "OUT_OF_GRID";
    case ErrorCode::kOnTarget: return "ON_TARGET";
    case ErrorCode::kTimeCapExceeded: return "TIME_CAP_EXCEEDED";
    case ErrorCode::kNonTerminalTrajectory: return "NON_TERMINAL_TRAJECTORY";
    case ErrorCode::kWrongDirection: return "WRONG_DIRECTION";
    case ErrorCode::kUnreached: return "UNREACHED";
    case ErrorCode::kBadFormat: return "BAD_FORMAT";
  }
  return "UNKNOWN";
}

//! True for failures of the numerics (as opposed to bad caller input).
constexpr bool is_numerical_failure(ErrorCode code) {
  return code == ErrorCode::kNoConvergence ||
         code == ErrorCode::kTimeCapExceeded ||
         code == ErrorCode::kUnreached || code == ErrorCode::kNanDetected ||
         code == ErrorCode::kNonTerminalTrajectory;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace su2hjb
