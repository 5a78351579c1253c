// Copyright 2026 The Dynkin Authors
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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dynkin {

enum class ErrorCode {
  kDuplicateNodeId,
  kProbabilitySumViolation,
  kDanglingChild,
  kLeafAtWrongStage,
  kNonIncreasingDates,
  kNotATree,
  kUnknownNode,
  kStageOutOfRange,
  kInvalidSchedule,
  kInvalidStoppingTime,
  kSchemaMismatch,
  kNotMeasurable,
  kEnumerationLimitExceeded,
  kOrderViolation,
  kMissingValues,
  kBadGamma,
  kBadPrior,
  kMissingPayoff,
  kNoConvergence,
  kParseError,
  kValidationError,
  kBadDimensions,
};

std::string_view to_string(ErrorCode code);

// Category attached to kValidationError.
enum class ValidationKind { kNone, kA1, kA2, kTree, kSchedule, kOperator };

std::string_view to_string(ValidationKind kind);

// Single exception type for the library. The code identifies the failure,
// `nodes` carries offending node ids when there are any.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::vector<std::int64_t> nodes = {},
        ValidationKind kind = ValidationKind::kNone);

  ErrorCode code() const noexcept { return code_; }
  ValidationKind validation_kind() const noexcept { return kind_; }
  const std::vector<std::int64_t>& nodes() const noexcept { return nodes_; }

 private:
  ErrorCode code_;
  ValidationKind kind_;
  std::vector<std::int64_t> nodes_;
};

}  // namespace dynkin
