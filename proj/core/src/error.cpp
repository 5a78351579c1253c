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

#include "dynkin/error.hpp"

namespace dynkin {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateNodeId: return "DuplicateNodeId";
    case ErrorCode::kProbabilitySumViolation: return "ProbabilitySumViolation";
    case ErrorCode::kDanglingChild: return "DanglingChild";
    case ErrorCode::kLeafAtWrongStage: return "LeafAtWrongStage";
    case ErrorCode::kNonIncreasingDates: return "NonIncreasingDates";
    case ErrorCode::kNotATree: return "NotATree";
    case ErrorCode::kUnknownNode: return "UnknownNode";
    case ErrorCode::kStageOutOfRange: return "StageOutOfRange";
    case ErrorCode::kInvalidSchedule: return "InvalidSchedule";
    case ErrorCode::kInvalidStoppingTime: return "InvalidStoppingTime";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kNotMeasurable: return "NotMeasurable";
    case ErrorCode::kEnumerationLimitExceeded: return "EnumerationLimitExceeded";
    case ErrorCode::kOrderViolation: return "OrderViolation";
    case ErrorCode::kMissingValues: return "MissingValues";
    case ErrorCode::kBadGamma: return "BadGamma";
    case ErrorCode::kBadPrior: return "BadPrior";
    case ErrorCode::kMissingPayoff: return "MissingPayoff";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kBadDimensions: return "BadDimensions";
  }
  return "Unknown";
}

std::string_view to_string(ValidationKind kind) {
  switch (kind) {
    case ValidationKind::kNone: return "none";
    case ValidationKind::kA1: return "A1";
    case ValidationKind::kA2: return "A2";
    case ValidationKind::kTree: return "tree";
    case ValidationKind::kSchedule: return "schedule";
    case ValidationKind::kOperator: return "operator";
  }
  return "unknown";
}

namespace {

std::string format_message(ErrorCode code, ValidationKind kind,
                           const std::string& message) {
  std::string out(to_string(code));
  if (kind != ValidationKind::kNone) {
    out += "{";
    out += to_string(kind);
    out += "}";
  }
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::vector<std::int64_t> nodes, ValidationKind kind)
    : std::runtime_error(format_message(code, kind, message)),
      code_(code),
      kind_(kind),
      nodes_(std::move(nodes)) {}

}  // namespace dynkin
