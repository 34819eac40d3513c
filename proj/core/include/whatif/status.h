// Copyright 2026 The whatif Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WHATIF_STATUS_H_
#define WHATIF_STATUS_H_

#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace whatif {

// Machine-readable failure codes shared by the library, the CLI and the
// service. Each code rides on an absl::Status as a payload so callers can
// keep using the usual absl propagation idioms.
enum class ErrorCode {
  kNone = 0,
  kNoCube,
  kUnknownValue,
  kUnknownDimension,
  kUnknownMeasure,
  kUnknownScenario,
  kNameCollision,
  kSelfReference,
  kEmptyResolution,
  kInvalidQuery,
  kQueryParse,
  kInvalidFactor,
  kMissingKey,
  kIndexOutOfRange,
  kMeasureParse,
  kMissingColumn,
  kDuplicateValue,
  kSchemaMismatch,
  kMalformedDocument,
  kInvalidArgument,
};

// "NO_CUBE", "SELF_REFERENCE", ...
std::string_view ErrorCodeName(ErrorCode code);

absl::Status MakeError(ErrorCode code, std::string_view message);

// kNone for OK statuses; kInvalidArgument for statuses that were not created
// by MakeError.
ErrorCode GetErrorCode(const absl::Status& status);

inline std::string_view ErrorCodeName(const absl::Status& status) {
  return ErrorCodeName(GetErrorCode(status));
}

}  // namespace whatif

#define WHATIF_RETURN_IF_ERROR(expr)          \
  do {                                        \
    ::absl::Status _whatif_status = (expr);   \
    if (!_whatif_status.ok()) return _whatif_status; \
  } while (0)

#define WHATIF_CONCAT_INNER_(a, b) a##b
#define WHATIF_CONCAT_(a, b) WHATIF_CONCAT_INNER_(a, b)

#define WHATIF_ASSIGN_OR_RETURN(lhs, rexpr) \
  WHATIF_ASSIGN_OR_RETURN_IMPL_(WHATIF_CONCAT_(_whatif_or_, __LINE__), lhs, rexpr)

#define WHATIF_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, rexpr) \
  auto tmp = (rexpr);                                  \
  if (!tmp.ok()) return tmp.status();                  \
  lhs = std::move(tmp).value()

#endif  // WHATIF_STATUS_H_
