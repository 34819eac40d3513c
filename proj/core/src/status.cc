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

#include "whatif/status.h"

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "absl/strings/cord.h"

namespace whatif {
namespace {

constexpr std::string_view kPayloadUrl = "whatif.dev/error-code";

struct CodeInfo {
  ErrorCode code;
  std::string_view name;
  absl::StatusCode canonical;
};

constexpr std::array<CodeInfo, 20> kCodes = {{
    {ErrorCode::kNone, "OK", absl::StatusCode::kOk},
    {ErrorCode::kNoCube, "NO_CUBE", absl::StatusCode::kFailedPrecondition},
    {ErrorCode::kUnknownValue, "UNKNOWN_VALUE", absl::StatusCode::kNotFound},
    {ErrorCode::kUnknownDimension, "UNKNOWN_DIMENSION",
     absl::StatusCode::kNotFound},
    {ErrorCode::kUnknownMeasure, "UNKNOWN_MEASURE",
     absl::StatusCode::kNotFound},
    {ErrorCode::kUnknownScenario, "UNKNOWN_SCENARIO",
     absl::StatusCode::kNotFound},
    {ErrorCode::kNameCollision, "NAME_COLLISION",
     absl::StatusCode::kAlreadyExists},
    {ErrorCode::kSelfReference, "SELF_REFERENCE",
     absl::StatusCode::kInvalidArgument},
    {ErrorCode::kEmptyResolution, "EMPTY_RESOLUTION",
     absl::StatusCode::kFailedPrecondition},
    {ErrorCode::kInvalidQuery, "INVALID_QUERY",
     absl::StatusCode::kInvalidArgument},
    {ErrorCode::kQueryParse, "QUERY_PARSE", absl::StatusCode::kInvalidArgument},
    {ErrorCode::kInvalidFactor, "INVALID_FACTOR",
     absl::StatusCode::kInvalidArgument},
    {ErrorCode::kMissingKey, "MISSING_KEY", absl::StatusCode::kNotFound},
    {ErrorCode::kIndexOutOfRange, "INDEX_OUT_OF_RANGE",
     absl::StatusCode::kOutOfRange},
    {ErrorCode::kMeasureParse, "MEASURE_PARSE",
     absl::StatusCode::kInvalidArgument},
    {ErrorCode::kMissingColumn, "MISSING_COLUMN",
     absl::StatusCode::kInvalidArgument},
    {ErrorCode::kDuplicateValue, "DUPLICATE_VALUE",
     absl::StatusCode::kInvalidArgument},
    {ErrorCode::kSchemaMismatch, "SCHEMA_MISMATCH",
     absl::StatusCode::kInvalidArgument},
    {ErrorCode::kMalformedDocument, "MALFORMED_DOCUMENT",
     absl::StatusCode::kInvalidArgument},
    {ErrorCode::kInvalidArgument, "INVALID_ARGUMENT",
     absl::StatusCode::kInvalidArgument},
}};

const CodeInfo& Info(ErrorCode code) {
  for (const CodeInfo& info : kCodes) {
    if (info.code == code) return info;
  }
  return kCodes.back();
}

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) { return Info(code).name; }

absl::Status MakeError(ErrorCode code, std::string_view message) {
  const CodeInfo& info = Info(code);
  absl::Status status(info.canonical,
                      absl::string_view(message.data(), message.size()));
  status.SetPayload(absl::string_view(kPayloadUrl.data(), kPayloadUrl.size()),
                    absl::Cord(absl::string_view(info.name.data(), info.name.size())));
  return status;
}

ErrorCode GetErrorCode(const absl::Status& status) {
  if (status.ok()) return ErrorCode::kNone;
  auto payload = status.GetPayload(
      absl::string_view(kPayloadUrl.data(), kPayloadUrl.size()));
  if (!payload.has_value()) return ErrorCode::kInvalidArgument;
  std::string name(*payload);
  for (const CodeInfo& info : kCodes) {
    if (info.name == name) return info.code;
  }
  return ErrorCode::kInvalidArgument;
}

}  // namespace whatif
