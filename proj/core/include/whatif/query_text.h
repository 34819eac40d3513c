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

// Compact textual forms used by the command-line tool:
//   query        Year=2011,2012;Supplier=SU1;Product=*
//   aggregation  sum:Volume*Cost    count    avg:Volume
//   factor       Volume=3

#ifndef WHATIF_QUERY_TEXT_H_
#define WHATIF_QUERY_TEXT_H_

#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "whatif/cube.h"
#include "whatif/evaluation.h"
#include "whatif/scenario_store.h"

namespace whatif {

// Dimensions that are not listed select STAR. Names resolve against real
// values and live scenario values of `store`.
absl::StatusOr<Query> ParseQuery(std::string_view text,
                                 const ScenarioStore& store);
std::string FormatQuery(const Query& query, const ScenarioStore& store);

absl::StatusOr<AggregationSpec> ParseAggregation(std::string_view text,
                                                 const Schema& schema);
std::string FormatAggregation(const AggregationSpec& spec,
                              const Schema& schema);

absl::StatusOr<FactorAssignment> ParseFactor(std::string_view text,
                                             const Schema& schema);

}  // namespace whatif

#endif  // WHATIF_QUERY_TEXT_H_
