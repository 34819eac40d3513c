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

// JSON encodings shared by the store document and the HTTP service.

#ifndef WHATIF_SRC_JSON_CODEC_H_
#define WHATIF_SRC_JSON_CODEC_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "whatif/cube.h"
#include "whatif/query_algebra.h"
#include "whatif/scenario_store.h"

namespace whatif::json_codec {

using Json = nlohmann::ordered_json;

// Real values by id, then live scenarios in registration order, then retired
// values in the order they were retired.
std::vector<ValueId> DisplayOrder(const ScenarioStore& store,
                                  std::span<const ValueId> values);

Json QueryToJson(const ScenarioStore& store, const Query& query);

struct QueryRules {
  bool allow_retired = false;
  bool real_only = false;
};
// Object keyed by dimension name; each member is "*" or an array of value
// names. Absent dimensions are STAR.
absl::StatusOr<Query> QueryFromJson(const ScenarioStore& store,
                                    const Json& json, QueryRules rules = {});

Json FactorsToJson(const Schema& schema, std::span<const double> factors);
absl::StatusOr<std::vector<FactorAssignment>> FactorsFromJson(
    const Schema& schema, const Json& json);

Json FactoredQueryToJson(const ScenarioStore& store, const FactoredQuery& fq);
Json EntryToJson(const ScenarioStore& store, const ScenarioEntry& entry);
Json ScenarioToJson(const ScenarioStore& store, const Scenario& scenario);
Json StoreToJson(const ScenarioStore& store);

}  // namespace whatif::json_codec

#endif  // WHATIF_SRC_JSON_CODEC_H_
