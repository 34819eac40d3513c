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

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "strings.h"
#include "json_codec.h"
#include "whatif/io.h"
#include "whatif/status.h"

namespace whatif {
namespace json_codec {
namespace {

std::size_t Rank(const ScenarioStore& store, ValueId id) {
  const Schema& schema = store.schema();
  if (schema.IsReal(id)) return id;
  std::size_t base = schema.value_count();
  auto live = store.scenarios();
  for (std::size_t i = 0; i < live.size(); ++i) {
    if (live[i].id == id) return base + i;
  }
  base += live.size();
  auto retired = store.retired();
  for (std::size_t i = 0; i < retired.size(); ++i) {
    if (retired[i].id == id) return base + i;
  }
  return base + retired.size() + id;
}

absl::Status Malformed(std::string message) {
  return MakeError(ErrorCode::kMalformedDocument, std::move(message));
}

}  // namespace

std::vector<ValueId> DisplayOrder(const ScenarioStore& store,
                                  std::span<const ValueId> values) {
  std::vector<std::pair<std::size_t, ValueId>> ranked;
  ranked.reserve(values.size());
  for (ValueId v : values) ranked.emplace_back(Rank(store, v), v);
  std::sort(ranked.begin(), ranked.end());
  std::vector<ValueId> out;
  out.reserve(ranked.size());
  for (const auto& [rank, v] : ranked) out.push_back(v);
  return out;
}

Json QueryToJson(const ScenarioStore& store, const Query& query) {
  const Schema& schema = store.schema();
  Json out = Json::object();
  for (std::size_t d = 0; d < query.dimension_count(); ++d) {
    const Selection& sel = query[d];
    if (sel.is_star()) {
      out[schema.dimension_name(d)] = "*";
      continue;
    }
    Json names = Json::array();
    for (ValueId v : DisplayOrder(store, sel.values())) {
      names.push_back(std::string(store.ValueName(v).value_or("?")));
    }
    out[schema.dimension_name(d)] = std::move(names);
  }
  return out;
}

absl::StatusOr<Query> QueryFromJson(const ScenarioStore& store,
                                    const Json& json, QueryRules rules) {
  const Schema& schema = store.schema();
  if (!json.is_object()) return Malformed("a query must be a JSON object");
  Query query(schema.dimension_count());
  for (const auto& [name, member] : json.items()) {
    std::optional<std::size_t> dim = schema.FindDimension(name);
    if (!dim) {
      return MakeError(ErrorCode::kUnknownDimension,
                       strings::Cat("unknown dimension '", name, "'"));
    }
    if (member.is_string() && member.get<std::string>() == "*") continue;
    if (!member.is_array()) {
      return Malformed(strings::Cat("selection for '", name,
                                    "' must be \"*\" or an array of names"));
    }
    std::vector<ValueId> ids;
    for (const Json& item : member) {
      if (!item.is_string()) {
        return Malformed(
            strings::Cat("selection for '", name, "' holds a non-string"));
      }
      const std::string value = item.get<std::string>();
      std::optional<ValueId> id = rules.allow_retired
                                      ? store.LookupAnyValue(value)
                                      : store.LookupValue(value);
      if (!id || (rules.real_only && !schema.IsReal(*id))) {
        return MakeError(ErrorCode::kUnknownValue,
                         strings::Cat("unknown value '", value, "'"));
      }
      if (store.DimensionOf(*id) != dim) {
        return MakeError(ErrorCode::kInvalidQuery,
                         strings::Cat("value '", value,
                                      "' does not belong to dimension '",
                                      name, "'"));
      }
      ids.push_back(*id);
    }
    query[*dim] = Selection::Of(std::move(ids));
  }
  return query;
}

Json FactorsToJson(const Schema& schema, std::span<const double> factors) {
  Json out = Json::object();
  for (std::size_t m = 0; m < factors.size(); ++m) {
    out[schema.measure_name(m)] = factors[m];
  }
  return out;
}

absl::StatusOr<std::vector<FactorAssignment>> FactorsFromJson(
    const Schema& schema, const Json& json) {
  if (!json.is_object()) return Malformed("factors must be a JSON object");
  std::vector<FactorAssignment> out;
  for (const auto& [name, member] : json.items()) {
    std::optional<std::size_t> m = schema.FindMeasure(name);
    if (!m) {
      return MakeError(ErrorCode::kUnknownMeasure,
                       strings::Cat("unknown measure '", name, "'"));
    }
    if (!member.is_number() || !std::isfinite(member.get<double>())) {
      return MakeError(ErrorCode::kInvalidFactor,
                       strings::Cat("factor for '", name,
                                    "' must be a finite number"));
    }
    out.push_back({*m, member.get<double>()});
  }
  return out;
}

Json FactoredQueryToJson(const ScenarioStore& store, const FactoredQuery& fq) {
  Json out = Json::object();
  out["query"] = QueryToJson(store, fq.query);
  out["factors"] = FactorsToJson(store.schema(), fq.factors);
  return out;
}

Json EntryToJson(const ScenarioStore& store, const ScenarioEntry& entry) {
  Json values = Json::array();
  for (const FactoredQuery& fq : entry.values) {
    values.push_back(FactoredQueryToJson(store, fq));
  }
  Json out = Json::object();
  out["key"] = QueryToJson(store, entry.key);
  out["values"] = std::move(values);
  return out;
}

Json ScenarioToJson(const ScenarioStore& store, const Scenario& scenario) {
  Json entries = Json::array();
  for (const ScenarioEntry& e : scenario.entries) {
    entries.push_back(EntryToJson(store, e));
  }
  Json out = Json::object();
  out["value"] = scenario.value;
  out["dimension"] = store.schema().dimension_name(scenario.dimension);
  out["entries"] = std::move(entries);
  return out;
}

Json StoreToJson(const ScenarioStore& store) {
  Json scenarios = Json::array();
  for (const Scenario& s : store.scenarios()) {
    scenarios.push_back(ScenarioToJson(store, s));
  }
  Json out = Json::object();
  out["scenarios"] = std::move(scenarios);
  if (!store.retired().empty()) {
    Json retired = Json::array();
    for (const RetiredValue& r : store.retired()) {
      Json item = Json::object();
      item["value"] = r.value;
      item["dimension"] = store.schema().dimension_name(r.dimension);
      retired.push_back(std::move(item));
    }
    out["retired"] = std::move(retired);
  }
  return out;
}

}  // namespace json_codec

namespace {

using json_codec::Json;

absl::StatusOr<std::string> StringMember(const Json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end() || !it->is_string()) {
    return MakeError(ErrorCode::kMalformedDocument,
                     strings::Cat("member '", name, "' must be a string"));
  }
  return it->get<std::string>();
}

const Json* ArrayMember(const Json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end() || !it->is_array()) return nullptr;
  return &*it;
}

}  // namespace

std::string ManifestToJson(const CubeManifest& manifest) {
  Json out = Json::object();
  out["dimensions"] = manifest.dimensions;
  out["measures"] = manifest.measures;
  out["source"] = manifest.source;
  return out.dump(2) + "\n";
}

absl::StatusOr<CubeManifest> ManifestFromJson(std::string_view text) {
  Json doc = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return MakeError(ErrorCode::kMalformedDocument,
                     "manifest is not a JSON object");
  }
  CubeManifest manifest;
  for (auto [name, out] : {std::pair{"dimensions", &manifest.dimensions},
                           std::pair{"measures", &manifest.measures}}) {
    const Json* list = ArrayMember(doc, name);
    if (list == nullptr) {
      return MakeError(ErrorCode::kMalformedDocument,
                       strings::Cat("manifest needs a '", name, "' array"));
    }
    for (const Json& item : *list) {
      if (!item.is_string()) {
        return MakeError(ErrorCode::kMalformedDocument,
                         strings::Cat("'", name, "' must hold strings"));
      }
      out->push_back(item.get<std::string>());
    }
  }
  if (auto it = doc.find("source"); it != doc.end() && it->is_string()) {
    manifest.source = it->get<std::string>();
  }
  return manifest;
}

std::string SaveStore(const ScenarioStore& store) {
  return json_codec::StoreToJson(store).dump(2) + "\n";
}

absl::StatusOr<ScenarioStore> LoadStore(std::string_view text,
                                        const DataCube& cube) {
  Json doc = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return MakeError(ErrorCode::kMalformedDocument,
                     "store document is not a JSON object");
  }
  const Json* scenarios = ArrayMember(doc, "scenarios");
  if (scenarios == nullptr) {
    return MakeError(ErrorCode::kMalformedDocument,
                     "store document needs a 'scenarios' array");
  }
  ScenarioStore store(cube.schema_ptr());
  for (const Json& s : *scenarios) {
    if (!s.is_object()) {
      return MakeError(ErrorCode::kMalformedDocument,
                       "each scenario must be a JSON object");
    }
    WHATIF_ASSIGN_OR_RETURN(std::string value, StringMember(s, "value"));
    WHATIF_ASSIGN_OR_RETURN(std::string dim, StringMember(s, "dimension"));
    WHATIF_RETURN_IF_ERROR(store.CreateScenario(value, dim).status());
  }
  if (auto it = doc.find("retired"); it != doc.end()) {
    if (!it->is_array()) {
      return MakeError(ErrorCode::kMalformedDocument,
                       "'retired' must be an array");
    }
    for (const Json& r : *it) {
      if (!r.is_object()) {
        return MakeError(ErrorCode::kMalformedDocument,
                         "each retired value must be a JSON object");
      }
      WHATIF_ASSIGN_OR_RETURN(std::string value, StringMember(r, "value"));
      WHATIF_ASSIGN_OR_RETURN(std::string dim, StringMember(r, "dimension"));
      WHATIF_RETURN_IF_ERROR(store.RestoreRetiredValue(value, dim).status());
    }
  }
  const Schema& schema = cube.schema();
  for (const Json& s : *scenarios) {
    std::vector<ScenarioEntry> entries;
    auto it = s.find("entries");
    if (it != s.end()) {
      if (!it->is_array()) {
        return MakeError(ErrorCode::kMalformedDocument,
                         "'entries' must be an array");
      }
      for (const Json& e : *it) {
        if (!e.is_object() || !e.contains("key")) {
          return MakeError(ErrorCode::kMalformedDocument,
                           "each entry needs a 'key'");
        }
        ScenarioEntry entry;
        WHATIF_ASSIGN_OR_RETURN(
            entry.key, json_codec::QueryFromJson(store, e["key"],
                                                 {.allow_retired = true}));
        const Json* values = ArrayMember(e, "values");
        if (values == nullptr) {
          return MakeError(ErrorCode::kMalformedDocument,
                           "each entry needs a 'values' array");
        }
        for (const Json& v : *values) {
          if (!v.is_object() || !v.contains("query")) {
            return MakeError(ErrorCode::kMalformedDocument,
                             "each value needs a 'query'");
          }
          FactoredQuery fq =
              FactoredQuery::Unit(Query(), schema.measure_count());
          WHATIF_ASSIGN_OR_RETURN(
              fq.query,
              json_codec::QueryFromJson(store, v["query"], {.real_only = true}));
          if (v.contains("factors")) {
            WHATIF_ASSIGN_OR_RETURN(
                std::vector<FactorAssignment> factors,
                json_codec::FactorsFromJson(schema, v["factors"]));
            for (const FactorAssignment& f : factors) {
              fq.factors[f.measure] = f.factor;
            }
          }
          entry.values.push_back(std::move(fq));
        }
        entries.push_back(std::move(entry));
      }
    }
    WHATIF_RETURN_IF_ERROR(
        store.RestoreEntries(s["value"].get<std::string>(), std::move(entries)));
  }
  return store;
}

}  // namespace whatif
