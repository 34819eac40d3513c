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

#ifndef WHATIF_SCENARIO_STORE_H_
#define WHATIF_SCENARIO_STORE_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "whatif/cube.h"
#include "whatif/query_algebra.h"

namespace whatif {

// A hypothetical dimension value. Its rows are never stored; `entries` maps
// atomic key queries (always carrying `value` on `dimension`, or STAR there)
// to real-only factored queries.
struct Scenario {
  std::string value;
  ValueId id = 0;
  std::size_t dimension = 0;
  std::vector<ScenarioEntry> entries;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// A deleted scenario value that keys of other scenarios still mention. It can
// no longer be named in queries, so those key positions never match.
struct RetiredValue {
  std::string value;
  ValueId id = 0;
  std::size_t dimension = 0;
};

struct FactorAssignment {
  std::size_t measure;
  double factor;
};

class ScenarioStore {
 public:
  explicit ScenarioStore(std::shared_ptr<const Schema> schema);

  const Schema& schema() const { return *schema_; }
  const std::shared_ptr<const Schema>& schema_ptr() const { return schema_; }

  // Registration order.
  std::span<const Scenario> scenarios() const { return scenarios_; }
  std::span<const RetiredValue> retired() const { return retired_; }

  const Scenario* Find(ValueId id) const;
  const Scenario* FindByName(std::string_view value) const;

  // A real value or a live scenario value.
  std::optional<ValueId> LookupValue(std::string_view name) const;
  // Like LookupValue, but also resolves retired values.
  std::optional<ValueId> LookupAnyValue(std::string_view name) const;
  // Names real, live and retired ids alike.
  std::optional<std::string_view> ValueName(ValueId id) const;
  std::optional<std::size_t> DimensionOf(ValueId id) const;

  // Every value must be real or a live scenario and sit under its own
  // dimension.
  absl::Status ValidateQuery(const Query& query) const;

  absl::StatusOr<Scenario> CreateScenario(std::string_view value,
                                          std::string_view dimension);

  // Reduces `query` to atomic keys over real factored queries and stores
  // them under `target`. Unmentioned measures get factor 1. Either every
  // resulting entry is stored or the store is left untouched. Returns the
  // entries produced by this call.
  absl::StatusOr<std::vector<ScenarioEntry>> AssociateQuery(
      std::string_view target, const Query& query,
      std::span<const FactorAssignment> factors);

  absl::StatusOr<ScenarioEntry> RemoveEntry(std::string_view target,
                                            const Query& key);
  absl::StatusOr<ScenarioEntry> RemoveEntryAt(std::string_view target,
                                              std::size_t entry_index);

  // Replaces only the named factors of one stored value query.
  absl::StatusOr<FactoredQuery> UpdateFactors(
      std::string_view target, const Query& key, std::size_t value_index,
      std::span<const FactorAssignment> factors);
  absl::StatusOr<FactoredQuery> UpdateFactorsAt(
      std::string_view target, std::size_t entry_index,
      std::size_t value_index, std::span<const FactorAssignment> factors);

  // Other scenarios are left exactly as they are, including keys that
  // mention the deleted value.
  absl::StatusOr<Scenario> DeleteScenario(std::string_view value);

  // Used when reading a persisted store: registers a retired value, and
  // appends already-resolved entries after validating their shape.
  absl::StatusOr<ValueId> RestoreRetiredValue(std::string_view value,
                                              std::string_view dimension);
  absl::Status RestoreEntries(std::string_view target,
                              std::vector<ScenarioEntry> entries);

 private:
  struct ExtraValue {
    std::string name;
    std::size_t dimension;
    bool live;
  };

  Scenario* MutableFind(std::string_view value);
  absl::StatusOr<std::vector<double>> BuildFactors(
      std::span<const FactorAssignment> factors) const;
  absl::StatusOr<std::vector<ScenarioEntry>> ResolveAtomic(
      const Scenario& target, const Query& atomic,
      const std::vector<double>& factors) const;
  bool IsReferencedByKeys(ValueId id) const;
  void PruneRetired();
  void Merge(Scenario& target, std::vector<ScenarioEntry> entries);

  std::shared_ptr<const Schema> schema_;
  std::vector<Scenario> scenarios_;
  std::vector<RetiredValue> retired_;
  std::vector<ExtraValue> extra_;  // indexed by id - schema.value_count()
};

// Name-level structural equality: same scenarios in the same order with the
// same entries, comparing values by name rather than by id.
bool Equivalent(const ScenarioStore& a, const ScenarioStore& b);

}  // namespace whatif

#endif  // WHATIF_SCENARIO_STORE_H_
