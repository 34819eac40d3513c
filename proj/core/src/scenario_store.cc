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

#include "whatif/scenario_store.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "strings.h"
#include "whatif/status.h"

namespace whatif {

ScenarioStore::ScenarioStore(std::shared_ptr<const Schema> schema)
    : schema_(std::move(schema)) {}

const Scenario* ScenarioStore::Find(ValueId id) const {
  for (const Scenario& s : scenarios_) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

const Scenario* ScenarioStore::FindByName(std::string_view value) const {
  for (const Scenario& s : scenarios_) {
    if (s.value == value) return &s;
  }
  return nullptr;
}

Scenario* ScenarioStore::MutableFind(std::string_view value) {
  for (Scenario& s : scenarios_) {
    if (s.value == value) return &s;
  }
  return nullptr;
}

std::optional<ValueId> ScenarioStore::LookupValue(std::string_view name) const {
  if (auto real = schema_->FindValue(name)) return real;
  if (const Scenario* s = FindByName(name)) return s->id;
  return std::nullopt;
}

std::optional<ValueId> ScenarioStore::LookupAnyValue(
    std::string_view name) const {
  if (auto live = LookupValue(name)) return live;
  for (const RetiredValue& r : retired_) {
    if (r.value == name) return r.id;
  }
  return std::nullopt;
}

std::optional<std::string_view> ScenarioStore::ValueName(ValueId id) const {
  if (schema_->IsReal(id)) return schema_->value_name(id);
  std::size_t index = id - schema_->value_count();
  if (index < extra_.size()) return extra_[index].name;
  return std::nullopt;
}

std::optional<std::size_t> ScenarioStore::DimensionOf(ValueId id) const {
  if (schema_->IsReal(id)) return schema_->dimension_of(id);
  std::size_t index = id - schema_->value_count();
  if (index < extra_.size()) return extra_[index].dimension;
  return std::nullopt;
}

absl::Status ScenarioStore::ValidateQuery(const Query& query) const {
  if (query.dimension_count() != schema_->dimension_count()) {
    return MakeError(ErrorCode::kSchemaMismatch,
                     strings::Cat("query has ", query.dimension_count(),
                                  " dimensions, schema has ",
                                  schema_->dimension_count()));
  }
  for (std::size_t d = 0; d < query.dimension_count(); ++d) {
    for (ValueId v : query[d].values()) {
      bool live = schema_->IsReal(v) || Find(v) != nullptr;
      if (!live) {
        return MakeError(ErrorCode::kUnknownValue,
                         strings::Cat("unknown value id ", v, " in dimension '",
                                      schema_->dimension_name(d), "'"));
      }
      if (*DimensionOf(v) != d) {
        return MakeError(ErrorCode::kInvalidQuery,
                         strings::Cat("value '", *ValueName(v),
                                      "' is listed under dimension '",
                                      schema_->dimension_name(d),
                                      "' but belongs to '",
                                      schema_->dimension_name(*DimensionOf(v)),
                                      "'"));
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<Scenario> ScenarioStore::CreateScenario(
    std::string_view value, std::string_view dimension) {
  std::optional<std::size_t> dim = schema_->FindDimension(dimension);
  if (!dim) {
    return MakeError(ErrorCode::kUnknownDimension,
                     strings::Cat("unknown dimension '", dimension, "'"));
  }
  if (value.empty()) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "scenario value must not be empty");
  }
  if (LookupAnyValue(value)) {
    return MakeError(ErrorCode::kNameCollision,
                     strings::Cat("value '", value, "' is already in use"));
  }
  ValueId id = static_cast<ValueId>(schema_->value_count() + extra_.size());
  extra_.push_back({std::string(value), *dim, true});
  scenarios_.push_back(Scenario{std::string(value), id, *dim, {}});
  return scenarios_.back();
}

absl::StatusOr<std::vector<double>> ScenarioStore::BuildFactors(
    std::span<const FactorAssignment> factors) const {
  std::vector<double> out(schema_->measure_count(), 1.0);
  for (const FactorAssignment& f : factors) {
    if (f.measure >= out.size()) {
      return MakeError(ErrorCode::kUnknownMeasure,
                       strings::Cat("measure index ", f.measure,
                                    " is out of range"));
    }
    if (!std::isfinite(f.factor)) {
      return MakeError(ErrorCode::kInvalidFactor,
                       strings::Cat("factor for '",
                                    schema_->measure_name(f.measure),
                                    "' is not finite"));
    }
    out[f.measure] = f.factor;
  }
  return out;
}

// One atomic query of an association that names scenario values. Every
// scenario named in `atomic` contributes the values of its keys that overlap
// the atomic on all dimensions; the per-scenario sets are then resolved
// together with the atomic's own real restriction.
absl::StatusOr<std::vector<ScenarioEntry>> ScenarioStore::ResolveAtomic(
    const Scenario& target, const Query& atomic,
    const std::vector<double>& factors) const {
  const Query key = Augment(atomic, target.dimension, target.id);
  std::vector<ValueId> named = ScenarioValuesIn(*schema_, atomic);
  if (named.empty()) {
    return std::vector<ScenarioEntry>{{key, {{atomic, factors}}}};
  }

  // Rows of the virtual cube inside the atomic come from every scenario it
  // names. Each covering key contributes its values narrowed to the source
  // rows that land inside the atomic.
  std::vector<FactoredQuery> resolved;
  for (ValueId v : named) {
    const Scenario* nested = Find(v);
    for (const ScenarioEntry& entry : nested->entries) {
      if (!CoversAllDimensions(IntersectQuery(entry.key, atomic))) continue;
      std::vector<std::vector<FactoredQuery>> sets = {
          {FactoredQuery::Unit(
              SourceFilter(*schema_, entry.key, nested->dimension, atomic),
              schema_->measure_count())},
          entry.values};
      for (FactoredQuery& fq : Resolve(sets)) resolved.push_back(std::move(fq));
    }
  }
  if (resolved.empty()) {
    return MakeError(ErrorCode::kEmptyResolution,
                     "the scenarios named in the query have no rows inside it");
  }
  for (FactoredQuery& fq : resolved) {
    for (std::size_t m = 0; m < fq.factors.size(); ++m) {
      fq.factors[m] *= factors[m];
    }
  }
  return std::vector<ScenarioEntry>{{key, std::move(resolved)}};
}

void ScenarioStore::Merge(Scenario& target, std::vector<ScenarioEntry> entries) {
  for (ScenarioEntry& entry : entries) {
    auto it = std::find_if(
        target.entries.begin(), target.entries.end(),
        [&](const ScenarioEntry& e) { return e.key == entry.key; });
    if (it == target.entries.end()) {
      target.entries.push_back(std::move(entry));
    } else {
      it->values.insert(it->values.end(),
                        std::make_move_iterator(entry.values.begin()),
                        std::make_move_iterator(entry.values.end()));
    }
  }
}

absl::StatusOr<std::vector<ScenarioEntry>> ScenarioStore::AssociateQuery(
    std::string_view target, const Query& query,
    std::span<const FactorAssignment> factors) {
  Scenario* scenario = MutableFind(target);
  if (scenario == nullptr) {
    return MakeError(ErrorCode::kUnknownScenario,
                     strings::Cat("unknown scenario '", target, "'"));
  }
  WHATIF_RETURN_IF_ERROR(ValidateQuery(query));
  for (const Selection& sel : query.selections()) {
    if (sel.Contains(scenario->id) && !sel.is_star()) {
      return MakeError(ErrorCode::kSelfReference,
                       strings::Cat("query names scenario '", target,
                                    "' itself"));
    }
  }
  if (!CoversAllDimensions(query)) {
    return MakeError(ErrorCode::kInvalidQuery,
                     "query selects no values for some dimension");
  }
  WHATIF_ASSIGN_OR_RETURN(std::vector<double> base, BuildFactors(factors));

  std::vector<ScenarioEntry> produced;
  if (ScenarioValuesIn(*schema_, query).empty()) {
    produced.push_back(
        {Augment(query, scenario->dimension, scenario->id), {{query, base}}});
  } else {
    for (const Query& atomic : AtomicDecompose(*schema_, query)) {
      WHATIF_ASSIGN_OR_RETURN(std::vector<ScenarioEntry> entries,
                              ResolveAtomic(*scenario, atomic, base));
      produced.insert(produced.end(), std::make_move_iterator(entries.begin()),
                      std::make_move_iterator(entries.end()));
    }
  }
  Merge(*scenario, produced);
  return produced;
}

absl::StatusOr<ScenarioEntry> ScenarioStore::RemoveEntry(
    std::string_view target, const Query& key) {
  const Scenario* scenario = FindByName(target);
  if (scenario == nullptr) {
    return MakeError(ErrorCode::kUnknownScenario,
                     strings::Cat("unknown scenario '", target, "'"));
  }
  for (std::size_t i = 0; i < scenario->entries.size(); ++i) {
    if (scenario->entries[i].key == key) return RemoveEntryAt(target, i);
  }
  return MakeError(ErrorCode::kMissingKey,
                   strings::Cat("scenario '", target, "' has no such key"));
}

absl::StatusOr<ScenarioEntry> ScenarioStore::RemoveEntryAt(
    std::string_view target, std::size_t entry_index) {
  Scenario* scenario = MutableFind(target);
  if (scenario == nullptr) {
    return MakeError(ErrorCode::kUnknownScenario,
                     strings::Cat("unknown scenario '", target, "'"));
  }
  if (entry_index >= scenario->entries.size()) {
    return MakeError(ErrorCode::kMissingKey,
                     strings::Cat("scenario '", target, "' has ",
                                  scenario->entries.size(), " entries"));
  }
  ScenarioEntry removed = std::move(scenario->entries[entry_index]);
  scenario->entries.erase(scenario->entries.begin() +
                          static_cast<std::ptrdiff_t>(entry_index));
  PruneRetired();
  return removed;
}

absl::StatusOr<FactoredQuery> ScenarioStore::UpdateFactors(
    std::string_view target, const Query& key, std::size_t value_index,
    std::span<const FactorAssignment> factors) {
  const Scenario* scenario = FindByName(target);
  if (scenario == nullptr) {
    return MakeError(ErrorCode::kUnknownScenario,
                     strings::Cat("unknown scenario '", target, "'"));
  }
  for (std::size_t i = 0; i < scenario->entries.size(); ++i) {
    if (scenario->entries[i].key == key) {
      return UpdateFactorsAt(target, i, value_index, factors);
    }
  }
  return MakeError(ErrorCode::kMissingKey,
                   strings::Cat("scenario '", target, "' has no such key"));
}

absl::StatusOr<FactoredQuery> ScenarioStore::UpdateFactorsAt(
    std::string_view target, std::size_t entry_index, std::size_t value_index,
    std::span<const FactorAssignment> factors) {
  Scenario* scenario = MutableFind(target);
  if (scenario == nullptr) {
    return MakeError(ErrorCode::kUnknownScenario,
                     strings::Cat("unknown scenario '", target, "'"));
  }
  if (entry_index >= scenario->entries.size()) {
    return MakeError(ErrorCode::kMissingKey,
                     strings::Cat("scenario '", target, "' has ",
                                  scenario->entries.size(), " entries"));
  }
  std::vector<FactoredQuery>& values = scenario->entries[entry_index].values;
  if (value_index >= values.size()) {
    return MakeError(ErrorCode::kIndexOutOfRange,
                     strings::Cat("entry has ", values.size(),
                                  " value queries, index ", value_index,
                                  " requested"));
  }
  // Validate everything before touching the stored factors.
  for (const FactorAssignment& f : factors) {
    if (f.measure >= schema_->measure_count()) {
      return MakeError(ErrorCode::kUnknownMeasure,
                       strings::Cat("measure index ", f.measure,
                                    " is out of range"));
    }
    if (!std::isfinite(f.factor)) {
      return MakeError(ErrorCode::kInvalidFactor, "factor is not finite");
    }
  }
  FactoredQuery& fq = values[value_index];
  for (const FactorAssignment& f : factors) fq.factors[f.measure] = f.factor;
  return fq;
}

absl::StatusOr<Scenario> ScenarioStore::DeleteScenario(std::string_view value) {
  auto it = std::find_if(scenarios_.begin(), scenarios_.end(),
                         [&](const Scenario& s) { return s.value == value; });
  if (it == scenarios_.end()) {
    return MakeError(ErrorCode::kUnknownScenario,
                     strings::Cat("unknown scenario '", value, "'"));
  }
  Scenario removed = std::move(*it);
  scenarios_.erase(it);
  extra_[removed.id - schema_->value_count()].live = false;
  retired_.push_back({removed.value, removed.id, removed.dimension});
  PruneRetired();
  return removed;
}

bool ScenarioStore::IsReferencedByKeys(ValueId id) const {
  for (const Scenario& s : scenarios_) {
    for (const ScenarioEntry& e : s.entries) {
      for (const Selection& sel : e.key.selections()) {
        if (!sel.is_star() &&
            std::binary_search(sel.values().begin(), sel.values().end(), id)) {
          return true;
        }
      }
    }
  }
  return false;
}

void ScenarioStore::PruneRetired() {
  std::erase_if(retired_, [this](const RetiredValue& r) {
    return !IsReferencedByKeys(r.id);
  });
}

absl::StatusOr<ValueId> ScenarioStore::RestoreRetiredValue(
    std::string_view value, std::string_view dimension) {
  std::optional<std::size_t> dim = schema_->FindDimension(dimension);
  if (!dim) {
    return MakeError(ErrorCode::kUnknownDimension,
                     strings::Cat("unknown dimension '", dimension, "'"));
  }
  if (value.empty() || LookupAnyValue(value)) {
    return MakeError(ErrorCode::kNameCollision,
                     strings::Cat("value '", value, "' is already in use"));
  }
  ValueId id = static_cast<ValueId>(schema_->value_count() + extra_.size());
  extra_.push_back({std::string(value), *dim, false});
  retired_.push_back({std::string(value), id, *dim});
  return id;
}

absl::Status ScenarioStore::RestoreEntries(std::string_view target,
                                           std::vector<ScenarioEntry> entries) {
  Scenario* scenario = MutableFind(target);
  if (scenario == nullptr) {
    return MakeError(ErrorCode::kUnknownScenario,
                     strings::Cat("unknown scenario '", target, "'"));
  }
  for (const ScenarioEntry& entry : entries) {
    if (entry.key.dimension_count() != schema_->dimension_count()) {
      return MakeError(ErrorCode::kSchemaMismatch, "key has wrong arity");
    }
    for (std::size_t d = 0; d < entry.key.dimension_count(); ++d) {
      for (ValueId v : entry.key[d].values()) {
        std::optional<std::size_t> owner = DimensionOf(v);
        if (!owner || *owner != d) {
          return MakeError(ErrorCode::kUnknownValue,
                           "key names a value outside its dimension");
        }
      }
    }
    if (!entry.key[scenario->dimension].Contains(scenario->id)) {
      return MakeError(ErrorCode::kMalformedDocument,
                       strings::Cat("a key of '", target,
                                    "' does not carry its own value"));
    }
    Query stripped = entry.key;
    if (!stripped[scenario->dimension].is_star()) {
      std::vector<ValueId> rest;
      for (ValueId v : stripped[scenario->dimension].values()) {
        if (v != scenario->id) rest.push_back(v);
      }
      stripped[scenario->dimension] = Selection::Of(std::move(rest));
    }
    if (!CoversAllDimensions(stripped) || !IsAtomic(*schema_, stripped)) {
      return MakeError(ErrorCode::kMalformedDocument,
                       strings::Cat("a key of '", target, "' is not atomic"));
    }
    for (const FactoredQuery& fq : entry.values) {
      if (fq.query.dimension_count() != schema_->dimension_count()) {
        return MakeError(ErrorCode::kSchemaMismatch, "value query has wrong arity");
      }
      if (!ScenarioValuesIn(*schema_, fq.query).empty()) {
        return MakeError(ErrorCode::kMalformedDocument,
                         "stored value queries must name real values only");
      }
      WHATIF_RETURN_IF_ERROR(ValidateQuery(fq.query));
      if (fq.factors.size() != schema_->measure_count()) {
        return MakeError(ErrorCode::kSchemaMismatch,
                         "one factor per measure is required");
      }
      for (double f : fq.factors) {
        if (!std::isfinite(f)) {
          return MakeError(ErrorCode::kInvalidFactor, "factor is not finite");
        }
      }
    }
  }
  Merge(*scenario, std::move(entries));
  return absl::OkStatus();
}

namespace {

std::vector<std::vector<std::string>> Names(const ScenarioStore& store,
                                            const Query& query) {
  std::vector<std::vector<std::string>> out;
  for (const Selection& sel : query.selections()) {
    std::vector<std::string> names;
    if (sel.is_star()) {
      names.push_back("*");
    } else {
      for (ValueId v : sel.values()) {
        names.emplace_back(store.ValueName(v).value_or("?"));
      }
      std::sort(names.begin(), names.end());
      names.insert(names.begin(), "{");
    }
    out.push_back(std::move(names));
  }
  return out;
}

}  // namespace

bool Equivalent(const ScenarioStore& a, const ScenarioStore& b) {
  if (!(a.schema() == b.schema())) return false;
  auto sa = a.scenarios();
  auto sb = b.scenarios();
  if (sa.size() != sb.size()) return false;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (sa[i].value != sb[i].value || sa[i].dimension != sb[i].dimension ||
        sa[i].entries.size() != sb[i].entries.size()) {
      return false;
    }
    for (std::size_t e = 0; e < sa[i].entries.size(); ++e) {
      const ScenarioEntry& ea = sa[i].entries[e];
      const ScenarioEntry& eb = sb[i].entries[e];
      if (Names(a, ea.key) != Names(b, eb.key)) return false;
      if (ea.values.size() != eb.values.size()) return false;
      for (std::size_t v = 0; v < ea.values.size(); ++v) {
        if (Names(a, ea.values[v].query) != Names(b, eb.values[v].query) ||
            ea.values[v].factors != eb.values[v].factors) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace whatif
