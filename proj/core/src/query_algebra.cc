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

#include "whatif/query_algebra.h"

#include <algorithm>
#include <utility>

#include "whatif/scenario_store.h"
#include "whatif/status.h"

namespace whatif {

std::vector<ValueId> ScenarioValuesIn(const Schema& schema, const Query& query) {
  std::vector<ValueId> out;
  for (const Selection& sel : query.selections()) {
    for (ValueId v : sel.values()) {
      if (!schema.IsReal(v)) out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

absl::StatusOr<std::vector<const Scenario*>> ExtractScenarios(
    const ScenarioStore& store, const Query& query) {
  std::vector<const Scenario*> out;
  for (ValueId v : ScenarioValuesIn(store.schema(), query)) {
    const Scenario* scenario = store.Find(v);
    if (scenario == nullptr) {
      return MakeError(ErrorCode::kUnknownValue,
                       "query names a value that is not a live scenario");
    }
    out.push_back(scenario);
  }
  return out;
}

Query RealSubquery(const Schema& schema, const Query& query) {
  Query out = query;
  for (std::size_t d = 0; d < query.dimension_count(); ++d) {
    const Selection& sel = query[d];
    if (sel.is_star()) continue;
    std::vector<ValueId> real;
    for (ValueId v : sel.values()) {
      if (schema.IsReal(v)) real.push_back(v);
    }
    out[d] = real.empty() ? Selection::Star() : Selection::Of(std::move(real));
  }
  return out;
}

std::vector<Query> AtomicDecompose(const Schema& schema, const Query& query) {
  const std::size_t dims = query.dimension_count();
  std::vector<std::vector<Selection>> options(dims);
  for (std::size_t d = 0; d < dims; ++d) {
    const Selection& sel = query[d];
    if (sel.is_star()) {
      options[d].push_back(sel);
      continue;
    }
    std::vector<ValueId> real;
    for (ValueId v : sel.values()) {
      if (schema.IsReal(v)) {
        real.push_back(v);
      } else {
        options[d].push_back(Selection::Of({v}));
      }
    }
    if (!real.empty()) options[d].push_back(Selection::Of(std::move(real)));
    if (options[d].empty()) return {};
  }

  std::vector<Query> out;
  std::vector<std::size_t> pick(dims, 0);
  while (true) {
    std::vector<Selection> sels;
    sels.reserve(dims);
    for (std::size_t d = 0; d < dims; ++d) sels.push_back(options[d][pick[d]]);
    out.emplace_back(std::move(sels));
    // Odometer with the last dimension varying fastest.
    std::size_t d = dims;
    while (d > 0) {
      --d;
      if (++pick[d] < options[d].size()) break;
      pick[d] = 0;
      if (d == 0) return out;
    }
    if (dims == 0) return out;
  }
}

bool IsAtomic(const Schema& schema, const Query& query) {
  for (const Selection& sel : query.selections()) {
    if (sel.is_star()) continue;
    if (sel.values().empty()) return false;
    std::size_t scenario_values = 0;
    for (ValueId v : sel.values()) {
      if (!schema.IsReal(v)) ++scenario_values;
    }
    if (scenario_values > 0 && sel.values().size() != 1) return false;
  }
  return true;
}

std::vector<FactoredQuery> Resolve(
    std::span<const std::vector<FactoredQuery>> sets) {
  if (sets.empty()) return {};
  std::vector<FactoredQuery> acc = sets.front();
  for (std::size_t i = 1; i < sets.size(); ++i) {
    std::vector<FactoredQuery> next;
    for (const FactoredQuery& left : acc) {
      for (const FactoredQuery& right : sets[i]) {
        Query joined = IntersectQuery(left.query, right.query);
        if (!CoversAllDimensions(joined)) continue;
        std::vector<double> factors = left.factors;
        for (std::size_t m = 0; m < factors.size() && m < right.factors.size();
             ++m) {
          factors[m] *= right.factors[m];
        }
        next.push_back({std::move(joined), std::move(factors)});
      }
    }
    acc = std::move(next);
  }
  return acc;
}

std::vector<ScenarioEntry> ScenarioQueries(
    std::span<const Scenario* const> scenarios) {
  std::vector<ScenarioEntry> out;
  for (const Scenario* scenario : scenarios) {
    out.insert(out.end(), scenario->entries.begin(), scenario->entries.end());
  }
  return out;
}

Query Augment(const Query& query, std::size_t dimension, ValueId value) {
  Query out = query;
  out[dimension] = query[dimension].With(value);
  return out;
}

bool CoversAllDimensions(const Query& query) {
  for (const Selection& sel : query.selections()) {
    if (sel.empty()) return false;
  }
  return true;
}

Query SourceFilter(const Schema& schema, const Query& key,
                   std::size_t owner_dimension, const Query& query) {
  Query out(key.dimension_count());
  for (std::size_t d = 0; d < key.dimension_count(); ++d) {
    if (d == owner_dimension) continue;
    const Selection& key_sel = key[d];
    bool nested = std::any_of(key_sel.values().begin(), key_sel.values().end(),
                              [&](ValueId v) { return !schema.IsReal(v); });
    if (nested) continue;
    Selection overlap = key_sel.Intersect(query[d]);
    if (overlap.is_star()) continue;
    std::vector<ValueId> real;
    for (ValueId v : overlap.values()) {
      if (schema.IsReal(v)) real.push_back(v);
    }
    out[d] = Selection::Of(std::move(real));
  }
  return out;
}

}  // namespace whatif
