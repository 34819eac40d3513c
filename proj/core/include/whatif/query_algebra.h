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

// Scenario-aware query operators: scenario extraction (pi), real sub-query
// (rho), atomic decomposition (eta), resolution (mu), scenario query maps
// (theta), plus the key-augmentation and coverage helpers the association and
// evaluation algorithms share.

#ifndef WHATIF_QUERY_ALGEBRA_H_
#define WHATIF_QUERY_ALGEBRA_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "whatif/cube.h"

namespace whatif {

class ScenarioStore;
struct Scenario;

// A real-only query plus one multiplicative factor per measure.
struct FactoredQuery {
  Query query;
  std::vector<double> factors;

  static FactoredQuery Unit(Query query, std::size_t measure_count) {
    return {std::move(query), std::vector<double>(measure_count, 1.0)};
  }

  friend bool operator==(const FactoredQuery&, const FactoredQuery&) = default;
};

// A key query and the resolved real queries stored against it.
struct ScenarioEntry {
  Query key;
  std::vector<FactoredQuery> values;

  friend bool operator==(const ScenarioEntry&, const ScenarioEntry&) = default;
};

// Scenario value ids named anywhere in `query`, ascending (which is also
// registration order).
std::vector<ValueId> ScenarioValuesIn(const Schema& schema, const Query& query);

// pi. Fails with UNKNOWN_VALUE if the query names a value that is neither
// real nor a live scenario.
absl::StatusOr<std::vector<const Scenario*>> ExtractScenarios(
    const ScenarioStore& store, const Query& query);

// rho. Drops scenario values; a dimension left without values becomes STAR.
Query RealSubquery(const Schema& schema, const Query& query);

// eta. Per dimension the options are each scenario value on its own, then the
// block of real values (or STAR); the result is the cartesian product in
// dimension order. Returns an empty set if any dimension has no values.
std::vector<Query> AtomicDecompose(const Schema& schema, const Query& query);

bool IsAtomic(const Schema& schema, const Query& query);

// mu. Left fold over the sets: every pair is intersected and its factors
// multiplied measure by measure; pairs that come out empty on some dimension
// are dropped. A single set comes back untouched.
std::vector<FactoredQuery> Resolve(
    std::span<const std::vector<FactoredQuery>> sets);

// theta. The key -> values entries of the given scenarios, in scenario then
// insertion order.
std::vector<ScenarioEntry> ScenarioQueries(
    std::span<const Scenario* const> scenarios);

// Adds `value` to the selection of `dimension` only (STAR stays STAR).
Query Augment(const Query& query, std::size_t dimension, ValueId value);

// True iff no dimension has an explicit empty selection.
bool CoversAllDimensions(const Query& query);

// The real rows a key of a scenario on `owner_dimension` may draw on when its
// simulated rows have to fall inside `query`. Dimensions the key substitutes
// (the owner's and any holding a nested scenario value) are STAR; elsewhere
// the selection is the real part of key and query combined, which is an
// explicit empty set when no real value is left.
Query SourceFilter(const Schema& schema, const Query& key,
                   std::size_t owner_dimension, const Query& query);

}  // namespace whatif

#endif  // WHATIF_QUERY_ALGEBRA_H_
