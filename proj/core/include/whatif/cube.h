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

// Immutable in-memory data cube, the per-dimension query representation and
// the row-level primitives (select, select-modify, union, intersection).
//
// Dimension values are interned into a single global id space. Real values
// of a schema occupy ids [0, Schema::value_count()); anything above that
// range is a scenario value owned by a ScenarioStore.

#ifndef WHATIF_CUBE_H_
#define WHATIF_CUBE_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace whatif {

using ValueId = std::uint32_t;

// One dimension's selection inside a query: either the symbolic STAR or an
// explicit (possibly empty) set of value ids, kept sorted and unique.
class Selection {
 public:
  Selection() = default;  // STAR

  static Selection Star() { return Selection(); }
  static Selection Of(std::vector<ValueId> values);
  static Selection None() { return Of({}); }

  bool is_star() const { return star_; }
  // True for an explicit selection with no values.
  bool empty() const { return !star_ && values_.empty(); }
  std::span<const ValueId> values() const { return values_; }

  // STAR contains everything; callers that need "STAR means real values
  // only" expand the selection first.
  bool Contains(ValueId value) const;

  Selection Intersect(const Selection& other) const;
  // Adds `value` to an explicit selection; STAR stays STAR.
  Selection With(ValueId value) const;

  friend bool operator==(const Selection&, const Selection&) = default;

 private:
  bool star_ = true;
  std::vector<ValueId> values_;
};

// A selection per dimension, indexed by the schema's dimension order.
class Query {
 public:
  Query() = default;
  explicit Query(std::size_t dimension_count)
      : selections_(dimension_count) {}
  explicit Query(std::vector<Selection> selections)
      : selections_(std::move(selections)) {}

  std::size_t dimension_count() const { return selections_.size(); }
  const Selection& operator[](std::size_t dim) const {
    return selections_[dim];
  }
  Selection& operator[](std::size_t dim) { return selections_[dim]; }
  std::span<const Selection> selections() const { return selections_; }

  friend bool operator==(const Query&, const Query&) = default;

 private:
  std::vector<Selection> selections_;
};

class Schema {
 public:
  struct DimensionSpec {
    std::string name;
    std::vector<std::string> values;
  };

  // Validates name uniqueness (dimensions and measures share a namespace),
  // global value uniqueness, and that there is at least one dimension and
  // one measure. Real value ids are assigned dimension by dimension in the
  // given order.
  static absl::StatusOr<Schema> Create(std::vector<DimensionSpec> dimensions,
                                       std::vector<std::string> measures);

  std::size_t dimension_count() const { return dimensions_.size(); }
  std::size_t measure_count() const { return measures_.size(); }
  std::size_t value_count() const { return values_.size(); }

  const std::string& dimension_name(std::size_t dim) const {
    return dimensions_[dim].name;
  }
  const std::string& measure_name(std::size_t measure) const {
    return measures_[measure];
  }
  std::span<const ValueId> real_values(std::size_t dim) const {
    return dimensions_[dim].values;
  }

  bool IsReal(ValueId id) const { return id < values_.size(); }
  // Only valid for real ids.
  const std::string& value_name(ValueId id) const { return values_[id].name; }
  std::size_t dimension_of(ValueId id) const { return values_[id].dimension; }

  std::optional<std::size_t> FindDimension(std::string_view name) const;
  std::optional<std::size_t> FindMeasure(std::string_view name) const;
  std::optional<ValueId> FindValue(std::string_view name) const;

  // Replaces STAR selections by the explicit set of real values.
  Query ExpandStars(const Query& query) const;

  friend bool operator==(const Schema& a, const Schema& b);

 private:
  struct Dimension {
    std::string name;
    std::vector<ValueId> values;
  };
  struct Value {
    std::string name;
    std::size_t dimension;
  };

  std::vector<Dimension> dimensions_;
  std::vector<std::string> measures_;
  std::vector<Value> values_;
};

struct Row {
  std::vector<ValueId> coords;   // one real value per dimension
  std::vector<double> measures;  // one finite number per measure

  friend bool operator==(const Row&, const Row&) = default;
};

// An ordered multiset of rows tagged with the schema they conform to. This is
// what the cube-level operators consume and produce.
struct RowBag {
  std::shared_ptr<const Schema> schema;
  std::vector<Row> rows;
};

// Read-only cube. Rows are stored flat (row-major coords and measures) for
// scan speed; duplicates are kept.
class DataCube {
 public:
  static absl::StatusOr<DataCube> Create(std::shared_ptr<const Schema> schema,
                                         std::vector<Row> rows);

  const Schema& schema() const { return *schema_; }
  const std::shared_ptr<const Schema>& schema_ptr() const { return schema_; }
  std::size_t row_count() const { return row_count_; }

  std::span<const ValueId> coords(std::size_t row) const {
    return {coords_.data() + row * schema_->dimension_count(),
            schema_->dimension_count()};
  }
  std::span<const double> measures(std::size_t row) const {
    return {measures_.data() + row * schema_->measure_count(),
            schema_->measure_count()};
  }
  Row row(std::size_t index) const;

 private:
  DataCube() = default;

  std::shared_ptr<const Schema> schema_;
  std::size_t row_count_ = 0;
  std::vector<ValueId> coords_;
  std::vector<double> measures_;
};

// Unchecked membership test used inside scans: `coords` must have one entry
// per query dimension.
bool MatchesCoords(std::span<const ValueId> coords, const Query& query);

absl::StatusOr<bool> RowMatches(const Row& row, const Query& query);

// sigma: rows of the cube matching a real-only query, in cube order.
absl::StatusOr<RowBag> Select(const DataCube& cube, const Query& query);

struct DimensionMapping {
  std::size_t dimension;
  ValueId value;
};

// sigma^: same cardinality as the input. An empty `factors` span leaves
// measures untouched; otherwise it must carry one finite factor per measure.
absl::StatusOr<RowBag> SelectModify(const RowBag& input,
                                    std::span<const double> factors,
                                    std::optional<DimensionMapping> mapping);

// +: multiset concatenation of two bags with the same schema.
absl::StatusOr<RowBag> CubeUnion(const RowBag& a, const RowBag& b);

// Per-dimension intersection; STAR is the identity. Both queries must have
// the same dimension count.
Query IntersectQuery(const Query& a, const Query& b);

}  // namespace whatif

#endif  // WHATIF_CUBE_H_
