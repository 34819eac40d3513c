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

// Cube ingestion from delimited text, scenario-store documents and export of
// materialized rows.

#ifndef WHATIF_IO_H_
#define WHATIF_IO_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "whatif/cube.h"
#include "whatif/evaluation.h"
#include "whatif/scenario_store.h"

namespace whatif {

// Which CSV columns are dimensions and which are measures. Columns not named
// here are ignored.
struct CubeManifest {
  std::vector<std::string> dimensions;
  std::vector<std::string> measures;
  std::string source;  // path of the CSV file, informational

  friend bool operator==(const CubeManifest&, const CubeManifest&) = default;
};

std::string ManifestToJson(const CubeManifest& manifest);
absl::StatusOr<CubeManifest> ManifestFromJson(std::string_view text);

// RFC 4180 records. Quoted fields may hold commas, doubled quotes and line
// breaks; both LF and CRLF terminate records. Blank lines are skipped.
struct CsvRecord {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};
absl::StatusOr<std::vector<CsvRecord>> ParseCsv(std::string_view text);

// One row per data record in file order. Real values per dimension are
// collected in order of first appearance.
absl::StatusOr<DataCube> LoadCube(std::string_view csv_text,
                                  const CubeManifest& manifest);

// Fixed notation with at most nine fractional digits, trailing zeros and a
// dangling decimal point removed: 10 -> "10", 0.99 -> "0.99".
std::string FormatNumber(double value);

// Header of dimension names then measure names, then one line per row.
// `names` resolves real and scenario value ids.
std::string ExportRows(const ScenarioStore& names,
                       std::span<const MaterializedRow> rows);

// JSON document:
//   {"scenarios":[{"value","dimension","entries":[{"key":{dim:[..]|"*"},
//     "values":[{"query":{..},"factors":{measure:number}}]}]}]}
// plus an optional "retired" list of deleted scenario values that stored
// keys still mention.
std::string SaveStore(const ScenarioStore& store);
absl::StatusOr<ScenarioStore> LoadStore(std::string_view text,
                                        const DataCube& cube);

}  // namespace whatif

#endif  // WHATIF_IO_H_
