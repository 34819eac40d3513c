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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any selected criterion fails.
//
//   whatif_acceptance                 run all criteria
//   whatif_acceptance --criterion=N   run criterion N only

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "test_util.h"
#include "whatif/evaluation.h"
#include "whatif/query_algebra.h"
#include "whatif/scenario_store.h"
#include "whatif/status.h"

namespace whatif {
namespace {

using testing::Amount;
using testing::Near;
using testing::Q;
using testing::Spec;
using testing::MakeRandomInstance;
using testing::RandomQuery;

// Tolerances.
constexpr double kRelTolerance = 1e-9;
constexpr double kGoldenRuntimeSeconds = 1.0;
constexpr double kPropertyRuntimeSeconds = 60.0;
constexpr int kPropertyInstances = 500;
constexpr int kDegenerationQueries = 100;

class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void Note(const std::string& what) { notes_.push_back(what); }
  bool ok() const { return failures_.empty(); }
  std::string Summary() const {
    std::ostringstream out;
    for (const std::string& f : failures_) out << "\n    expected: " << f;
    for (const std::string& n : notes_) out << "\n    note: " << n;
    return out.str();
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string Fmt(double v) { return FormatNumber(v); }

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::vector<MaterializedRow> MaterializeOrDie(const DataCube& cube,
                                              const ScenarioStore& store,
                                              const Query& q) {
  auto rows = Materialize(cube, store, q);
  if (!rows.ok()) {
    std::fprintf(stderr, "materialize failed: %s\n",
                 rows.status().ToString().c_str());
    std::abort();
  }
  return *std::move(rows);
}

double SumAmount(const DataCube& cube, const ScenarioStore& store,
                 const Query& q) {
  AggregationSpec spec = Spec(cube.schema(), "sum:Volume*Cost");
  auto result = Evaluate(cube, store, q, std::span(&spec, 1));
  if (!result.ok() || !result->values[0]) return std::nan("");
  return *result->values[0];
}

std::string DescribeRows(const ScenarioStore& store,
                         std::span<const MaterializedRow> rows) {
  std::ostringstream out;
  for (const MaterializedRow& r : rows) {
    out << "\n      ";
    for (ValueId v : r.coords) out << store.ValueName(v).value_or("?") << " ";
    out << Fmt(r.measures[0]) << " " << Fmt(r.measures[1]);
    out << (r.simulated() ? " (simulated)" : " (real)");
  }
  return out.str();
}

void ExpectRows(Check& check, const ScenarioStore& store,
                std::span<const MaterializedRow> rows,
                std::span<const std::vector<std::string>> coords,
                std::span<const std::pair<double, double>> measures) {
  bool same = rows.size() == coords.size();
  for (std::size_t i = 0; same && i < rows.size(); ++i) {
    for (std::size_t d = 0; d < coords[i].size(); ++d) {
      same &= store.ValueName(rows[i].coords[d]) == coords[i][d];
    }
    same &= Near(rows[i].measures[0], measures[i].first, kRelTolerance);
    same &= Near(rows[i].measures[1], measures[i].second, kRelTolerance);
  }
  check.Expect(same, "rows match the table, got" + DescribeRows(store, rows));
}

// 1. Golden 2011 total.
void Criterion1(Check& check) {
  auto start = std::chrono::steady_clock::now();
  auto cube = testing::ExampleCube();
  ScenarioStore store(cube->schema_ptr());
  double total =
      SumAmount(*cube, store, Q(store, "Year=2011;Supplier=SU1,SU2;Product=P1,P2"));
  double elapsed = Seconds(start);
  check.Expect(Near(total, 57.9, kRelTolerance),
               "sum(Volume*Cost) = 57.9, got " + Fmt(total));
  check.Expect(elapsed < kGoldenRuntimeSeconds,
               "runtime < 1 s, got " + Fmt(elapsed) + " s");
}

// 2. Scenario 2012 after two associations.
void Criterion2(Check& check) {
  auto cube = testing::ExampleCube();
  ScenarioStore store(cube->schema_ptr());
  testing::BuildScenario2012(store);
  auto rows = MaterializeOrDie(
      *cube, store, Q(store, "Year=2012;Supplier=SU1,SU2;Product=P1,P2"));
  std::vector<std::vector<std::string>> coords = {{"2012", "SU1", "P1"},
                                                  {"2012", "SU1", "P2"},
                                                  {"2012", "SU2", "P1"},
                                                  {"2012", "SU2", "P2"}};
  std::vector<std::pair<double, double>> measures = {
      {20, 1.0}, {22, 1.5}, {36, 1.1}, {39, 1.4}};
  ExpectRows(check, store, rows, coords, measures);
}

// 3. Scenario SU3 with Cost factor 0.9.
void Criterion3(Check& check) {
  auto cube = testing::ExampleCube();
  ScenarioStore store(cube->schema_ptr());
  testing::BuildScenarioSu3(store);
  auto rows = MaterializeOrDie(*cube, store,
                               Q(store, "Year=2011;Supplier=SU3;Product=P1,P2"));
  std::vector<std::vector<std::string>> coords = {{"2011", "SU3", "P1"},
                                                  {"2011", "SU3", "P2"}};
  std::vector<std::pair<double, double>> measures = {{12, 0.99}, {13, 1.26}};
  ExpectRows(check, store, rows, coords, measures);
  if (rows.size() == 2) {
    double a0 = rows[0].measures[0] * rows[0].measures[1];
    double a1 = rows[1].measures[0] * rows[1].measures[1];
    check.Expect(Near(a0, 11.88, kRelTolerance), "amount 11.88, got " + Fmt(a0));
    check.Expect(Near(a1, 16.38, kRelTolerance), "amount 16.38, got " + Fmt(a1));
  }
}

// 4. Dependent-scenario resolution: 2012 redefined through SU3.
void Criterion4(Check& check) {
  auto cube = testing::ExampleCube();
  ScenarioStore store = testing::ExampleStore(cube);
  const Scenario* s2012 = store.FindByName("2012");
  check.Expect(s2012 != nullptr, "scenario 2012 exists");
  if (s2012 == nullptr) return;
  check.Expect(s2012->entries.size() == 2,
               "two keys, got " + std::to_string(s2012->entries.size()));
  if (s2012->entries.size() != 2) return;
  const std::size_t volume = 0, cost = 1;
  const ScenarioEntry& su1 = s2012->entries[0];
  check.Expect(su1.key == Q(store, "Year=2011,2012;Supplier=SU1;Product=P1,P2"),
               "first key <{2011,2012},{SU1},{P1,P2}>");
  check.Expect(su1.values.size() == 1 &&
                   su1.values[0].query ==
                       Q(store, "Year=2011;Supplier=SU1;Product=P1,P2") &&
                   su1.values[0].factors[volume] == 2 &&
                   su1.values[0].factors[cost] == 1,
               "first key -> [SU1 2011 query, Volume 2, Cost 1]");
  const ScenarioEntry& su3 = s2012->entries[1];
  check.Expect(su3.key == Q(store, "Year=2011,2012;Supplier=SU3;Product=P1,P2"),
               "second key <{2011,2012},{SU3},{P1,P2}>");
  check.Expect(su3.values.size() == 1 &&
                   su3.values[0].query ==
                       Q(store, "Year=2011;Supplier=SU2;Product=P1,P2") &&
                   su3.values[0].factors[volume] == 3 &&
                   Near(su3.values[0].factors[cost], 0.9, kRelTolerance),
               "second key -> [SU2 2011 query, Volume 3, Cost 0.9]");
}

// 5. Golden 2012 total.
void Criterion5(Check& check) {
  auto cube = testing::ExampleCube();
  ScenarioStore store = testing::ExampleStore(cube);
  Query q = Q(store, "Year=2012;Supplier=SU1,SU3;Product=P1,P2");
  double total = SumAmount(*cube, store, q);
  check.Expect(Near(total, 137.78, kRelTolerance),
               "sum(Volume*Cost) = 137.78, got " + Fmt(total));
  auto rows = MaterializeOrDie(*cube, store, q);
  std::vector<double> expected = {20, 33, 35.64, 49.14};
  bool same = rows.size() == expected.size();
  for (std::size_t i = 0; same && i < rows.size(); ++i) {
    same = Near(rows[i].measures[0] * rows[i].measures[1], expected[i],
                kRelTolerance);
  }
  check.Expect(same, "row amounts 20, 33, 35.64, 49.14, got" +
                         DescribeRows(store, rows));
}

// 6. Full mixed query.
void Criterion6(Check& check) {
  auto cube = testing::ExampleCube();
  ScenarioStore store = testing::ExampleStore(cube);
  Query q = Q(store, "Year=2011,2012;Supplier=SU1,SU2,SU3;Product=P1,P2");
  auto rows = MaterializeOrDie(*cube, store, q);
  auto again = MaterializeOrDie(*cube, store, q);
  check.Expect(rows == again, "deterministic row order");
  double amount = Amount(rows);
  check.Expect(rows.size() == 8,
               "8 rows, got " + std::to_string(rows.size()));
  check.Expect(Near(amount, 195.68, kRelTolerance),
               "combined amount 195.68, got " + Fmt(amount));
  auto oracle = testing::OracleMaterialize(*cube, store, q);
  check.Note("brute-force virtual cube gives " + std::to_string(oracle.size()) +
             " rows, amount " + Fmt(Amount(oracle)) +
             (oracle == rows ? " (identical to the engine)" : " (differs)"));
  if (!check.ok()) check.Note("engine rows:" + DescribeRows(store, rows));
}

// 7. Oracle equivalence over random instances.
void Criterion7(Check& check) {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20260701);
  int mismatches = 0;
  int queries = 0;
  std::string first_failure;
  for (int i = 0; i < kPropertyInstances; ++i) {
    testing::RandomInstance inst = MakeRandomInstance(rng);
    const Schema& s = inst.cube->schema();
    std::vector<AggregationSpec> specs = {
        Spec(s, "sum:M0"), Spec(s, "sum:M0*M1"), Spec(s, "count:M0"),
        Spec(s, "min:M1"), Spec(s, "max:M0*M1"), Spec(s, "avg:M0")};
    for (int k = 0; k < 4; ++k) {
      Query q = RandomQuery(rng, *inst.store);
      ++queries;
      auto rows = Materialize(*inst.cube, *inst.store, q);
      auto oracle = testing::OracleMaterialize(*inst.cube, *inst.store, q);
      EvaluateOptions options{.partitions = static_cast<std::size_t>(1 + k % 3)};
      auto result = Evaluate(*inst.cube, *inst.store, q, specs, options);
      bool ok = rows.ok() && result.ok() && *rows == oracle &&
                result->row_count == rows->size();
      for (std::size_t j = 0; ok && j < specs.size(); ++j) {
        std::optional<double> expected = testing::OracleAggregate(*rows, specs[j]);
        const std::optional<double>& got = result->values[j];
        if (specs[j].function == AggregateFunction::kAvg) {
          ok = expected.has_value() == got.has_value() &&
               (!expected || Near(*got, *expected, kRelTolerance));
        } else {
          ok = expected == got;
        }
      }
      if (!ok) {
        ++mismatches;
        if (first_failure.empty()) {
          first_failure = "instance " + std::to_string(i);
        }
      }
    }
  }
  double elapsed = Seconds(start);
  check.Expect(mismatches == 0, "no mismatches over " + std::to_string(queries) +
                                    " queries, got " + std::to_string(mismatches) +
                                    " (first at " + first_failure + ")");
  check.Expect(elapsed < kPropertyRuntimeSeconds,
               "runtime < 60 s, got " + Fmt(elapsed) + " s");
  check.Note(std::to_string(kPropertyInstances) + " instances, " +
             std::to_string(queries) + " queries in " + Fmt(std::round(elapsed * 1000) / 1000) +
             " s");
}

// 8. The regression quartet.
void Criterion8(Check& check) {
  auto cube = testing::ExampleCube();
  {
    // The key contains the owner value.
    ScenarioStore store(cube->schema_ptr());
    if (!store.CreateScenario("P3", "Product").ok()) std::abort();
    auto entries = testing::Associate(store, "P3",
                                      "Year=2011;Supplier=SU1;Product=P1",
                                      {"Volume=2"});
    check.Expect(entries.size() == 1 &&
                     entries[0].key == Q(store, "Year=2011;Supplier=SU1;Product=P1,P3"),
                 "item 1: key carries P3");
    auto rows = MaterializeOrDie(*cube, store,
                                 Q(store, "Year=2011;Supplier=SU1;Product=P3"));
    check.Expect(rows.size() == 1 && rows[0].measures[0] == 20,
                 "item 1: P3 query finds the simulated row");
  }
  {
    // The key keeps the scenario value named before resolution.
    ScenarioStore store(cube->schema_ptr());
    testing::BuildScenarioSu3(store);
    if (!store.CreateScenario("P3", "Product").ok()) std::abort();
    auto entries = testing::Associate(store, "P3",
                                      "Year=2011;Supplier=SU3;Product=P1,P2", {});
    check.Expect(entries.size() == 1 &&
                     entries[0].key ==
                         Q(store, "Year=2011;Supplier=SU3;Product=P1,P2,P3") &&
                     entries[0].values[0].query ==
                         Q(store, "Year=2011;Supplier=SU2;Product=P1,P2"),
                 "item 2: key keeps SU3, value names SU2");
    auto su3 = MaterializeOrDie(*cube, store,
                                Q(store, "Year=2011;Supplier=SU3;Product=P3"));
    auto su2 = MaterializeOrDie(*cube, store,
                                Q(store, "Year=2011;Supplier=SU2;Product=P3"));
    check.Expect(su3.size() == 2 && su2.empty(),
                 "item 2: P3 rows appear under SU3 only");
  }
  {
    // Only keys overlapping the query contribute.
    ScenarioStore store = testing::ExampleStore(cube);
    if (!store.CreateScenario("P3", "Product").ok()) std::abort();
    testing::Associate(store, "P3", "Year=2011;Supplier=SU3;Product=P1,P2",
                       {"Volume=2"});
    testing::Associate(store, "P3", "Year=2012;Supplier=SU3;Product=P1,P2",
                       {"Volume=5"});
    auto rows = MaterializeOrDie(*cube, store,
                                 Q(store, "Year=2011;Supplier=SU3;Product=P3"));
    bool first_key_only = rows.size() == 2;
    for (const MaterializedRow& r : rows) {
      first_key_only &= r.provenance && r.provenance->entry == 0;
    }
    check.Expect(first_key_only && rows[0].measures[0] == 24,
                 "item 3: 2011 query uses the 2011 key only");
  }
  {
    // Atomic keys keep SU2-derived rows out of an SU3-only query.
    ScenarioStore store(cube->schema_ptr());
    testing::BuildScenarioSu3(store);
    if (!store.CreateScenario("P3", "Product").ok()) std::abort();
    auto entries = testing::Associate(
        store, "P3", "Year=2011;Supplier=SU2,SU3;Product=P1,P2", {});
    auto rows = MaterializeOrDie(*cube, store,
                                 Q(store, "Year=2011;Supplier=SU3;Product=P3"));
    bool su3_only = entries.size() == 2 && rows.size() == 2;
    for (const MaterializedRow& r : rows) {
      su3_only &= store.ValueName(r.coords[1]) == "SU3";
    }
    check.Expect(su3_only, "item 4: SU3 query excludes SU2 rows");
  }
}

// 9. Deleting SU3 leaves every other query unchanged.
void Criterion9(Check& check) {
  auto cube = testing::ExampleCube();
  ScenarioStore store = testing::ExampleStore(cube);
  std::vector<AggregationSpec> specs = {
      Spec(cube->schema(), "sum:Volume*Cost"), Spec(cube->schema(), "count:Volume"),
      Spec(cube->schema(), "max:Cost")};
  // Every query over subsets of {2011, 2012} x {SU1, SU2} x {P1, P2}, with
  // STAR as a fourth choice per dimension.
  std::vector<std::vector<std::string>> choices = {
      {"2011", "2012", "2011,2012", "*"},
      {"SU1", "SU2", "SU1,SU2", "*"},
      {"P1", "P2", "P1,P2", "*"}};
  std::vector<Query> queries;
  for (const std::string& y : choices[0]) {
    for (const std::string& s : choices[1]) {
      for (const std::string& p : choices[2]) {
        queries.push_back(
            Q(store, "Year=" + y + ";Supplier=" + s + ";Product=" + p));
      }
    }
  }
  std::vector<Evaluation> before;
  std::vector<std::vector<MaterializedRow>> rows_before;
  for (const Query& q : queries) {
    before.push_back(*Evaluate(*cube, store, q, specs));
    rows_before.push_back(MaterializeOrDie(*cube, store, q));
  }
  Scenario s2012 = *store.FindByName("2012");
  check.Expect(store.DeleteScenario("SU3").ok(), "SU3 deletes");
  int changed = 0;
  for (std::size_t k = 0; k < queries.size(); ++k) {
    auto after = Evaluate(*cube, store, queries[k], specs);
    bool same = after.ok() && after->values == before[k].values &&
                after->row_count == before[k].row_count &&
                MaterializeOrDie(*cube, store, queries[k]) == rows_before[k];
    if (!same) ++changed;
  }
  check.Expect(changed == 0, std::to_string(queries.size()) +
                                 " queries unchanged, got " +
                                 std::to_string(changed) + " changed");
  const Scenario* after2012 = store.FindByName("2012");
  check.Expect(after2012 != nullptr && *after2012 == s2012,
               "2012 entries unchanged");
}

// 10. Real-only queries degenerate to select.
void Criterion10(Check& check) {
  std::mt19937_64 rng(20260710);
  int mismatches = 0;
  for (int i = 0; i < kDegenerationQueries; ++i) {
    testing::RandomInstance inst = MakeRandomInstance(rng);
    Query q = RandomQuery(rng, *inst.store, /*real_only=*/true);
    const Schema& s = inst.cube->schema();
    std::vector<AggregationSpec> specs = {Spec(s, "sum:M0*M1"), Spec(s, "count:M0"),
                                          Spec(s, "min:M0"), Spec(s, "max:M1")};
    auto rows = Materialize(*inst.cube, *inst.store, q);
    auto selected = Select(*inst.cube, q);
    auto result = Evaluate(*inst.cube, *inst.store, q, specs);
    bool ok = rows.ok() && selected.ok() && result.ok() &&
              rows->size() == selected->rows.size();
    std::vector<MaterializedRow> as_rows;
    for (std::size_t r = 0; ok && r < rows->size(); ++r) {
      const Row& row = selected->rows[r];
      ok = !(*rows)[r].simulated() && (*rows)[r].coords == row.coords &&
           (*rows)[r].measures == row.measures;
      as_rows.push_back({row.coords, row.measures, std::nullopt});
    }
    for (std::size_t j = 0; ok && j < specs.size(); ++j) {
      ok = result->values[j] == testing::OracleAggregate(as_rows, specs[j]);
    }
    if (!ok) ++mismatches;
  }
  check.Expect(mismatches == 0, std::to_string(kDegenerationQueries) +
                                    " queries degenerate, got " +
                                    std::to_string(mismatches) + " mismatches");
}

struct Criterion {
  int number;
  const char* title;
  void (*run)(Check&);
};

constexpr Criterion kCriteria[] = {
    {1, "golden 2011 total", Criterion1},
    {2, "scenario 2012 rows", Criterion2},
    {3, "scenario SU3 rows", Criterion3},
    {4, "dependent scenario resolution", Criterion4},
    {5, "golden 2012 total", Criterion5},
    {6, "full mixed query", Criterion6},
    {7, "oracle equivalence", Criterion7},
    {8, "regression quartet", Criterion8},
    {9, "independence after deletion", Criterion9},
    {10, "degeneration to select", Criterion10},
};

}  // namespace
}  // namespace whatif

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    std::string_view arg = argv[i];
    if (arg.starts_with("--criterion=")) {
      only = std::atoi(arg.substr(12).data());
    } else {
      std::fprintf(stderr, "usage: %s [--criterion=N]\n", argv[0]);
      return 2;
    }
  }
  int failed = 0;
  int ran = 0;
  for (const whatif::Criterion& c : whatif::kCriteria) {
    if (only != 0 && c.number != only) continue;
    ++ran;
    whatif::Check check;
    c.run(check);
    std::printf("%s criterion %d: %s%s\n", check.ok() ? "PASS" : "FAIL",
                c.number, c.title, check.Summary().c_str());
    if (!check.ok()) ++failed;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
