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

// Scan throughput for real and scenario-bearing queries over a synthetic
// cube of Year x Supplier x Product with two measures.

#include <algorithm>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "benchmark/benchmark.h"
#include "whatif/evaluation.h"
#include "whatif/io.h"
#include "whatif/query_text.h"
#include "whatif/scenario_store.h"

namespace whatif {
namespace {

constexpr int kYears = 4;
constexpr int kSuppliers = 50;

std::string SyntheticCsv(int rows) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> volume(1, 500);
  std::uniform_int_distribution<int> cents(50, 400);
  std::string csv = "Year,Supplier,Product,Volume,Cost\n";
  const int products = std::max(1, rows / (kYears * kSuppliers));
  int emitted = 0;
  for (int y = 0; y < kYears && emitted < rows; ++y) {
    for (int s = 0; s < kSuppliers && emitted < rows; ++s) {
      for (int p = 0; p < products && emitted < rows; ++p, ++emitted) {
        csv += std::to_string(2010 + y) + ",S" + std::to_string(s) + ",P" +
               std::to_string(p) + "," + std::to_string(volume(rng)) + "," +
               std::to_string(cents(rng) / 100.0) + "\n";
      }
    }
  }
  return csv;
}

struct Fixture {
  std::shared_ptr<const DataCube> cube;
  std::unique_ptr<ScenarioStore> store;
};

CubeManifest Manifest() {
  return {{"Year", "Supplier", "Product"}, {"Volume", "Cost"}, ""};
}

Fixture MakeFixture(int rows) {
  Fixture f;
  f.cube = std::make_shared<const DataCube>(
      *LoadCube(SyntheticCsv(rows), Manifest()));
  f.store = std::make_unique<ScenarioStore>(f.cube->schema_ptr());
  ScenarioStore& store = *f.store;
  (void)store.CreateScenario("2020", "Year");
  (void)store.CreateScenario("SX", "Supplier");
  const Schema& schema = store.schema();
  auto factor = [&](const char* text) { return *ParseFactor(text, schema); };
  std::vector<FactorAssignment> cost = {factor("Cost=0.9")};
  (void)store.AssociateQuery("SX", *ParseQuery("Supplier=S0,S1", store), cost);
  std::vector<FactorAssignment> growth = {factor("Volume=1.1")};
  (void)store.AssociateQuery(
      "2020", *ParseQuery("Year=2013;Supplier=S2,S3,S4,SX", store), growth);
  return f;
}

void RunEvaluate(benchmark::State& state, const char* query_text,
                 std::size_t partitions) {
  Fixture f = MakeFixture(static_cast<int>(state.range(0)));
  Query query = *ParseQuery(query_text, *f.store);
  std::vector<AggregationSpec> specs = {
      *ParseAggregation("sum:Volume*Cost", f.cube->schema()),
      *ParseAggregation("max:Volume", f.cube->schema())};
  EvaluateOptions options{.partitions = partitions};
  if (!Evaluate(*f.cube, *f.store, query, specs, options).ok()) {
    state.SkipWithError("evaluation failed");
    return;
  }
  for (auto _ : state) {
    auto result = Evaluate(*f.cube, *f.store, query, specs, options);
    benchmark::DoNotOptimize(result);
  }
  state.SetItemsProcessed(state.iterations() * f.cube->row_count());
}

void BM_EvaluateReal(benchmark::State& state) {
  RunEvaluate(state, "Year=2011,2012", 1);
}
BENCHMARK(BM_EvaluateReal)->RangeMultiplier(10)->Range(1000, 1000000);

void BM_EvaluateScenario(benchmark::State& state) {
  RunEvaluate(state, "Year=2012,2013,2020;Supplier=*", 1);
}
BENCHMARK(BM_EvaluateScenario)->RangeMultiplier(10)->Range(1000, 1000000);

void BM_EvaluatePartitioned(benchmark::State& state) {
  RunEvaluate(state, "Year=2012,2013,2020", 4);
}
BENCHMARK(BM_EvaluatePartitioned)->Arg(1000000)->UseRealTime();

void BM_Materialize(benchmark::State& state) {
  Fixture f = MakeFixture(static_cast<int>(state.range(0)));
  Query query = *ParseQuery("Year=2013,2020;Supplier=S2,SX", *f.store);
  for (auto _ : state) {
    auto rows = Materialize(*f.cube, *f.store, query);
    benchmark::DoNotOptimize(rows);
  }
  state.SetItemsProcessed(state.iterations() * f.cube->row_count());
}
BENCHMARK(BM_Materialize)->RangeMultiplier(10)->Range(1000, 100000);

void BM_Associate(benchmark::State& state) {
  Fixture f = MakeFixture(10000);
  Query query = *ParseQuery("Year=2011,2012;Supplier=S5,S6,S7,SX", *f.store);
  for (auto _ : state) {
    ScenarioStore copy = *f.store;
    auto entries = copy.AssociateQuery("2020", query, {});
    if (!entries.ok()) {
      state.SkipWithError("association failed");
      break;
    }
    benchmark::DoNotOptimize(entries);
  }
}
BENCHMARK(BM_Associate);

void BM_LoadCube(benchmark::State& state) {
  std::string csv = SyntheticCsv(static_cast<int>(state.range(0)));
  CubeManifest manifest = Manifest();
  for (auto _ : state) {
    auto cube = LoadCube(csv, manifest);
    benchmark::DoNotOptimize(cube);
  }
  state.SetBytesProcessed(state.iterations() * csv.size());
}
BENCHMARK(BM_LoadCube)->Arg(10000)->Arg(100000);

}  // namespace
}  // namespace whatif

BENCHMARK_MAIN();
