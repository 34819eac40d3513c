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

#include "gtest/gtest.h"
#include "test_util.h"
#include "whatif/evaluation.h"
#include "whatif/status.h"

namespace whatif {
namespace {

using testing::Associate;
using testing::ExampleCube;
using testing::Q;

class ScenarioStoreTest : public ::testing::Test {
 protected:
  std::vector<FactorAssignment> F(std::initializer_list<std::string_view> in) {
    std::vector<FactorAssignment> out;
    for (std::string_view f : in) out.push_back(*ParseFactor(f, cube_->schema()));
    return out;
  }

  std::shared_ptr<const DataCube> cube_ = ExampleCube();
  ScenarioStore store_{cube_->schema_ptr()};
};

TEST_F(ScenarioStoreTest, CreateScenario) {
  auto s = store_.CreateScenario("2012", "Year");
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->value, "2012");
  EXPECT_EQ(s->dimension, 0u);
  EXPECT_TRUE(s->entries.empty());
  EXPECT_TRUE(store_.CreateScenario("SU3", "Supplier").ok());
}

TEST_F(ScenarioStoreTest, CreateScenarioErrors) {
  auto real = store_.CreateScenario("2011", "Year");
  EXPECT_EQ(GetErrorCode(real.status()), ErrorCode::kNameCollision);
  ASSERT_TRUE(store_.CreateScenario("SU3", "Supplier").ok());
  auto dup = store_.CreateScenario("SU3", "Year");
  EXPECT_EQ(GetErrorCode(dup.status()), ErrorCode::kNameCollision);
  auto dim = store_.CreateScenario("X", "Region");
  EXPECT_EQ(GetErrorCode(dim.status()), ErrorCode::kUnknownDimension);
}

TEST_F(ScenarioStoreTest, AssociateRealQuery) {
  ASSERT_TRUE(store_.CreateScenario("2012", "Year").ok());
  auto entries = Associate(store_, "2012", "Year=2011;Supplier=SU1;Product=P1,P2",
                           {"Volume=2", "Cost=1"});
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].key,
            Q(store_, "Year=2011,2012;Supplier=SU1;Product=P1,P2"));
  ASSERT_EQ(entries[0].values.size(), 1u);
  EXPECT_EQ(entries[0].values[0].query,
            Q(store_, "Year=2011;Supplier=SU1;Product=P1,P2"));
  EXPECT_EQ(entries[0].values[0].factors, (std::vector<double>{2, 1}));
}

TEST_F(ScenarioStoreTest, UnmentionedFactorsDefaultToOne) {
  ASSERT_TRUE(store_.CreateScenario("2012", "Year").ok());
  auto entries = Associate(store_, "2012", "Year=2011", {"Volume=2"});
  EXPECT_EQ(entries[0].values[0].factors, (std::vector<double>{2, 1}));
}

TEST_F(ScenarioStoreTest, AssociateThroughNestedScenario) {
  testing::BuildScenario2012(store_);
  testing::BuildScenarioSu3(store_);
  testing::Redefine2012WithSu3(store_);
  const Scenario* w = store_.FindByName("2012");
  ASSERT_EQ(w->entries.size(), 2u);
  EXPECT_EQ(w->entries[0].key,
            Q(store_, "Year=2011,2012;Supplier=SU1;Product=P1,P2"));
  EXPECT_EQ(w->entries[0].values[0].factors, (std::vector<double>{2, 1}));
  EXPECT_EQ(w->entries[1].key,
            Q(store_, "Year=2011,2012;Supplier=SU3;Product=P1,P2"));
  ASSERT_EQ(w->entries[1].values.size(), 1u);
  EXPECT_EQ(w->entries[1].values[0].query,
            Q(store_, "Year=2011;Supplier=SU2;Product=P1,P2"));
  EXPECT_EQ(w->entries[1].values[0].factors, (std::vector<double>{3, 0.9}));
}

TEST_F(ScenarioStoreTest, AssociateErrors) {
  ASSERT_TRUE(store_.CreateScenario("SU3", "Supplier").ok());
  ASSERT_TRUE(store_.CreateScenario("2012", "Year").ok());
  auto self = store_.AssociateQuery("SU3", Q(store_, "Supplier=SU3"), {});
  EXPECT_EQ(GetErrorCode(self.status()), ErrorCode::kSelfReference);
  auto missing = store_.AssociateQuery("W", Query(3), {});
  EXPECT_EQ(GetErrorCode(missing.status()), ErrorCode::kUnknownScenario);
  // SU3 has no entries yet, so nothing can be drawn from it.
  auto empty = store_.AssociateQuery("2012", Q(store_, "Supplier=SU3"), {});
  EXPECT_EQ(GetErrorCode(empty.status()), ErrorCode::kEmptyResolution);
  Query hole(3);
  hole[1] = Selection::None();
  auto uncovered = store_.AssociateQuery("2012", hole, {});
  EXPECT_EQ(GetErrorCode(uncovered.status()), ErrorCode::kInvalidQuery);
  auto factor = store_.AssociateQuery("2012", Query(3),
                                      std::vector<FactorAssignment>{{0, NAN}});
  EXPECT_EQ(GetErrorCode(factor.status()), ErrorCode::kInvalidFactor);
  auto measure = store_.AssociateQuery(
      "2012", Query(3), std::vector<FactorAssignment>{{5, 1.0}});
  EXPECT_EQ(GetErrorCode(measure.status()), ErrorCode::kUnknownMeasure);
}

TEST_F(ScenarioStoreTest, FailedAssociationLeavesStoreUntouched) {
  ScenarioStore other(cube_->schema_ptr());
  ASSERT_TRUE(other.CreateScenario("A", "Supplier").ok());
  ASSERT_TRUE(other.CreateScenario("B", "Year").ok());
  Associate(other, "A", "Supplier=SU1;Product=P1", {});
  ScenarioStore snapshot = other;
  // A has no key on P2, so nothing can be drawn from it there.
  auto partial = other.AssociateQuery(
      "B", Q(other, "Supplier=A;Product=P2"), {});
  EXPECT_EQ(GetErrorCode(partial.status()), ErrorCode::kEmptyResolution);
  EXPECT_TRUE(Equivalent(other, snapshot));
  auto mixed = other.AssociateQuery(
      "B", Q(other, "Supplier=SU2,A;Product=P2"), {});
  EXPECT_EQ(GetErrorCode(mixed.status()), ErrorCode::kEmptyResolution);
  EXPECT_TRUE(Equivalent(other, snapshot));
  EXPECT_TRUE(other.FindByName("B")->entries.empty());
}

TEST_F(ScenarioStoreTest, DuplicateKeyAppendsValues) {
  ASSERT_TRUE(store_.CreateScenario("2012", "Year").ok());
  Associate(store_, "2012", "Year=2011;Supplier=SU1", {"Volume=2"});
  Associate(store_, "2012", "Year=2011;Supplier=SU1", {"Volume=3"});
  const Scenario* w = store_.FindByName("2012");
  ASSERT_EQ(w->entries.size(), 1u);
  ASSERT_EQ(w->entries[0].values.size(), 2u);
  EXPECT_EQ(w->entries[0].values[1].factors[0], 3);
}

TEST_F(ScenarioStoreTest, RemoveEntry) {
  testing::BuildScenario2012(store_);
  Query key = Q(store_, "Year=2011,2012;Supplier=SU1;Product=P1,P2");
  ScenarioStore before = store_;
  auto removed = store_.RemoveEntry("2012", key);
  ASSERT_TRUE(removed.ok());
  EXPECT_EQ(store_.FindByName("2012")->entries.size(), 1u);
  auto again = store_.RemoveEntry("2012", key);
  EXPECT_EQ(GetErrorCode(again.status()), ErrorCode::kMissingKey);
  auto at = store_.RemoveEntryAt("2012", 7);
  EXPECT_EQ(GetErrorCode(at.status()), ErrorCode::kMissingKey);
  auto rows = Materialize(*cube_, store_,
                          Q(store_, "Year=2012;Supplier=SU1,SU2;Product=P1,P2"));
  EXPECT_EQ(rows->size(), 2u);
}

TEST_F(ScenarioStoreTest, RemoveThenReassociateRoundTrips) {
  ASSERT_TRUE(store_.CreateScenario("2012", "Year").ok());
  Associate(store_, "2012", "Year=2011;Supplier=SU1;Product=P1,P2",
            {"Volume=2"});
  ScenarioStore before = store_;
  ASSERT_TRUE(store_.RemoveEntryAt("2012", 0).ok());
  Associate(store_, "2012", "Year=2011;Supplier=SU1;Product=P1,P2",
            {"Volume=2"});
  EXPECT_TRUE(Equivalent(before, store_));
}

TEST_F(ScenarioStoreTest, UpdateFactors) {
  testing::BuildScenario2012(store_);
  Query key = Q(store_, "Year=2011,2012;Supplier=SU1;Product=P1,P2");
  auto updated = store_.UpdateFactors("2012", key, 0, F({"Volume=2.5"}));
  ASSERT_TRUE(updated.ok());
  EXPECT_EQ(updated->factors, (std::vector<double>{2.5, 1}));
  auto rows = Materialize(*cube_, store_,
                          Q(store_, "Year=2012;Supplier=SU1;Product=P1,P2"));
  ASSERT_EQ(rows->size(), 2u);
  EXPECT_DOUBLE_EQ((*rows)[0].measures[0], 25);
  EXPECT_DOUBLE_EQ((*rows)[1].measures[0], 27.5);

  ASSERT_TRUE(store_.UpdateFactorsAt("2012", 0, 0, F({"Cost=0"})).ok());
  rows = Materialize(*cube_, store_,
                     Q(store_, "Year=2012;Supplier=SU1;Product=P1,P2"));
  EXPECT_EQ((*rows)[0].measures[1], 0);

  auto range = store_.UpdateFactorsAt("2012", 0, 3, F({"Cost=1"}));
  EXPECT_EQ(GetErrorCode(range.status()), ErrorCode::kIndexOutOfRange);
  auto bad = store_.UpdateFactorsAt("2012", 0, 0,
                                    std::vector<FactorAssignment>{{0, NAN}});
  EXPECT_EQ(GetErrorCode(bad.status()), ErrorCode::kInvalidFactor);
}

TEST_F(ScenarioStoreTest, DeleteScenarioKeepsOthersIntact) {
  testing::BuildScenario2012(store_);
  testing::BuildScenarioSu3(store_);
  testing::Redefine2012WithSu3(store_);
  Scenario before = *store_.FindByName("2012");
  auto removed = store_.DeleteScenario("SU3");
  ASSERT_TRUE(removed.ok());
  EXPECT_EQ(*store_.FindByName("2012"), before);
  EXPECT_FALSE(store_.LookupValue("SU3").has_value());
  EXPECT_TRUE(store_.LookupAnyValue("SU3").has_value());
  ASSERT_EQ(store_.retired().size(), 1u);
  EXPECT_EQ(store_.ValueName(before.entries[1].key[1].values()[0]), "SU3");
  // The retired name is still referenced, so it cannot be reused yet.
  auto reuse = store_.CreateScenario("SU3", "Supplier");
  EXPECT_EQ(GetErrorCode(reuse.status()), ErrorCode::kNameCollision);
  ASSERT_TRUE(store_.RemoveEntryAt("2012", 1).ok());
  EXPECT_TRUE(store_.retired().empty());
  EXPECT_TRUE(store_.CreateScenario("SU3", "Supplier").ok());
}

TEST_F(ScenarioStoreTest, DeleteUnknownScenario) {
  auto r = store_.DeleteScenario("nope");
  EXPECT_EQ(GetErrorCode(r.status()), ErrorCode::kUnknownScenario);
}

TEST_F(ScenarioStoreTest, StoredValuesAreRealOnlyAndKeysAtomic) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    testing::RandomInstance inst = testing::MakeRandomInstance(rng);
    const Schema& schema = inst.cube->schema();
    for (const Scenario& s : inst.store->scenarios()) {
      for (const ScenarioEntry& e : s.entries) {
        EXPECT_TRUE(e.key[s.dimension].Contains(s.id));
        Query stripped = e.key;
        if (!stripped[s.dimension].is_star()) {
          std::vector<ValueId> rest;
          for (ValueId v : stripped[s.dimension].values()) {
            if (v != s.id) rest.push_back(v);
          }
          stripped[s.dimension] = rest.empty() ? Selection::Star()
                                               : Selection::Of(rest);
        }
        EXPECT_TRUE(IsAtomic(schema, stripped));
        for (const FactoredQuery& fq : e.values) {
          EXPECT_TRUE(ScenarioValuesIn(schema, fq.query).empty());
        }
      }
    }
  }
}

TEST_F(ScenarioStoreTest, LaterEditsDoNotPropagate) {
  testing::BuildScenario2012(store_);
  testing::BuildScenarioSu3(store_);
  testing::Redefine2012WithSu3(store_);
  Scenario w = *store_.FindByName("2012");
  ASSERT_TRUE(store_.UpdateFactorsAt("SU3", 0, 0, F({"Cost=5"})).ok());
  Associate(store_, "SU3", "Year=2011;Supplier=SU1;Product=P1", {});
  EXPECT_EQ(*store_.FindByName("2012"), w);
}

}  // namespace
}  // namespace whatif
