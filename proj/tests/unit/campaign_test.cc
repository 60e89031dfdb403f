// Copyright 2026 The conffuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "core/campaign.h"

#include <chrono>
#include <set>
#include <thread>

#include "core/error.h"
#include "core/table1.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.h"

namespace conffuzz {
namespace {

namespace fs = std::filesystem;

std::shared_ptr<const Grammar> GnbGrammar() {
  static const auto grammar = std::make_shared<const Grammar>(
      Grammar::Load(testing::SourcePath("grammars/gnb.json"), true));
  return grammar;
}

CampaignConfig BaseConfig(uint64_t seed, uint64_t max_execs) {
  CampaignConfig config;
  config.grammar = GnbGrammar();
  config.target = TargetSpec::Builtin("gnb-validator");
  config.seed = seed;
  config.max_execs = max_execs;
  return config;
}

std::set<std::string> Keys(const CrashStore& store) {
  std::set<std::string> keys;
  for (const CrashReport& r : store.reports()) keys.insert(r.dedup_key);
  return keys;
}

TEST(SchedulerTest, EmptyCorpus) {
  Scheduler s(4);
  try {
    s.NextIndex(0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyCorpus);
  }
}

TEST(SchedulerTest, SingleEntryAlwaysChosen) {
  Scheduler s(3);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(s.NextIndex(1), 0);
}

TEST(SchedulerTest, RoundRobinWithEnergy) {
  Scheduler s(64);
  for (int round = 0; round < 4; ++round) {
    for (int i = 0; i < 64; ++i) ASSERT_EQ(s.NextIndex(2), round % 2);
  }
}

TEST(SchedulerTest, NoveltyEarnsOneBonusRound) {
  Scheduler s(2);
  EXPECT_EQ(s.NextIndex(2), 0);
  s.ReportNovelty(0);
  EXPECT_EQ(s.NextIndex(2), 0);
  // Bonus round for entry 0.
  EXPECT_EQ(s.NextIndex(2), 0);
  s.ReportNovelty(0);
  EXPECT_EQ(s.NextIndex(2), 0);
  // No second consecutive bonus.
  EXPECT_EQ(s.NextIndex(2), 1);
  // Novelty credited to an entry that is not scheduled is ignored.
  s.ReportNovelty(0);
  EXPECT_EQ(s.NextIndex(2), 1);
  EXPECT_EQ(s.NextIndex(2), 0);
}

TEST(SchedulerTest, GrowingCorpusIsVisited) {
  Scheduler s(1);
  std::set<size_t> visited;
  for (size_t n = 1; n <= 5; ++n) visited.insert(s.NextIndex(n));
  for (int i = 0; i < 5; ++i) visited.insert(s.NextIndex(5));
  EXPECT_EQ(visited, (std::set<size_t>{0, 1, 2, 3, 4}));
}

TEST(ShouldKeepTest, KeepsOnlyNewBranches) {
  Feedback fb;
  fb.branches = {"a", "b"};
  EXPECT_TRUE(ShouldKeep(fb, {}));
  EXPECT_TRUE(ShouldKeep(fb, {"a"}));
  EXPECT_FALSE(ShouldKeep(fb, {"a", "b", "c"}));
  EXPECT_FALSE(ShouldKeep(Feedback{}, {}));
}

TEST(StatsJsonTest, KeyOrder) {
  CampaignStats stats;
  stats.execs = 10;
  stats.seed = 3;
  const auto json = nlohmann::ordered_json::parse(StatsJson(stats));
  std::vector<std::string> keys;
  for (const auto& [k, _] : json.items()) keys.push_back(k);
  EXPECT_THAT(keys, ::testing::ElementsAre(
                        "execs", "crashes_total", "crashes_unique", "timeouts",
                        "corpus_size", "execs_per_sec", "seed",
                        "started_unix_ms", "finished_unix_ms"));
  EXPECT_EQ(json["execs"], 10);
}

TEST(CampaignConfigTest, Validation) {
  CampaignConfig config = BaseConfig(1, 10);
  EXPECT_NO_THROW(config.Validate());
  for (auto mutate : std::vector<std::function<void(CampaignConfig&)>>{
           [](CampaignConfig& c) { c.grammar = nullptr; },
           [](CampaignConfig& c) { c.workers = 0; },
           [](CampaignConfig& c) { c.max_execs = 0; },
           [](CampaignConfig& c) { c.energy_per_entry = 0; },
       }) {
    CampaignConfig bad = config;
    mutate(bad);
    EXPECT_THROW(Campaign{bad}, Error);
  }
}

TEST(CampaignTest, RunFindsCrashesAndPersists) {
  testing::TempDir dir;
  CampaignConfig config = BaseConfig(1, 3000);
  config.out_dir = dir.path();
  Campaign campaign(config);
  const CampaignStats stats = campaign.Run();
  EXPECT_EQ(stats.execs, 3000);
  EXPECT_GT(stats.crashes_unique, 0);
  EXPECT_EQ(stats.crashes_unique, campaign.crashes().size());
  EXPECT_GE(stats.crashes_total, stats.crashes_unique);
  EXPECT_EQ(stats.corpus_size, campaign.corpus().size());
  EXPECT_GE(campaign.corpus().size(), 11);

  const auto json = nlohmann::json::parse(
      testing::ReadFileOrDie(dir / "stats.json"));
  EXPECT_EQ(json["execs"], 3000);
  EXPECT_EQ(json["crashes_unique"], stats.crashes_unique);
  for (const CrashReport& r : campaign.crashes().reports()) {
    EXPECT_TRUE(fs::exists(dir / "crashes" / r.dedup_key / "report.json"));
    EXPECT_LE(r.minimized_tree_size, r.tree_size);
  }
  size_t corpus_files = 0;
  for (const auto& e : fs::directory_iterator(dir / "corpus")) {
    corpus_files += e.path().extension() == ".conf";
  }
  EXPECT_EQ(corpus_files, campaign.corpus().size());
}

TEST(CampaignTest, DeterministicForFixedSeed) {
  Campaign a(BaseConfig(42, 4000));
  Campaign b(BaseConfig(42, 4000));
  const CampaignStats sa = a.Run();
  const CampaignStats sb = b.Run();
  EXPECT_EQ(sa.execs, sb.execs);
  EXPECT_EQ(sa.crashes_total, sb.crashes_total);
  EXPECT_EQ(sa.corpus_size, sb.corpus_size);
  EXPECT_EQ(Keys(a.crashes()), Keys(b.crashes()));
  ASSERT_EQ(a.corpus().size(), b.corpus().size());
  for (size_t i = 0; i < a.corpus().size(); ++i) {
    EXPECT_EQ(a.corpus()[i].tree, b.corpus()[i].tree);
  }
  Campaign c(BaseConfig(43, 4000));
  c.Run();
  EXPECT_FALSE(c.corpus().size() == a.corpus().size() &&
               Keys(c.crashes()) == Keys(a.crashes()) &&
               c.stats().crashes_total == sa.crashes_total);
}

TEST(CampaignTest, ReplayIsIdempotentPerKey) {
  Campaign campaign(BaseConfig(1, 1));
  const Grammar& g = *GnbGrammar();
  const auto tree =
      ParseWithGrammar(g, SerializeConfig(table1::ColumnDocument(5)));
  ASSERT_TRUE(tree.has_value());
  const ExecResult first = campaign.Replay(*tree);
  EXPECT_EQ(first.outcome.code, 104);
  campaign.Replay(*tree);
  EXPECT_EQ(campaign.crashes().size(), 1);
  EXPECT_EQ(campaign.stats().crashes_total, 2);
  EXPECT_EQ(campaign.stats().crashes_unique, 1);
}

TEST(CampaignTest, RequestStopEndsRun) {
  Campaign campaign(BaseConfig(1, 1'000'000'000));
  std::thread stopper([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(200));
    campaign.RequestStop();
  });
  const auto start = std::chrono::steady_clock::now();
  const CampaignStats stats = campaign.Run();
  stopper.join();
  EXPECT_TRUE(stats.interrupted);
  EXPECT_LT(stats.execs, 1'000'000'000);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(5));
}

TEST(CampaignTest, ParallelWorkersHonorBudget) {
  CampaignConfig config = BaseConfig(7, 5000);
  config.workers = 4;
  Campaign campaign(config);
  const CampaignStats stats = campaign.Run();
  EXPECT_EQ(stats.execs, 5000);
  EXPECT_GT(stats.crashes_unique, 0);
  EXPECT_EQ(Keys(campaign.crashes()).size(), campaign.crashes().size());
}

TEST(CampaignTest, ProgressCallbackFires) {
  CampaignConfig config = BaseConfig(1, 20000);
  config.progress_interval_ms = 1;
  Campaign campaign(config);
  int calls = 0;
  campaign.Run([&](const CampaignStats&) { ++calls; });
  EXPECT_GT(calls, 0);
}

TEST(CampaignTest, RunCampaignHelper) {
  EXPECT_EQ(RunCampaign(BaseConfig(3, 500)).execs, 500);
}

}  // namespace
}  // namespace conffuzz
