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

// The coverage-guided fuzzing loop.
//
// A campaign seeds its corpus with generated trees, then repeatedly picks an
// entry (round-robin with a novelty bonus), mutates it, executes the result,
// keeps it if it reached new branches, and routes crashes to a deduplicating
// crash store. With an output directory it persists:
//
//   <out>/corpus/<id>.conf
//   <out>/crashes/<dedup_key>/{input.conf,minimized.conf,report.json}
//   <out>/stats.json
//
// A single-worker campaign is fully deterministic in its configuration.

#ifndef CONFFUZZ_CORE_CAMPAIGN_H_
#define CONFFUZZ_CORE_CAMPAIGN_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "core/config.h"
#include "core/grammar.h"
#include "core/mutate.h"
#include "core/target.h"
#include "core/triage.h"

namespace conffuzz {

struct CorpusEntry {
  uint64_t id = 0;
  DerivationTree tree;
  uint64_t feedback_digest = 0;
  uint64_t discovered_at = 0;
  uint32_t energy = 0;
};

struct CampaignConfig {
  std::shared_ptr<const Grammar> grammar;
  TargetSpec target;
  uint64_t seed = 0;
  uint64_t max_execs = 1;
  uint32_t workers = 1;
  MutationWeights weights = kDefaultMutationWeights;
  uint32_t energy_per_entry = 64;
  uint32_t max_depth = kDefaultMaxDepth;
  // Generated seed trees use seeds seed .. seed + seed_count - 1.
  uint32_t seed_count = 10;
  // Reference for crash parameter diffs; defaults to the built-in initial
  // gNB configuration.
  std::optional<ConfigDocument> baseline;
  bool minimize_crashes = true;
  std::optional<std::filesystem::path> out_dir;
  uint32_t progress_interval_ms = 2000;

  // Throws kInvalidArgument.
  void Validate() const;
};

struct CampaignStats {
  uint64_t execs = 0;
  uint64_t crashes_unique = 0;
  uint64_t crashes_total = 0;
  uint64_t timeouts = 0;
  uint64_t corpus_size = 0;
  double execs_per_sec = 0;
  uint64_t seed = 0;
  int64_t started_unix_ms = 0;
  int64_t finished_unix_ms = 0;
  bool interrupted = false;
};

// stats.json body; keys in fixed order.
std::string StatsJson(const CampaignStats& stats);

// True iff `feedback` contains a branch not in `seen`.
bool ShouldKeep(const Feedback& feedback, const std::set<std::string>& seen);

// Round-robin power schedule: each entry receives `energy_per_entry`
// consecutive picks; an entry that produced novelty during its regular round
// gets one bonus round before the cursor moves on.
class Scheduler {
 public:
  explicit Scheduler(uint32_t energy_per_entry);

  // Throws kEmptyCorpus when corpus_size is 0.
  size_t NextIndex(size_t corpus_size);
  const CorpusEntry& Next(const std::vector<CorpusEntry>& corpus) {
    return corpus[NextIndex(corpus.size())];
  }
  // Credits novelty to `index` if it is the entry currently scheduled.
  void ReportNovelty(size_t index);

 private:
  uint32_t energy_;
  size_t cursor_ = 0;
  uint32_t left_ = 0;
  bool started_ = false;
  bool in_bonus_ = false;
  bool novelty_ = false;
};

class Campaign {
 public:
  using ProgressCallback = std::function<void(const CampaignStats&)>;

  explicit Campaign(CampaignConfig config);

  // Runs to max_execs or until RequestStop. Stats are persisted even when
  // the run is interrupted or a target error propagates.
  CampaignStats Run(const ProgressCallback& progress = {});

  // Safe to call from another thread or a signal handler.
  void RequestStop() { stop_.store(true, std::memory_order_relaxed); }

  // Executes `tree` once and processes the result exactly as the loop does.
  ExecResult Replay(const DerivationTree& tree);

  const std::vector<CorpusEntry>& corpus() const { return corpus_; }
  const CrashStore& crashes() const { return crashes_; }
  const std::set<std::string>& seen_branches() const { return seen_; }
  CampaignStats stats() const;
  const std::string& campaign_id() const { return campaign_id_; }

 private:
  // Updates corpus, seen set, statistics, and crash store. Caller holds mu_.
  void Process(const DerivationTree& tree, const std::string& text,
               const ExecResult& result, std::optional<size_t> parent);
  void RouteCrash(const DerivationTree& tree, const std::string& text,
                  const ExecResult& result, uint64_t exec);
  void AddSeed(const DerivationTree& tree);
  void RunSingle(const ProgressCallback& progress);
  void RunParallel(const ProgressCallback& progress);
  void MaybeReportProgress(const ProgressCallback& progress);
  void PersistStats() const;
  bool Done() const;

  CampaignConfig config_;
  ConfigDocument baseline_;
  std::string campaign_id_;
  std::atomic<bool> stop_{false};

  mutable std::mutex mu_;
  std::vector<CorpusEntry> corpus_;
  std::set<std::string> seen_;
  CrashStore crashes_;
  Scheduler scheduler_;
  CampaignStats stats_;
  uint64_t claimed_ = 0;
  std::chrono::steady_clock::time_point started_;
  std::chrono::steady_clock::time_point last_progress_;
};

CampaignStats RunCampaign(const CampaignConfig& config);

}  // namespace conffuzz

#endif  // CONFFUZZ_CORE_CAMPAIGN_H_
