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

#include <unistd.h>

#include <exception>
#include <fstream>
#include <thread>
#include <utility>

#include "core/error.h"
#include "core/table1.h"
#include "json.hpp"

namespace conffuzz {
namespace {

namespace fs = std::filesystem;

int64_t UnixMillis() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

void WriteText(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

}  // namespace

void CampaignConfig::Validate() const {
  if (!grammar) throw Error(ErrorCode::kInvalidArgument, "no grammar");
  if (workers < 1) {
    throw Error(ErrorCode::kInvalidArgument, "workers must be at least 1");
  }
  if (max_execs < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_execs must be at least 1");
  }
  if (energy_per_entry < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "energy_per_entry must be at least 1");
  }
  ValidateWeights(weights);
  target.Validate();
}

std::string StatsJson(const CampaignStats& stats) {
  nlohmann::ordered_json doc = {
      {"execs", stats.execs},
      {"crashes_total", stats.crashes_total},
      {"crashes_unique", stats.crashes_unique},
      {"timeouts", stats.timeouts},
      {"corpus_size", stats.corpus_size},
      {"execs_per_sec", stats.execs_per_sec},
      {"seed", stats.seed},
      {"started_unix_ms", stats.started_unix_ms},
      {"finished_unix_ms", stats.finished_unix_ms},
  };
  return doc.dump(2) + "\n";
}

bool ShouldKeep(const Feedback& feedback, const std::set<std::string>& seen) {
  for (const std::string& branch : feedback.branches) {
    if (!seen.contains(branch)) return true;
  }
  return false;
}

Scheduler::Scheduler(uint32_t energy_per_entry)
    : energy_(energy_per_entry == 0 ? 1 : energy_per_entry) {}

size_t Scheduler::NextIndex(size_t corpus_size) {
  if (corpus_size == 0) {
    throw Error(ErrorCode::kEmptyCorpus, "cannot schedule from an empty corpus");
  }
  if (!started_) {
    started_ = true;
    cursor_ = 0;
    left_ = energy_;
  } else if (left_ == 0) {
    if (novelty_ && !in_bonus_) {
      in_bonus_ = true;
    } else {
      cursor_ = (cursor_ + 1) % corpus_size;
      in_bonus_ = false;
    }
    novelty_ = false;
    left_ = energy_;
  }
  if (cursor_ >= corpus_size) cursor_ = 0;
  --left_;
  return cursor_;
}

void Scheduler::ReportNovelty(size_t index) {
  if (started_ && index == cursor_) novelty_ = true;
}

Campaign::Campaign(CampaignConfig config)
    : config_(std::move(config)), scheduler_(config_.energy_per_entry) {
  config_.Validate();
  baseline_ = config_.baseline ? *config_.baseline : table1::InitialDocument();
  campaign_id_ = "c" + std::to_string(config_.seed) + "-" +
                 std::to_string(::getpid()) + "-" +
                 std::to_string(reinterpret_cast<uintptr_t>(this) & 0xffff);
  stats_.seed = config_.seed;
  if (config_.out_dir) {
    std::error_code ec;
    fs::create_directories(*config_.out_dir / "corpus", ec);
    fs::create_directories(*config_.out_dir / "crashes", ec);
    if (ec) {
      throw Error(ErrorCode::kIoError,
                  "cannot create output directory " + config_.out_dir->string());
    }
  }
}

CampaignStats Campaign::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

bool Campaign::Done() const {
  return stop_.load(std::memory_order_relaxed) ||
         stats_.execs >= config_.max_execs;
}

void Campaign::RouteCrash(const DerivationTree& tree, const std::string& text,
                          const ExecResult& result, uint64_t exec) {
  const std::string key = DedupKey(result.outcome, result.feedback);
  if (crashes_.Contains(key)) return;

  CrashReport report;
  report.dedup_key = key;
  report.outcome = result.outcome;
  report.input_text = text;
  report.first_seen_exec = exec;
  report.tree_size = TreeSize(tree);
  DerivationTree minimized = tree;
  if (config_.minimize_crashes) {
    try {
      minimized =
          Minimize(tree, *config_.grammar, config_.target, key).tree;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNonReproducible) throw;
    }
  }
  report.minimized_text = Unparse(minimized, *config_.grammar);
  report.minimized_tree_size = TreeSize(minimized);
  try {
    report.param_diff = DiffParams(baseline_, ParseConfig(text));
  } catch (const Error&) {
    // Not a parseable configuration; no parameter view.
  }
  if (config_.out_dir) {
    CrashStore::PersistReport(report, *config_.out_dir / "crashes");
  }
  crashes_.Add(std::move(report));
  stats_.crashes_unique = crashes_.size();
}

void Campaign::Process(const DerivationTree& tree, const std::string& text,
                       const ExecResult& result, std::optional<size_t> parent) {
  const uint64_t exec = ++stats_.execs;
  const bool novel = ShouldKeep(result.feedback, seen_);
  seen_.insert(result.feedback.branches.begin(), result.feedback.branches.end());

  switch (result.outcome.cls) {
    case OutcomeClass::kCrash:
      ++stats_.crashes_total;
      RouteCrash(tree, text, result, exec);
      break;
    case OutcomeClass::kTimeout:
      ++stats_.timeouts;
      break;
    case OutcomeClass::kOk:
    case OutcomeClass::kReject:
      if (novel && parent) {
        CorpusEntry entry{corpus_.size(), tree, result.feedback.digest(), exec,
                          config_.energy_per_entry};
        if (config_.out_dir) {
          WriteText(*config_.out_dir / "corpus" /
                        (std::to_string(entry.id) + ".conf"),
                    text);
        }
        corpus_.push_back(std::move(entry));
      }
      break;
  }
  if (novel && parent) scheduler_.ReportNovelty(*parent);
  stats_.corpus_size = corpus_.size();
}

void Campaign::AddSeed(const DerivationTree& tree) {
  const std::string text = Unparse(tree, *config_.grammar);
  const ExecResult result = Execute(config_.target, text,
                                    ExecContext{campaign_id_, stats_.execs});
  Process(tree, text, result, std::nullopt);
  CorpusEntry entry{corpus_.size(), tree, result.feedback.digest(),
                    stats_.execs, config_.energy_per_entry};
  if (config_.out_dir) {
    WriteText(*config_.out_dir / "corpus" / (std::to_string(entry.id) + ".conf"),
              text);
  }
  corpus_.push_back(std::move(entry));
  stats_.corpus_size = corpus_.size();
}

ExecResult Campaign::Replay(const DerivationTree& tree) {
  std::lock_guard lock(mu_);
  const std::string text = Unparse(tree, *config_.grammar);
  ExecResult result = Execute(config_.target, text,
                              ExecContext{campaign_id_, stats_.execs});
  Process(tree, text, result, std::nullopt);
  return result;
}

void Campaign::MaybeReportProgress(const ProgressCallback& progress) {
  if (!progress) return;
  const auto now = std::chrono::steady_clock::now();
  if (now - last_progress_ <
      std::chrono::milliseconds(config_.progress_interval_ms)) {
    return;
  }
  last_progress_ = now;
  CampaignStats snapshot = stats_;
  const double secs = std::chrono::duration<double>(now - started_).count();
  snapshot.execs_per_sec = secs > 0 ? snapshot.execs / secs : 0;
  progress(snapshot);
}

void Campaign::RunSingle(const ProgressCallback& progress) {
  std::mt19937_64 rng(config_.seed);
  while (!Done()) {
    const size_t parent = scheduler_.NextIndex(corpus_.size());
    std::uniform_int_distribution<size_t> pick_donor(0, corpus_.size() - 1);
    const size_t donor = pick_donor(rng);
    const uint64_t mutation_seed = rng();
    auto [tree, kind] = RandomMutation(corpus_[parent].tree, *config_.grammar,
                                       mutation_seed, config_.weights,
                                       &corpus_[donor].tree, config_.max_depth);
    const std::string text = Unparse(tree, *config_.grammar);
    const ExecResult result = Execute(config_.target, text,
                                      ExecContext{campaign_id_, stats_.execs});
    std::lock_guard lock(mu_);
    Process(tree, text, result, parent);
    MaybeReportProgress(progress);
  }
}

void Campaign::RunParallel(const ProgressCallback& progress) {
  claimed_ = stats_.execs;
  std::exception_ptr failure;
  std::vector<std::thread> threads;
  for (uint32_t w = 0; w < config_.workers; ++w) {
    threads.emplace_back([this, w, &failure, &progress] {
      std::mt19937_64 rng(config_.seed + w);
      try {
        while (true) {
          DerivationTree parent_tree, donor_tree;
          size_t parent;
          uint64_t seq;
          {
            std::lock_guard lock(mu_);
            if (stop_.load(std::memory_order_relaxed) ||
                claimed_ >= config_.max_execs) {
              return;
            }
            seq = claimed_++;
            parent = scheduler_.NextIndex(corpus_.size());
            std::uniform_int_distribution<size_t> pick_donor(
                0, corpus_.size() - 1);
            parent_tree = corpus_[parent].tree;
            donor_tree = corpus_[pick_donor(rng)].tree;
          }
          auto [tree, kind] =
              RandomMutation(parent_tree, *config_.grammar, rng(),
                             config_.weights, &donor_tree, config_.max_depth);
          const std::string text = Unparse(tree, *config_.grammar);
          const ExecResult result =
              Execute(config_.target, text, ExecContext{campaign_id_, seq});
          std::lock_guard lock(mu_);
          Process(tree, text, result, parent);
          MaybeReportProgress(progress);
        }
      } catch (...) {
        std::lock_guard lock(mu_);
        if (!failure) failure = std::current_exception();
        stop_.store(true, std::memory_order_relaxed);
      }
    });
  }
  for (std::thread& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

void Campaign::PersistStats() const {
  if (!config_.out_dir) return;
  WriteText(*config_.out_dir / "stats.json", StatsJson(stats_));
}

CampaignStats Campaign::Run(const ProgressCallback& progress) {
  started_ = std::chrono::steady_clock::now();
  last_progress_ = started_;
  stats_.started_unix_ms = UnixMillis();

  auto finish = [&] {
    std::lock_guard lock(mu_);
    stats_.finished_unix_ms = UnixMillis();
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - started_)
                            .count();
    stats_.execs_per_sec = secs > 0 ? stats_.execs / secs : 0;
    stats_.interrupted = stop_.load(std::memory_order_relaxed) &&
                         stats_.execs < config_.max_execs;
    PersistStats();
    return stats_;
  };

  try {
    const Grammar& grammar = *config_.grammar;
    {
      std::lock_guard lock(mu_);
      for (uint32_t i = 0; i < config_.seed_count && !Done(); ++i) {
        AddSeed(GenerateTree(grammar, config_.seed + i, config_.max_depth));
      }
      if (!Done()) {
        if (auto fixture =
                ParseWithGrammar(grammar, SerializeConfig(baseline_))) {
          AddSeed(*fixture);
        }
      }
    }
    if (config_.workers == 1) {
      RunSingle(progress);
    } else {
      RunParallel(progress);
    }
  } catch (...) {
    finish();
    throw;
  }
  return finish();
}

CampaignStats RunCampaign(const CampaignConfig& config) {
  Campaign campaign(config);
  return campaign.Run();
}

}  // namespace conffuzz
