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

#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "conffuzz/conffuzz.h"
#include "core/campaign.h"
#include "core/config.h"
#include "core/error.h"
#include "core/explain.h"
#include "core/gnb_validator.h"
#include "core/grammar.h"
#include "core/table1.h"
#include "core/target.h"
#include "core/triage.h"

struct cf_grammar {
  std::shared_ptr<const conffuzz::Grammar> grammar;
};

struct cf_target {
  conffuzz::TargetSpec spec;
};

struct cf_campaign {
  std::unique_ptr<conffuzz::Campaign> campaign;
  std::shared_ptr<const conffuzz::Grammar> grammar;
};

struct cf_triage {
  conffuzz::ConfigDocument baseline;
  std::vector<conffuzz::ParamPath> watch;
  std::vector<conffuzz::CrashReport> reports;
};

namespace {

namespace fs = std::filesystem;
using conffuzz::Error;
using conffuzz::ErrorCode;

thread_local std::string last_error;

cf_status Fail(cf_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into a status and cf_last_error().
template <typename F>
cf_status Guard(F&& body) {
  last_error.clear();
  try {
    return body();
  } catch (const Error& e) {
    return Fail(static_cast<cf_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(CF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(CF_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(CF_ERR_INTERNAL, "unknown exception");
  }
}

char* Dup(std::string_view s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void WriteFile(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

conffuzz::ConfigDocument LoadBaseline(const char* path) {
  if (path == nullptr) return conffuzz::table1::InitialDocument();
  return conffuzz::ParseConfig(ReadFile(path));
}

void FillResult(const conffuzz::ExecResult& r, cf_exec_result* out) {
  cf_exec_result result{};
  result.outcome = static_cast<cf_outcome_class>(r.outcome.cls);
  result.code = r.outcome.code;
  std::string branches;
  for (const std::string& b : r.feedback.branches) {
    branches += b;
    branches += '\n';
  }
  result.stderr_excerpt = Dup(r.outcome.stderr_excerpt);
  result.branches = Dup(branches);
  if (r.outcome.cls == conffuzz::OutcomeClass::kCrash) {
    result.dedup_key = Dup(conffuzz::DedupKey(r.outcome, r.feedback));
  }
  *out = result;
}

cf_campaign_stats FromCore(const conffuzz::CampaignStats& s) {
  return cf_campaign_stats{s.execs,           s.crashes_unique,
                           s.crashes_total,   s.timeouts,
                           s.corpus_size,     s.execs_per_sec,
                           s.seed,            s.started_unix_ms,
                           s.finished_unix_ms, s.interrupted ? 1 : 0};
}

#define CF_REQUIRE(cond)                                                  \
  do {                                                                    \
    if (!(cond)) {                                                        \
      return Fail(CF_ERR_INVALID_ARGUMENT, "precondition failed: " #cond); \
    }                                                                     \
  } while (0)

}  // namespace

extern "C" {

const char* cf_version(void) { return "0.1.0"; }

const char* cf_status_name(cf_status status) {
  switch (status) {
    case CF_OK:
      return "Ok";
    case CF_ERR_NOT_IN_GRAMMAR:
      return "NotInGrammar";
    case CF_ERR_INTERNAL:
      return "Internal";
    default:
      break;
  }
  static thread_local std::string name;
  name = conffuzz::ErrorCodeName(static_cast<ErrorCode>(status));
  return name.c_str();
}

const char* cf_last_error(void) { return last_error.c_str(); }

void cf_string_free(char* s) { std::free(s); }

cf_status cf_grammar_load(const char* path, int strict, cf_grammar** out) {
  CF_REQUIRE(path != nullptr && out != nullptr);
  return Guard([&] {
    *out = new cf_grammar{std::make_shared<const conffuzz::Grammar>(
        conffuzz::Grammar::Load(path, strict != 0))};
    return CF_OK;
  });
}

cf_status cf_grammar_parse(const char* json_text, int strict,
                           cf_grammar** out) {
  CF_REQUIRE(json_text != nullptr && out != nullptr);
  return Guard([&] {
    *out = new cf_grammar{std::make_shared<const conffuzz::Grammar>(
        conffuzz::Grammar::Parse(json_text, strict != 0))};
    return CF_OK;
  });
}

void cf_grammar_free(cf_grammar* grammar) { delete grammar; }

size_t cf_grammar_token_count(const cf_grammar* grammar) {
  return grammar == nullptr ? 0 : grammar->grammar->token_count();
}

size_t cf_grammar_rule_count(const cf_grammar* grammar) {
  return grammar == nullptr ? 0 : grammar->grammar->total_rule_count();
}

cf_status cf_grammar_generate(const cf_grammar* grammar, uint64_t seed,
                              uint32_t max_depth, char** out_text) {
  CF_REQUIRE(grammar != nullptr && out_text != nullptr);
  return Guard([&] {
    const conffuzz::Grammar& g = *grammar->grammar;
    *out_text = Dup(conffuzz::Unparse(
        conffuzz::GenerateTree(g, seed, max_depth), g));
    return CF_OK;
  });
}

cf_status cf_target_create(const char* spec, uint32_t timeout_ms,
                           cf_target** out) {
  CF_REQUIRE(spec != nullptr && out != nullptr);
  return Guard([&] {
    *out = new cf_target{conffuzz::TargetSpec::Parse(spec, timeout_ms)};
    return CF_OK;
  });
}

void cf_target_free(cf_target* target) { delete target; }

cf_status cf_target_execute(const cf_target* target, const char* input,
                            size_t input_len, cf_exec_result* out) {
  CF_REQUIRE(target != nullptr && out != nullptr);
  CF_REQUIRE(input != nullptr || input_len == 0);
  return Guard([&] {
    FillResult(conffuzz::Execute(target->spec,
                                 std::string_view(input, input_len)),
               out);
    return CF_OK;
  });
}

void cf_exec_result_clear(cf_exec_result* result) {
  if (result == nullptr) return;
  std::free(result->stderr_excerpt);
  std::free(result->branches);
  std::free(result->dedup_key);
  *result = cf_exec_result{};
}

cf_status cf_validate_gnb_text(const char* text, size_t len,
                               cf_exec_result* out) {
  CF_REQUIRE(out != nullptr && (text != nullptr || len == 0));
  return Guard([&] {
    FillResult(conffuzz::ValidateGnbText(std::string_view(text, len)), out);
    return CF_OK;
  });
}

void cf_campaign_config_init(cf_campaign_config* config) {
  if (config == nullptr) return;
  const conffuzz::CampaignConfig defaults;
  *config = cf_campaign_config{};
  config->seed = defaults.seed;
  config->max_execs = defaults.max_execs;
  config->workers = defaults.workers;
  for (size_t i = 0; i < 4; ++i) config->weights[i] = defaults.weights[i];
  config->energy_per_entry = defaults.energy_per_entry;
  config->max_depth = defaults.max_depth;
  config->minimize_crashes = defaults.minimize_crashes ? 1 : 0;
  config->progress_interval_ms = defaults.progress_interval_ms;
}

cf_status cf_campaign_create(const cf_campaign_config* config,
                             cf_campaign** out) {
  CF_REQUIRE(config != nullptr && out != nullptr);
  CF_REQUIRE(config->grammar != nullptr && config->target != nullptr);
  return Guard([&] {
    conffuzz::CampaignConfig c;
    c.grammar = config->grammar->grammar;
    c.target = config->target->spec;
    c.seed = config->seed;
    c.max_execs = config->max_execs;
    c.workers = config->workers;
    for (size_t i = 0; i < 4; ++i) c.weights[i] = config->weights[i];
    c.energy_per_entry = config->energy_per_entry;
    c.max_depth = config->max_depth;
    if (config->baseline_path != nullptr) {
      c.baseline = LoadBaseline(config->baseline_path);
    }
    c.minimize_crashes = config->minimize_crashes != 0;
    if (config->out_dir != nullptr) c.out_dir = fs::path(config->out_dir);
    c.progress_interval_ms = config->progress_interval_ms;
    auto campaign = std::make_unique<conffuzz::Campaign>(std::move(c));
    *out = new cf_campaign{std::move(campaign), config->grammar->grammar};
    return CF_OK;
  });
}

void cf_campaign_free(cf_campaign* campaign) { delete campaign; }

cf_status cf_campaign_run(cf_campaign* campaign, cf_progress_fn progress,
                          void* user, cf_campaign_stats* out) {
  CF_REQUIRE(campaign != nullptr);
  return Guard([&] {
    conffuzz::Campaign::ProgressCallback callback;
    if (progress != nullptr) {
      callback = [progress, user](const conffuzz::CampaignStats& s) {
        const cf_campaign_stats stats = FromCore(s);
        progress(&stats, user);
      };
    }
    const conffuzz::CampaignStats stats = campaign->campaign->Run(callback);
    if (out != nullptr) *out = FromCore(stats);
    return stats.interrupted ? Fail(CF_ERR_INTERRUPTED, "campaign interrupted")
                             : CF_OK;
  });
}

void cf_campaign_request_stop(cf_campaign* campaign) {
  if (campaign != nullptr) campaign->campaign->RequestStop();
}

size_t cf_campaign_crash_count(const cf_campaign* campaign) {
  return campaign == nullptr ? 0 : campaign->campaign->crashes().size();
}

cf_status cf_campaign_crash_key(const cf_campaign* campaign, size_t index,
                                char** out_key) {
  CF_REQUIRE(campaign != nullptr && out_key != nullptr);
  return Guard([&] {
    const auto& reports = campaign->campaign->crashes().reports();
    if (index >= reports.size()) {
      throw Error(ErrorCode::kInvalidArgument, "crash index out of range");
    }
    *out_key = Dup(reports[index].dedup_key);
    return CF_OK;
  });
}

cf_status cf_campaign_replay(cf_campaign* campaign, const char* input,
                             cf_exec_result* out) {
  CF_REQUIRE(campaign != nullptr && input != nullptr);
  return Guard([&] {
    std::optional<conffuzz::DerivationTree> tree =
        conffuzz::ParseWithGrammar(*campaign->grammar, input);
    if (!tree) {
      return Fail(CF_ERR_NOT_IN_GRAMMAR, "grammar does not derive the input");
    }
    const conffuzz::ExecResult result = campaign->campaign->Replay(*tree);
    if (out != nullptr) FillResult(result, out);
    return CF_OK;
  });
}

cf_status cf_minimize_text(const cf_grammar* grammar, const cf_target* target,
                           const char* input, cf_minimize_result* out) {
  CF_REQUIRE(grammar != nullptr && target != nullptr && input != nullptr &&
             out != nullptr);
  return Guard([&] {
    const conffuzz::Grammar& g = *grammar->grammar;
    std::optional<conffuzz::DerivationTree> tree =
        conffuzz::ParseWithGrammar(g, input);
    if (!tree) {
      return Fail(CF_ERR_NOT_IN_GRAMMAR, "grammar does not derive the input");
    }
    const conffuzz::ExecResult first = conffuzz::Execute(target->spec, input);
    const std::string key = conffuzz::DedupKey(first.outcome, first.feedback);
    const conffuzz::MinimizeResult min =
        conffuzz::Minimize(*tree, g, target->spec, key);
    cf_minimize_result result{};
    result.text = Dup(conffuzz::Unparse(min.tree, g));
    result.dedup_key = Dup(key);
    result.tree_size = conffuzz::TreeSize(*tree);
    result.minimized_tree_size = conffuzz::TreeSize(min.tree);
    result.executions = min.executions + 1;
    *out = result;
    return CF_OK;
  });
}

void cf_minimize_result_clear(cf_minimize_result* result) {
  if (result == nullptr) return;
  std::free(result->text);
  std::free(result->dedup_key);
  *result = cf_minimize_result{};
}

cf_status cf_triage_create(const char* baseline_path, cf_triage** out) {
  CF_REQUIRE(out != nullptr);
  return Guard([&] {
    *out = new cf_triage{LoadBaseline(baseline_path),
                         conffuzz::table1::WatchPaths(), {}};
    return CF_OK;
  });
}

void cf_triage_free(cf_triage* triage) { delete triage; }

cf_status cf_triage_set_watch(cf_triage* triage, const char* const* paths,
                              size_t count) {
  CF_REQUIRE(triage != nullptr && (paths != nullptr || count == 0));
  return Guard([&] {
    std::vector<conffuzz::ParamPath> watch;
    for (size_t i = 0; i < count; ++i) {
      CF_REQUIRE(paths[i] != nullptr);
      watch.push_back(conffuzz::ParamPath::Parse(paths[i]));
    }
    triage->watch = std::move(watch);
    return CF_OK;
  });
}

cf_status cf_triage_add_crash_dir(cf_triage* triage, const char* dir) {
  CF_REQUIRE(triage != nullptr && dir != nullptr);
  return Guard([&] {
    conffuzz::CrashStore store = conffuzz::CrashStore::Load(dir, triage->baseline);
    for (const conffuzz::CrashReport& report : store.reports()) {
      triage->reports.push_back(report);
    }
    return CF_OK;
  });
}

cf_status cf_triage_add_input(cf_triage* triage, const char* path,
                              const char* label) {
  CF_REQUIRE(triage != nullptr && path != nullptr);
  return Guard([&] {
    conffuzz::CrashReport report;
    report.input_text = ReadFile(path);
    report.label = label != nullptr ? label : fs::path(path).stem().string();
    triage->reports.push_back(std::move(report));
    return CF_OK;
  });
}

cf_status cf_triage_render(const cf_triage* triage, cf_report_format format,
                           char** out_text) {
  CF_REQUIRE(triage != nullptr && out_text != nullptr);
  return Guard([&] {
    const conffuzz::ParamTable table = conffuzz::ExtractParamTable(
        triage->reports, triage->watch, triage->baseline);
    *out_text = Dup(conffuzz::RenderReport(
        table, format == CF_REPORT_JSON ? conffuzz::ReportFormat::kJson
                                        : conffuzz::ReportFormat::kText));
    return CF_OK;
  });
}

cf_status cf_config_canonicalize(const char* text, char** out_text) {
  CF_REQUIRE(text != nullptr && out_text != nullptr);
  return Guard([&] {
    *out_text = Dup(conffuzz::SerializeConfig(conffuzz::ParseConfig(text)));
    return CF_OK;
  });
}

cf_status cf_config_get_param(const char* text, const char* path,
                              char** out_value) {
  CF_REQUIRE(text != nullptr && path != nullptr && out_value != nullptr);
  return Guard([&] {
    *out_value = Dup(conffuzz::GetParam(conffuzz::ParseConfig(text),
                                        conffuzz::ParamPath::Parse(path))
                         .ToString());
    return CF_OK;
  });
}

cf_status cf_write_table1_fixtures(const char* dir) {
  CF_REQUIRE(dir != nullptr);
  return Guard([&] {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::kIoError, std::string("cannot create ") + dir);
    const auto& columns = conffuzz::table1::Columns();
    for (size_t i = 0; i < columns.size(); ++i) {
      WriteFile(fs::path(dir) / (columns[i].name + ".conf"),
                conffuzz::SerializeConfig(conffuzz::table1::ColumnDocument(i)));
    }
    return CF_OK;
  });
}

cf_status cf_explain(const char* log_path, const char* src_dir,
                     const char* backend, char** out_report, int* out_partial) {
  CF_REQUIRE(log_path != nullptr && src_dir != nullptr && backend != nullptr &&
             out_report != nullptr);
  return Guard([&] {
    std::unique_ptr<conffuzz::ExplanationBackend> b =
        conffuzz::MakeBackend(backend);
    size_t tests = 0;
    const conffuzz::ExplainResult result =
        conffuzz::ExplainLog(ReadFile(log_path), *b, src_dir, &tests);
    *out_report = Dup(conffuzz::WriteReport(result, tests));
    if (out_partial != nullptr) *out_partial = result.backend_error ? 1 : 0;
    if (result.backend_error) {
      return Fail(CF_ERR_BACKEND, *result.backend_error);
    }
    return CF_OK;
  });
}

}  // extern "C"
