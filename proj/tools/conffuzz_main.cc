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

// conffuzz command-line driver. Talks to the library only through the C API.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 target reject
// (validate), 3 crash or timeout (validate), 4 internal or backend error.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "conffuzz/conffuzz.h"

namespace {

namespace fs = std::filesystem;

enum Exit : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitReject = 2,
  kExitCrash = 3,
  kExitInternal = 4,
};

constexpr const char* kDefaultTarget = "builtin:gnb-validator";

int Report(cf_status status, const std::string& what) {
  std::cerr << "conffuzz: " << what << ": " << cf_status_name(status) << ": "
            << cf_last_error() << "\n";
  switch (status) {
    case CF_ERR_BACKEND:
    case CF_ERR_INTERNAL:
      return kExitInternal;
    default:
      return kExitUsage;
  }
}

struct StringDeleter {
  void operator()(char* s) const { cf_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct GrammarDeleter {
  void operator()(cf_grammar* g) const { cf_grammar_free(g); }
};
struct TargetDeleter {
  void operator()(cf_target* t) const { cf_target_free(t); }
};
struct CampaignDeleter {
  void operator()(cf_campaign* c) const { cf_campaign_free(c); }
};
struct TriageDeleter {
  void operator()(cf_triage* t) const { cf_triage_free(t); }
};

bool ReadFile(const std::string& path, std::string* out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream text;
  text << in.rdbuf();
  *out = text.str();
  return true;
}

bool WriteFile(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  return static_cast<bool>(out);
}

// --- grammar-check ---------------------------------------------------------

struct GrammarCheckArgs {
  std::string grammar;
  bool strict = false;
};

int GrammarCheck(const GrammarCheckArgs& args) {
  cf_grammar* raw = nullptr;
  if (cf_status s = cf_grammar_load(args.grammar.c_str(), args.strict, &raw)) {
    return Report(s, args.grammar);
  }
  std::unique_ptr<cf_grammar, GrammarDeleter> grammar(raw);
  std::cout << "tokens: " << cf_grammar_token_count(grammar.get())
            << "\nrules: " << cf_grammar_rule_count(grammar.get()) << "\n";
  return kExitOk;
}

// --- gen -------------------------------------------------------------------

struct GenArgs {
  std::string grammar;
  uint64_t seed = 0;
  uint64_t count = 1;
  std::string out = ".";
  uint32_t max_depth = 64;
};

int Gen(const GenArgs& args) {
  cf_grammar* raw = nullptr;
  if (cf_status s = cf_grammar_load(args.grammar.c_str(), 0, &raw)) {
    return Report(s, args.grammar);
  }
  std::unique_ptr<cf_grammar, GrammarDeleter> grammar(raw);
  std::error_code ec;
  fs::create_directories(args.out, ec);
  for (uint64_t k = 0; k < args.count; ++k) {
    char* text = nullptr;
    if (cf_status s = cf_grammar_generate(grammar.get(), args.seed + k,
                                          args.max_depth, &text)) {
      return Report(s, "generate");
    }
    OwnedString owned(text);
    const fs::path path =
        fs::path(args.out) / ("gen-" + std::to_string(k) + ".conf");
    if (!WriteFile(path, text)) {
      std::cerr << "conffuzz: cannot write " << path << "\n";
      return kExitUsage;
    }
  }
  return kExitOk;
}

// --- fuzz ------------------------------------------------------------------

struct FuzzArgs {
  std::string grammar;
  std::string target = kDefaultTarget;
  uint64_t seed = 0;
  uint32_t workers = 1;
  uint64_t max_execs = 100000;
  uint32_t timeout_ms = 10000;
  std::string out = "conffuzz-out";
  uint32_t energy = 64;
  uint32_t max_depth = 64;
  std::vector<double> weights;
  std::string baseline;
  bool no_minimize = false;
};

cf_campaign* volatile active_campaign = nullptr;

extern "C" void OnInterrupt(int) {
  if (cf_campaign* c = active_campaign) cf_campaign_request_stop(c);
}

void PrintProgress(const cf_campaign_stats* stats, void*) {
  std::fprintf(stderr,
               "[fuzz] execs=%llu corpus=%llu uniques=%llu crashes=%llu "
               "timeouts=%llu exec/s=%.0f\n",
               static_cast<unsigned long long>(stats->execs),
               static_cast<unsigned long long>(stats->corpus_size),
               static_cast<unsigned long long>(stats->crashes_unique),
               static_cast<unsigned long long>(stats->crashes_total),
               static_cast<unsigned long long>(stats->timeouts),
               stats->execs_per_sec);
}

int Fuzz(const FuzzArgs& args) {
  if (!args.weights.empty() && args.weights.size() != 4) {
    std::cerr << "conffuzz: --weights takes exactly four values\n";
    return kExitUsage;
  }
  cf_grammar* g = nullptr;
  if (cf_status s = cf_grammar_load(args.grammar.c_str(), 0, &g)) {
    return Report(s, args.grammar);
  }
  std::unique_ptr<cf_grammar, GrammarDeleter> grammar(g);
  cf_target* t = nullptr;
  if (cf_status s = cf_target_create(args.target.c_str(), args.timeout_ms, &t)) {
    return Report(s, args.target);
  }
  std::unique_ptr<cf_target, TargetDeleter> target(t);

  cf_campaign_config config;
  cf_campaign_config_init(&config);
  config.grammar = grammar.get();
  config.target = target.get();
  config.seed = args.seed;
  config.max_execs = args.max_execs;
  config.workers = args.workers;
  config.energy_per_entry = args.energy;
  config.max_depth = args.max_depth;
  for (size_t i = 0; i < args.weights.size(); ++i) {
    config.weights[i] = args.weights[i];
  }
  config.baseline_path = args.baseline.empty() ? nullptr : args.baseline.c_str();
  config.minimize_crashes = args.no_minimize ? 0 : 1;
  config.out_dir = args.out.c_str();

  cf_campaign* c = nullptr;
  if (cf_status s = cf_campaign_create(&config, &c)) {
    return Report(s, "campaign");
  }
  std::unique_ptr<cf_campaign, CampaignDeleter> campaign(c);

  active_campaign = campaign.get();
  auto previous = std::signal(SIGINT, OnInterrupt);
  cf_campaign_stats stats{};
  const cf_status status =
      cf_campaign_run(campaign.get(), PrintProgress, nullptr, &stats);
  std::signal(SIGINT, previous);
  active_campaign = nullptr;
  if (status != CF_OK && status != CF_ERR_INTERRUPTED) {
    return Report(status, "fuzz");
  }
  PrintProgress(&stats, nullptr);

  for (size_t i = 0; i < cf_campaign_crash_count(campaign.get()); ++i) {
    char* key = nullptr;
    if (cf_campaign_crash_key(campaign.get(), i, &key) == CF_OK) {
      std::cout << key << "\n";
      cf_string_free(key);
    }
  }
  return kExitOk;
}

// --- validate --------------------------------------------------------------

struct ValidateArgs {
  std::string config;
  std::string target = kDefaultTarget;
  uint32_t timeout_ms = 10000;
};

int Validate(const ValidateArgs& args) {
  std::string text;
  if (!ReadFile(args.config, &text)) {
    std::cerr << "conffuzz: cannot read " << args.config << "\n";
    return kExitUsage;
  }
  cf_target* t = nullptr;
  if (cf_status s = cf_target_create(args.target.c_str(), args.timeout_ms, &t)) {
    return Report(s, args.target);
  }
  std::unique_ptr<cf_target, TargetDeleter> target(t);
  cf_exec_result result{};
  if (cf_status s =
          cf_target_execute(target.get(), text.data(), text.size(), &result)) {
    return Report(s, "execute");
  }
  static constexpr const char* kNames[] = {"ok", "reject", "crash", "timeout"};
  std::cout << kNames[result.outcome] << " " << result.code;
  if (result.dedup_key != nullptr) std::cout << " " << result.dedup_key;
  std::cout << "\n";
  if (result.stderr_excerpt != nullptr && *result.stderr_excerpt != '\0') {
    std::cerr << result.stderr_excerpt;
    if (std::string_view(result.stderr_excerpt).back() != '\n') std::cerr << "\n";
  }
  const cf_outcome_class outcome = result.outcome;
  cf_exec_result_clear(&result);
  switch (outcome) {
    case CF_OUTCOME_OK:
      return kExitOk;
    case CF_OUTCOME_REJECT:
      return kExitReject;
    default:
      return kExitCrash;
  }
}

// --- minimize --------------------------------------------------------------

struct MinimizeArgs {
  std::string grammar;
  std::string target = kDefaultTarget;
  std::string input;
  std::string out;
  uint32_t timeout_ms = 10000;
};

int Minimize(const MinimizeArgs& args) {
  std::string text;
  if (!ReadFile(args.input, &text)) {
    std::cerr << "conffuzz: cannot read " << args.input << "\n";
    return kExitUsage;
  }
  cf_grammar* g = nullptr;
  if (cf_status s = cf_grammar_load(args.grammar.c_str(), 0, &g)) {
    return Report(s, args.grammar);
  }
  std::unique_ptr<cf_grammar, GrammarDeleter> grammar(g);
  cf_target* t = nullptr;
  if (cf_status s = cf_target_create(args.target.c_str(), args.timeout_ms, &t)) {
    return Report(s, args.target);
  }
  std::unique_ptr<cf_target, TargetDeleter> target(t);

  cf_minimize_result result{};
  if (cf_status s = cf_minimize_text(grammar.get(), target.get(), text.c_str(),
                                     &result)) {
    return Report(s, "minimize");
  }
  const bool ok = args.out.empty() ? (std::cout << result.text, true)
                                   : WriteFile(args.out, result.text);
  std::cerr << "dedup_key=" << result.dedup_key
            << " tree_size=" << result.tree_size
            << " minimized_tree_size=" << result.minimized_tree_size
            << " executions=" << result.executions << "\n";
  cf_minimize_result_clear(&result);
  if (!ok) {
    std::cerr << "conffuzz: cannot write " << args.out << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

// --- triage ----------------------------------------------------------------

struct TriageArgs {
  std::vector<std::string> crashes;
  std::vector<std::string> inputs;
  std::string baseline;
  std::vector<std::string> watch;
  std::string format = "text";
};

int Triage(const TriageArgs& args) {
  if (args.crashes.empty() && args.inputs.empty()) {
    std::cerr << "conffuzz: triage needs --crashes or --input\n";
    return kExitUsage;
  }
  cf_triage* raw = nullptr;
  if (cf_status s = cf_triage_create(
          args.baseline.empty() ? nullptr : args.baseline.c_str(), &raw)) {
    return Report(s, "baseline");
  }
  std::unique_ptr<cf_triage, TriageDeleter> triage(raw);
  if (!args.watch.empty()) {
    std::vector<const char*> paths;
    for (const std::string& p : args.watch) paths.push_back(p.c_str());
    if (cf_status s =
            cf_triage_set_watch(triage.get(), paths.data(), paths.size())) {
      return Report(s, "--watch");
    }
  }
  for (const std::string& dir : args.crashes) {
    if (cf_status s = cf_triage_add_crash_dir(triage.get(), dir.c_str())) {
      return Report(s, dir);
    }
  }
  for (const std::string& input : args.inputs) {
    if (cf_status s =
            cf_triage_add_input(triage.get(), input.c_str(), nullptr)) {
      return Report(s, input);
    }
  }
  char* text = nullptr;
  if (cf_status s = cf_triage_render(
          triage.get(),
          args.format == "json" ? CF_REPORT_JSON : CF_REPORT_TEXT, &text)) {
    return Report(s, "render");
  }
  std::cout << text;
  cf_string_free(text);
  return kExitOk;
}

// --- explain ---------------------------------------------------------------

struct ExplainArgs {
  std::string input;
  std::string src;
  std::string backend;
  std::string out;
};

int Explain(const ExplainArgs& args) {
  char* report = nullptr;
  int partial = 0;
  const cf_status status =
      cf_explain(args.input.c_str(), args.src.c_str(), args.backend.c_str(),
                 &report, &partial);
  if (report == nullptr) return Report(status, "explain");
  OwnedString owned(report);
  if (args.out.empty()) {
    std::cout << report;
  } else if (!WriteFile(args.out, report)) {
    std::cerr << "conffuzz: cannot write " << args.out << "\n";
    return kExitUsage;
  }
  if (status != CF_OK) return Report(status, "explain (partial report written)");
  return kExitOk;
}

// --- make-fixtures ---------------------------------------------------------

int MakeFixtures(const std::string& out) {
  if (cf_status s = cf_write_table1_fixtures(out.c_str())) {
    return Report(s, out);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grammar-based configuration fuzzer for 5G gNB software"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cf_version());

  GrammarCheckArgs check;
  auto* check_cmd =
      app.add_subcommand("grammar-check", "Load and validate a grammar");
  check_cmd->add_option("--grammar,grammar", check.grammar, "Grammar JSON")
      ->required();
  check_cmd->add_flag("--strict", check.strict,
                      "Treat undefined <token> references as errors");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate configurations");
  gen_cmd->add_option("--grammar", gen.grammar)->required();
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--count", gen.count);
  gen_cmd->add_option("--out", gen.out, "Output directory");
  gen_cmd->add_option("--max-depth", gen.max_depth);

  FuzzArgs fuzz;
  auto* fuzz_cmd = app.add_subcommand("fuzz", "Run a fuzzing campaign");
  fuzz_cmd->add_option("--grammar", fuzz.grammar)->required();
  fuzz_cmd->add_option("--target", fuzz.target,
                       "builtin:<name> or exec:<command with {input}>");
  fuzz_cmd->add_option("--seed", fuzz.seed);
  fuzz_cmd->add_option("--workers", fuzz.workers)->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--max-execs", fuzz.max_execs)
      ->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--timeout-ms", fuzz.timeout_ms);
  fuzz_cmd->add_option("--out", fuzz.out, "Output directory");
  fuzz_cmd->add_option("--energy", fuzz.energy, "Mutations per corpus entry")
      ->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--max-depth", fuzz.max_depth);
  fuzz_cmd->add_option("--weights", fuzz.weights,
                       "regenerate, rule-swap, splice, scalar")
      ->expected(4)
      ->delimiter(',');
  fuzz_cmd->add_option("--baseline", fuzz.baseline,
                       "Configuration crash diffs are taken against");
  fuzz_cmd->add_flag("--no-minimize", fuzz.no_minimize);

  ValidateArgs validate;
  auto* validate_cmd =
      app.add_subcommand("validate", "Run one configuration through a target");
  validate_cmd->add_option("config", validate.config)->required();
  validate_cmd->add_option("--target", validate.target);
  validate_cmd->add_option("--timeout-ms", validate.timeout_ms);

  MinimizeArgs minimize;
  auto* minimize_cmd =
      app.add_subcommand("minimize", "Shrink a crashing configuration");
  minimize_cmd->add_option("--grammar", minimize.grammar)->required();
  minimize_cmd->add_option("--target", minimize.target);
  minimize_cmd->add_option("--input", minimize.input)->required();
  minimize_cmd->add_option("--out", minimize.out);
  minimize_cmd->add_option("--timeout-ms", minimize.timeout_ms);

  TriageArgs triage;
  auto* triage_cmd =
      app.add_subcommand("triage", "Tabulate watched parameters of crashes");
  triage_cmd->add_option("--crashes", triage.crashes, "Crash store directory");
  triage_cmd->add_option("--input", triage.inputs, "Crashing configuration");
  triage_cmd->add_option("--baseline", triage.baseline);
  triage_cmd->add_option("--watch", triage.watch, "Parameter path, e.g. a.b[0].c");
  triage_cmd->add_option("--format", triage.format)
      ->check(CLI::IsMember({"text", "json"}));

  ExplainArgs explain;
  auto* explain_cmd =
      app.add_subcommand("explain", "Document parameters seen in a test log");
  explain_cmd->add_option("--input", explain.input, "Test log")->required();
  explain_cmd->add_option("--src", explain.src, "Source tree")->required();
  explain_cmd->add_option("--backend", explain.backend,
                          "glossary:<file> or http:<url>")
      ->required();
  explain_cmd->add_option("--out", explain.out);

  std::string fixtures_out = "fixtures/table1";
  auto* fixtures_cmd = app.add_subcommand(
      "make-fixtures", "Write the initial and case configurations");
  fixtures_cmd->add_option("--out", fixtures_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*check_cmd) return GrammarCheck(check);
  if (*gen_cmd) return Gen(gen);
  if (*fuzz_cmd) return Fuzz(fuzz);
  if (*validate_cmd) return Validate(validate);
  if (*minimize_cmd) return Minimize(minimize);
  if (*triage_cmd) return Triage(triage);
  if (*explain_cmd) return Explain(explain);
  if (*fixtures_cmd) return MakeFixtures(fixtures_out);
  return kExitUsage;
}
