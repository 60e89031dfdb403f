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

// Standalone gNB validator for use as an external target:
//
//   conffuzz fuzz --target 'exec:gnb-validator {input}' ...
//
// Emits one `##branch:<id>` line per executed check on stderr, exits 0 on
// acceptance and 2 on rejection, and aborts on an injected crash.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "conffuzz/conffuzz.h"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gnb-validator <config>\n";
    return 1;
  }
  std::ifstream in(argv[1], std::ios::binary);
  if (!in) {
    std::cerr << "gnb-validator: cannot read " << argv[1] << "\n";
    return 1;
  }
  std::ostringstream text;
  text << in.rdbuf();
  const std::string input = text.str();

  cf_exec_result result{};
  if (cf_validate_gnb_text(input.data(), input.size(), &result) != CF_OK) {
    std::cerr << "gnb-validator: " << cf_last_error() << "\n";
    return 1;
  }
  std::istringstream branches(result.branches);
  for (std::string line; std::getline(branches, line);) {
    std::cerr << "##branch:" << line << "\n";
  }
  if (*result.stderr_excerpt != '\0') {
    std::cerr << result.stderr_excerpt << "\n";
  }
  std::cerr.flush();
  const cf_outcome_class outcome = result.outcome;
  const int code = result.code;
  cf_exec_result_clear(&result);
  switch (outcome) {
    case CF_OUTCOME_OK:
      return 0;
    case CF_OUTCOME_CRASH:
      std::fprintf(stderr, "gnb-validator: crash id %d\n", code);
      std::abort();
    default:
      return code;
  }
}
