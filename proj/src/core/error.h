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

#ifndef CONFFUZZ_CORE_ERROR_H_
#define CONFFUZZ_CORE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace conffuzz {

// Every failure the core can report. The numeric values are part of the C
// API (see include/conffuzz/conffuzz.h) and must not be reordered.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kIoError = 2,
  kMalformedJson = 3,
  kBadTokenName = 4,
  kUndefinedTokenRef = 5,
  kNoFiniteDerivation = 6,
  kMissingStart = 7,
  kDepthInfeasible = 8,
  kInvalidTree = 9,
  kAllZeroWeights = 10,
  kSyntaxError = 11,
  kDuplicateName = 12,
  kPathNotFound = 13,
  kNotAScalar = 14,
  kSpawnFailure = 15,
  kEmptyCorpus = 16,
  kNotACrash = 17,
  kNonReproducible = 18,
  kMalformedTestLine = 19,
  kBackendError = 20,
  kInterrupted = 21,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace conffuzz

#endif  // CONFFUZZ_CORE_ERROR_H_
