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

#include "core/error.h"

namespace conffuzz {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kMalformedJson: return "MalformedJson";
    case ErrorCode::kBadTokenName: return "BadTokenName";
    case ErrorCode::kUndefinedTokenRef: return "UndefinedTokenRef";
    case ErrorCode::kNoFiniteDerivation: return "NoFiniteDerivation";
    case ErrorCode::kMissingStart: return "MissingStart";
    case ErrorCode::kDepthInfeasible: return "DepthInfeasible";
    case ErrorCode::kInvalidTree: return "InvalidTree";
    case ErrorCode::kAllZeroWeights: return "AllZeroWeights";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kDuplicateName: return "DuplicateName";
    case ErrorCode::kPathNotFound: return "PathNotFound";
    case ErrorCode::kNotAScalar: return "NotAScalar";
    case ErrorCode::kSpawnFailure: return "SpawnFailure";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kNotACrash: return "NotACrash";
    case ErrorCode::kNonReproducible: return "NonReproducible";
    case ErrorCode::kMalformedTestLine: return "MalformedTestLine";
    case ErrorCode::kBackendError: return "BackendError";
    case ErrorCode::kInterrupted: return "Interrupted";
  }
  return "Unknown";
}

}  // namespace conffuzz
