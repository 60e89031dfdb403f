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

// The reference gNB configuration and the five known crash cases derived from
// it. The eight watched parameters and their values per column:
//
//   parameter                   Initial  Case1   Case2   Case3   Case4   Case5
//   do_CSIRS                    1        0       0       0       0       1
//   do_SRS                      1        0       0       0       1       1
//   controlResourceSetZero      12       9       3       9       6       12
//   searchSpaceZero             0        9       8       9       8       0
//   absoluteFrequencySSB        641280   433096  641272  642016  623232  641280
//   dl_frequencyBand            78       78      78      41      78      257
//   dl_absoluteFrequencyPointA  640008   640008  43000   43000   43000   640008
//   dl_carrierBandwidth         106      106     25      25      24      106

#ifndef CONFFUZZ_CORE_TABLE1_H_
#define CONFFUZZ_CORE_TABLE1_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "core/config.h"

namespace conffuzz::table1 {

inline constexpr size_t kWatchCount = 8;

// The reference configuration in canonical serialized form.
std::string_view InitialText();
ConfigDocument InitialDocument();

// The eight watched parameter paths, in the row order above.
const std::vector<ParamPath>& WatchPaths();

struct Column {
  std::string name;  // "initial", "case1" ... "case5"
  std::array<int64_t, kWatchCount> values;
};

// Initial followed by case1..case5.
const std::vector<Column>& Columns();

// Builds column `index` of Columns() by applying its values to the initial
// document with SetParam.
ConfigDocument ColumnDocument(size_t index);

}  // namespace conffuzz::table1

#endif  // CONFFUZZ_CORE_TABLE1_H_
