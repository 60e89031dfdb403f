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

#include "core/table1.h"

namespace conffuzz::table1 {
namespace {

constexpr std::string_view kInitialText =
    R"(Active_gNBs = (
  "gNB-OAI"
);
Asn1_verbosity = "none";
gNBs = (
  {
    gNB_ID = 3584;
    gNB_name = "gNB-OAI";
    tracking_area_code = 1;
    plmn_list = (
      {
        mcc = 208;
        mnc = 99;
        mnc_length = 2;
      }
    );
    nr_cellid = 12345678;
    do_CSIRS = 1;
    do_SRS = 1;
    servingCellConfigCommon = (
      {
        physCellId = 0;
        absoluteFrequencySSB = 641280;
        dl_frequencyBand = 78;
        dl_absoluteFrequencyPointA = 640008;
        dl_offstToCarrier = 0;
        dl_subcarrierSpacing = 1;
        dl_carrierBandwidth = 106;
        initialDLBWPlocationAndBandwidth = 28875;
        initialDLBWPsubcarrierSpacing = 1;
        controlResourceSetZero = 12;
        searchSpaceZero = 0;
        ssPBCH_BlockPower = -25;
      }
    );
  }
);
)";

}  // namespace

std::string_view InitialText() { return kInitialText; }

ConfigDocument InitialDocument() { return ParseConfig(kInitialText); }

const std::vector<ParamPath>& WatchPaths() {
  static const std::vector<ParamPath> paths = [] {
    const ParamPath gnb = ParamPath().Child("gNBs").Index(0);
    const ParamPath cell = gnb.Child("servingCellConfigCommon").Index(0);
    return std::vector<ParamPath>{
        gnb.Child("do_CSIRS"),
        gnb.Child("do_SRS"),
        cell.Child("controlResourceSetZero"),
        cell.Child("searchSpaceZero"),
        cell.Child("absoluteFrequencySSB"),
        cell.Child("dl_frequencyBand"),
        cell.Child("dl_absoluteFrequencyPointA"),
        cell.Child("dl_carrierBandwidth"),
    };
  }();
  return paths;
}

const std::vector<Column>& Columns() {
  static const std::vector<Column> columns = {
      {"initial", {1, 1, 12, 0, 641280, 78, 640008, 106}},
      {"case1", {0, 0, 9, 9, 433096, 78, 640008, 106}},
      {"case2", {0, 0, 3, 8, 641272, 78, 43000, 25}},
      {"case3", {0, 0, 9, 9, 642016, 41, 43000, 25}},
      {"case4", {0, 1, 6, 8, 623232, 78, 43000, 24}},
      {"case5", {1, 1, 12, 0, 641280, 257, 640008, 106}},
  };
  return columns;
}

ConfigDocument ColumnDocument(size_t index) {
  const Column& column = Columns().at(index);
  ConfigDocument doc = InitialDocument();
  for (size_t row = 0; row < kWatchCount; ++row) {
    doc = SetParam(doc, WatchPaths()[row], Scalar::Int(column.values[row]));
  }
  return doc;
}

}  // namespace conffuzz::table1
