// Copyright 2026 The tocomm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TOCOMM_TESTS_SUPPORT_TABLE_FIXTURE_H_
#define TOCOMM_TESTS_SUPPORT_TABLE_FIXTURE_H_

// Reference rounds-to-threshold tables (AWGN and Rayleigh, SNR 0/10/20 dB,
// losses 4/3/2/1, 7000-round budget) with their best ('b') and second-best
// ('u') markings.

#include <array>
#include <string>
#include <vector>

#include "tocomm/report.h"

namespace tocomm::testing {

struct ReferenceTable {
  channel::Kind kind;
  std::array<std::array<std::size_t, 12>, 4> rounds;
  std::array<const char*, 4> marks;
};

inline const std::array<std::string, 4>& reference_rows() {
  static const std::array<std::string, 4> rows = {"SSL-FT", "Sup", "SSL-FT(60%)", "Sup(60%)"};
  return rows;
}

inline ReferenceTable reference_awgn() {
  return {channel::Kind::kAwgn,
          {{{560, 882, 1512, 3507, 441, 679, 1099, 2100, 413, 637, 1015, 1890},
            {840, 1344, 2408, 6230, 686, 1106, 1897, 4291, 588, 973, 1708, 3801},
            {980, 1547, 2618, 5957, 770, 1169, 1855, 3514, 721, 1113, 1750, 3213},
            {1526, 2373, 4144, 7000, 1162, 1890, 3213, 6762, 1029, 1701, 2919, 6055}}},
          {"bbbbbbbbbbbb", "uuu.uu..uuu.", "...u..uu...u", "............"}};
}

inline ReferenceTable reference_rayleigh() {
  return {channel::Kind::kRayleigh,
          {{{658, 1022, 1729, 4361, 504, 777, 1253, 2590, 483, 749, 1218, 2415},
            {924, 1470, 2695, 7000, 742, 1190, 2086, 5068, 672, 1120, 2002, 4816},
            {1127, 1750, 2961, 7000, 854, 1323, 2121, 4235, 868, 1330, 2107, 4095},
            {1589, 2527, 4578, 7000, 1260, 2023, 3472, 7000, 1260, 2016, 3395, 7000}}},
          {"bbbbbbbbbbbb", "uuu.uuu.uuu.", ".......u...u", "............"}};
}

inline report::ReportTable build_reference(const ReferenceTable& t) {
  std::vector<report::Column> cols;
  for (double snr : {0.0, 10.0, 20.0})
    for (double loss : {4.0, 3.0, 2.0, 1.0}) cols.push_back({t.kind, snr, loss});
  std::vector<std::vector<std::optional<std::size_t>>> cells;
  for (const auto& row : t.rounds) cells.emplace_back(row.begin(), row.end());
  const auto& names = reference_rows();
  return report::make_table({names.begin(), names.end()}, cols, cells, 7000);
}

// Empty string when the computed markers equal the reference ones.
inline std::string compare_marks(const report::ReportTable& table, const ReferenceTable& t) {
  std::string diff;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 12; ++c) {
      const char want = t.marks[r][c];
      const report::Mark got = table.marks[r][c];
      const char have = got == report::Mark::kBest ? 'b' : got == report::Mark::kSecond ? 'u' : '.';
      if (want != have) {
        diff += reference_rows()[r] + " column " + std::to_string(c) + ": expected " + want +
                " got " + have + "\n";
      }
    }
  return diff;
}

}  // namespace tocomm::testing

#endif  // TOCOMM_TESTS_SUPPORT_TABLE_FIXTURE_H_
