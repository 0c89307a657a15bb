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

#ifndef TOCOMM_REPORT_H_
#define TOCOMM_REPORT_H_

// Rounds-to-threshold tables and accuracy curves from run CSVs.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tocomm/channel.h"
#include "tocomm/trainer.h"

namespace tocomm::report {

// One run log with the identity recovered from its file name.
struct RunLog {
  std::string regime;  // display name, e.g. "SSL-FT(60%)"
  channel::Kind kind = channel::Kind::kAwgn;
  double snr_db = 0.0;
  std::uint64_t seed = 0;
  std::vector<train::RoundRecord> records;
};

// Parses CSV text. Errors carry the 1-based line number in the message and
// as offset().
std::vector<train::RoundRecord> parse_csv(std::string_view text);

// Reads a run CSV whose name follows exp::run_file_name.
RunLog load_run(const std::filesystem::path& path);

// Every run CSV in a directory, sorted by file name.
std::vector<RunLog> load_runs(const std::filesystem::path& dir);

enum class Mark { kNone, kBest, kSecond };

struct Column {
  channel::Kind kind = channel::Kind::kAwgn;
  double snr_db = 0.0;
  double threshold = 0.0;
};

struct ReportTable {
  std::vector<std::string> rows;
  std::vector<Column> columns;
  // cells[row][col]; nullopt renders as "—".
  std::vector<std::vector<std::optional<std::size_t>>> cells;
  std::vector<std::vector<Mark>> marks;
  // Round budget: a cell at or above it means the run hit the cap without
  // reaching the threshold. Shown as is, never ranked.
  std::optional<std::size_t> cap;
};

// Per column: best on the minimum, second on the next distinct value, ties
// share a marker, unreached and capped cells are not ranked.
void assign_marks(ReportTable& table);

// Builds a table from explicit cell values (rows x columns) and marks it.
ReportTable make_table(std::vector<std::string> rows, std::vector<Column> columns,
                       std::vector<std::vector<std::optional<std::size_t>>> cells,
                       std::optional<std::size_t> cap = std::nullopt);

// Rounds to each threshold per (regime, channel). With several seeds the
// cell is the rounded mean over seeds, and "—" if any seed missed the
// threshold. Rows follow the order regimes first appear in the standard
// list, columns are sorted by channel kind, then SNR, then the given
// threshold order.
ReportTable render_table(const std::vector<RunLog>& runs,
                         const std::vector<double>& thresholds);

// Plain text, one block per channel kind, markers as *best* and _second_.
std::string to_text(const ReportTable& table);

// Long format: channel,snr_db,threshold,regime,rounds,mark
std::string to_csv(const ReportTable& table);

// Writes one merged file per (kind, snr) with columns round + one accuracy
// column per regime (mean over seeds), plus one series file per run.
// Returns the written paths.
std::vector<std::filesystem::path> emit_curves(const std::vector<RunLog>& runs,
                                               const std::filesystem::path& out_dir);

// (round, accuracy) evaluation points of a run.
std::vector<std::pair<std::size_t, double>> accuracy_series(const RunLog& run);

}  // namespace tocomm::report

#endif  // TOCOMM_REPORT_H_
