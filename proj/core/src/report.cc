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

#include "tocomm/report.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <regex>
#include <set>
#include <tuple>

#include "tocomm/errors.h"
#include "tocomm/io.h"

namespace tocomm::report {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what, line);
}

std::size_t parse_count(std::string_view s, std::size_t line, const char* column) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    fail(line, std::string("bad ") + column + " '" + std::string(s) + "'");
  }
  return v;
}

double parse_real(std::string_view s, std::size_t line, const char* column) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    fail(line, std::string("bad ") + column + " '" + std::string(s) + "'");
  }
  return v;
}

std::string fmt_snr(double snr) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", snr);
  return buf;
}

std::string channel_label(channel::Kind kind) {
  return kind == channel::Kind::kAwgn ? "AWGN" : "Rayleigh";
}

// Display width of UTF-8 text.
std::size_t width(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

std::string pad_left(const std::string& s, std::size_t w) {
  const std::size_t n = width(s);
  return n >= w ? s : std::string(w - n, ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t w) {
  const std::size_t n = width(s);
  return n >= w ? s : s + std::string(w - n, ' ');
}

std::string cell_text(const std::optional<std::size_t>& v, Mark m) {
  if (!v) return "—";
  const std::string s = std::to_string(*v);
  if (m == Mark::kBest) return "*" + s + "*";
  if (m == Mark::kSecond) return "_" + s + "_";
  return s;
}

using ChannelKey = std::pair<int, double>;

ChannelKey key_of(channel::Kind kind, double snr) { return {static_cast<int>(kind), snr}; }

std::vector<std::string> ordered_regimes(const std::vector<RunLog>& runs) {
  std::vector<std::string> names;
  for (const auto& r : train::standard_regimes()) {
    for (const auto& run : runs) {
      if (run.regime == r.name) {
        names.push_back(r.name);
        break;
      }
    }
  }
  for (const auto& run : runs) {
    if (std::find(names.begin(), names.end(), run.regime) == names.end()) {
      names.push_back(run.regime);
    }
  }
  return names;
}

}  // namespace

std::vector<train::RoundRecord> parse_csv(std::string_view text) {
  std::vector<train::RoundRecord> records;
  std::size_t line_no = 0, pos = 0;
  bool header = false;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    ++line_no;
    if (!header) {
      if (line != "round,stage,epoch,train_loss,test_accuracy") {
        fail(line_no, "expected header 'round,stage,epoch,train_loss,test_accuracy'");
      }
      header = true;
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 5) {
      fail(line_no, "expected 5 fields, got " + std::to_string(f.size()));
    }
    train::RoundRecord r;
    r.round = parse_count(f[0], line_no, "round");
    try {
      r.stage = train::parse_stage(f[1]);
    } catch (const Error&) {
      fail(line_no, "bad stage '" + std::string(f[1]) + "'");
    }
    r.epoch = parse_count(f[2], line_no, "epoch");
    r.train_loss = parse_real(f[3], line_no, "train_loss");
    if (!f[4].empty()) {
      const double acc = parse_real(f[4], line_no, "test_accuracy");
      if (acc < 0.0 || acc > 1.0) fail(line_no, "test_accuracy outside [0, 1]");
      r.test_accuracy = acc;
    }
    records.push_back(r);
  }
  if (!header) fail(1, "empty file");
  return records;
}

RunLog load_run(const std::filesystem::path& path) {
  static const std::regex kName(
      R"(^(sup|sup60|sslft|sslft60)_(awgn|rayleigh)_(-?[0-9.]+(?:e[-+]?[0-9]+)?)db_s([0-9]+)\.csv$)");
  const std::string name = path.filename().string();
  std::smatch m;
  if (!std::regex_match(name, m, kName)) {
    throw InputError("not a run log file name: " + path.string());
  }
  RunLog run;
  run.regime = train::parse_regime(m[1].str()).name;
  run.kind = channel::parse_kind(m[2].str());
  run.snr_db = std::stod(m[3].str());
  run.seed = std::stoull(m[4].str());
  try {
    run.records = parse_csv(io::read_text(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.offset());
  }
  return run;
}

std::vector<RunLog> load_runs(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && entry.path().extension() == ".csv" &&
        name.rfind("curves_", 0) != 0 && name.rfind("series_", 0) != 0 &&
        name.rfind("table", 0) != 0) {
      files.push_back(entry.path());
    }
  }
  if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());
  std::vector<RunLog> runs;
  for (const auto& f : files) runs.push_back(load_run(f));
  return runs;
}

void assign_marks(ReportTable& table) {
  table.marks.assign(table.rows.size(), std::vector<Mark>(table.columns.size(), Mark::kNone));
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    std::set<std::size_t> values;
    auto ranked = [&](const std::optional<std::size_t>& v) {
      return v && !(table.cap && *v >= *table.cap);
    };
    for (const auto& row : table.cells)
      if (ranked(row[c])) values.insert(*row[c]);
    if (values.empty()) continue;
    const std::size_t best = *values.begin();
    const bool has_second = values.size() > 1;
    const std::size_t second = has_second ? *std::next(values.begin()) : best;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& v = table.cells[r][c];
      if (!ranked(v)) continue;
      if (*v == best) {
        table.marks[r][c] = Mark::kBest;
      } else if (has_second && *v == second) {
        table.marks[r][c] = Mark::kSecond;
      }
    }
  }
}

ReportTable make_table(std::vector<std::string> rows, std::vector<Column> columns,
                       std::vector<std::vector<std::optional<std::size_t>>> cells,
                       std::optional<std::size_t> cap) {
  if (cells.size() != rows.size()) throw InputError("table: row count mismatch");
  for (const auto& row : cells) {
    if (row.size() != columns.size()) throw InputError("table: column count mismatch");
  }
  ReportTable t{std::move(rows), std::move(columns), std::move(cells), {}, cap};
  assign_marks(t);
  return t;
}

ReportTable render_table(const std::vector<RunLog>& runs,
                         const std::vector<double>& thresholds) {
  if (thresholds.empty()) throw ConfigError("no thresholds", "experiment.thresholds");
  std::set<ChannelKey> channels;
  for (const auto& run : runs) channels.insert(key_of(run.kind, run.snr_db));

  std::vector<Column> columns;
  for (const auto& [kind, snr] : channels)
    for (double t : thresholds) columns.push_back({static_cast<channel::Kind>(kind), snr, t});

  const auto rows = ordered_regimes(runs);
  std::vector<std::vector<std::optional<std::size_t>>> cells(
      rows.size(), std::vector<std::optional<std::size_t>>(columns.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::size_t c0 = 0;
    for (const auto& ch : channels) {
      std::vector<std::vector<std::optional<std::size_t>>> per_seed;
      for (const auto& run : runs) {
        if (run.regime == rows[r] && key_of(run.kind, run.snr_db) == ch) {
          per_seed.push_back(train::rounds_to_threshold(run.records, thresholds));
        }
      }
      for (std::size_t t = 0; t < thresholds.size(); ++t) {
        if (per_seed.empty()) continue;
        double total = 0.0;
        bool all = true;
        for (const auto& s : per_seed) {
          if (!s[t]) {
            all = false;
            break;
          }
          total += static_cast<double>(*s[t]);
        }
        if (all) {
          cells[r][c0 + t] = static_cast<std::size_t>(
              std::llround(total / static_cast<double>(per_seed.size())));
        }
      }
      c0 += thresholds.size();
    }
  }
  return make_table(rows, std::move(columns), std::move(cells));
}

std::string to_text(const ReportTable& table) {
  std::string out;
  std::size_t name_w = 6;
  for (const auto& r : table.rows) name_w = std::max(name_w, width(r));

  std::size_t c = 0;
  while (c < table.columns.size()) {
    const auto kind = table.columns[c].kind;
    std::size_t end = c;
    while (end < table.columns.size() && table.columns[end].kind == kind) ++end;

    std::vector<std::string> snr_h, thr_h;
    std::vector<std::vector<std::string>> body(table.rows.size());
    std::vector<std::size_t> col_w;
    for (std::size_t j = c; j < end; ++j) {
      snr_h.push_back(fmt_snr(table.columns[j].snr_db) + " dB");
      thr_h.push_back(fmt_snr(table.columns[j].threshold));
      std::size_t w = std::max(width(snr_h.back()), width(thr_h.back()));
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        body[r].push_back(cell_text(table.cells[r][j], table.marks[r][j]));
        w = std::max(w, width(body[r].back()));
      }
      col_w.push_back(w);
    }
    out += channel_label(kind) + "\n";
    std::string l1 = pad_right("SNR", name_w), l2 = pad_right("loss", name_w);
    for (std::size_t k = 0; k < col_w.size(); ++k) {
      const bool same = k > 0 && snr_h[k] == snr_h[k - 1];
      l1 += "  " + pad_left(same ? "" : snr_h[k], col_w[k]);
      l2 += "  " + pad_left(thr_h[k], col_w[k]);
    }
    out += l1 + "\n" + l2 + "\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      std::string line = pad_right(table.rows[r], name_w);
      for (std::size_t k = 0; k < col_w.size(); ++k) line += "  " + pad_left(body[r][k], col_w[k]);
      out += line + "\n";
    }
    c = end;
    if (c < table.columns.size()) out += "\n";
  }
  return out;
}

std::string to_csv(const ReportTable& table) {
  std::string out = "channel,snr_db,threshold,regime,rounds,mark\n";
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    const auto& col = table.columns[j];
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& v = table.cells[r][j];
      const Mark m = table.marks[r][j];
      out += std::string(channel::to_string(col.kind)) + "," + fmt_snr(col.snr_db) + "," +
             fmt_snr(col.threshold) + "," + table.rows[r] + "," +
             (v ? std::to_string(*v) : std::string()) + "," +
             (m == Mark::kBest ? "best" : m == Mark::kSecond ? "second" : "") + "\n";
    }
  }
  return out;
}

std::vector<std::pair<std::size_t, double>> accuracy_series(const RunLog& run) {
  std::vector<std::pair<std::size_t, double>> series;
  for (const auto& r : run.records) {
    if (r.stage == train::Stage::kFinetune && r.test_accuracy) {
      series.emplace_back(r.round, *r.test_accuracy);
    }
  }
  return series;
}

std::vector<std::filesystem::path> emit_curves(const std::vector<RunLog>& runs,
                                               const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  char buf[64];
  for (const auto& run : runs) {
    std::string text = "round,test_accuracy\n";
    for (const auto& [round, acc] : accuracy_series(run)) {
      std::snprintf(buf, sizeof buf, "%zu,%.6f\n", round, acc);
      text += buf;
    }
    const auto path = out_dir / ("series_" + train::regime_slug(train::parse_regime(run.regime)) +
                                 "_" + std::string(channel::to_string(run.kind)) + "_" +
                                 fmt_snr(run.snr_db) + "db_s" + std::to_string(run.seed) +
                                 ".csv");
    io::write_file_atomic(path, text);
    written.push_back(path);
  }

  std::set<ChannelKey> channels;
  for (const auto& run : runs) channels.insert(key_of(run.kind, run.snr_db));
  const auto regimes = ordered_regimes(runs);
  for (const auto& ch : channels) {
    // round -> per regime (sum, count)
    std::map<std::size_t, std::vector<std::pair<double, std::size_t>>> grid;
    for (const auto& run : runs) {
      if (key_of(run.kind, run.snr_db) != ch) continue;
      const std::size_t col =
          std::find(regimes.begin(), regimes.end(), run.regime) - regimes.begin();
      for (const auto& [round, acc] : accuracy_series(run)) {
        auto& row = grid[round];
        row.resize(regimes.size());
        row[col].first += acc;
        ++row[col].second;
      }
    }
    std::string text = "round";
    for (const auto& r : regimes) text += "," + r;
    text += "\n";
    for (const auto& [round, row] : grid) {
      text += std::to_string(round);
      for (const auto& [sum, n] : row) {
        text += ",";
        if (n > 0) {
          std::snprintf(buf, sizeof buf, "%.6f", sum / static_cast<double>(n));
          text += buf;
        }
      }
      text += "\n";
    }
    const auto path = out_dir / ("curves_" +
                                 std::string(channel::to_string(static_cast<channel::Kind>(ch.first))) +
                                 "_" + fmt_snr(ch.second) + "db.csv");
    io::write_file_atomic(path, text);
    written.push_back(path);
  }
  return written;
}

}  // namespace tocomm::report
