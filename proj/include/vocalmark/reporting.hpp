// Copyright 2026 The vocalmark Authors.
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


// Normative summary tables: median and quartiles per feature, level and
// group, emitted as CSV, JSON or a markdown table.

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "vocalmark/csv.hpp"
#include "vocalmark/error.hpp"
#include "vocalmark/features.hpp"
#include "vocalmark/format.hpp"
#include "vocalmark/records.hpp"
#include "vocalmark/stats.hpp"

namespace vocalmark {

struct Cell {
  std::size_t n = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;

  bool operator==(const Cell&) const = default;
};

struct NormativeRow {
  Feature feature;
  Level level;
  std::map<std::string, Cell> cells;  // by group

  bool operator==(const NormativeRow&) const = default;
};

struct NormativeTable {
  std::vector<std::string> groups;
  std::vector<NormativeRow> rows;  // feature order, then S before a

  bool operator==(const NormativeTable&) const = default;
};

inline Cell summarize_values(std::vector<double> v) {
  if (v.empty()) fail(Errc::kEmptyGroup, "no values to summarize");
  std::sort(v.begin(), v.end());
  return {v.size(), stats::quantile_sorted(v, 0.5), stats::quantile_sorted(v, 0.25), stats::quantile_sorted(v, 0.75)};
}

// Groups records by `group_column` (all records form one group "all" when it
// is empty). Every group in `required_groups` must receive a record.
inline NormativeTable summarize_features(const std::vector<FeatureRecord>& records,
                                         const std::string& group_column = {},
                                         const std::vector<std::string>& required_groups = {}) {
  std::map<std::string, std::vector<const FeatureRecord*>> groups;
  for (const auto& g : required_groups) groups[g];
  for (const auto& r : records) {
    std::string key = "all";
    if (!group_column.empty()) {
      const auto v = r.column(group_column);
      if (!v) fail(Errc::kBadConfig, "record '" + r.recording + "' has no column '" + group_column + "'");
      key = *v;
    }
    groups[key].push_back(&r);
  }
  NormativeTable t;
  for (const auto& [g, members] : groups) {
    if (members.empty()) fail(Errc::kEmptyGroup, "group '" + g + "' has no records");
    t.groups.push_back(g);
  }
  for (auto f : kAllFeatures)
    for (auto level : {Level::kSuprasegmental, Level::kVowel}) {
      NormativeRow row{f, level, {}};
      for (const auto& [g, members] : groups) {
        std::vector<double> v;
        for (const auto* r : members)
          if (r->level == level && r->features[f]) v.push_back(*r->features[f]);
        if (!v.empty()) row.cells[g] = summarize_values(std::move(v));
      }
      if (!row.cells.empty()) t.rows.push_back(std::move(row));
    }
  return t;
}

// ----------------------------------------------------------------- display

struct FeatureDisplay {
  const char* label;
  int decimals;
  double scale;  // displayed value = value * scale
};

inline FeatureDisplay display(Feature f) {
  switch (f) {
    case Feature::kDuration: return {"Duration, s", 0, 1.0};
    case Feature::kSpeakingRate: return {"Speaking rate, syllables/s", 2, 1.0};
    case Feature::kArticulationRate: return {"Articulation rate, syllables/s", 2, 1.0};
    case Feature::kPauseRate: return {"Pause rate, 1/s", 3, 1.0};
    case Feature::kIntensityMean: return {"Intensity, dB", 1, 1.0};
    case Feature::kPitchMean: return {"Pitch (mean), Hz", 0, 1.0};
    case Feature::kPitchSd: return {"Pitch (SD), semitones", 2, 1.0};
    case Feature::kHnrMean: return {"Harmonics-to-noise ratio, dB", 2, 1.0};
    case Feature::kSpectralSlope: return {"Spectral slope, dB/octave", 1, 1.0};
    case Feature::kCppMean: return {"Cepstral peak prominence, dB", 2, 1.0};
    case Feature::kF1Mean: return {"First formant, Hz", 0, 1.0};
    case Feature::kF2Mean: return {"Second formant, kHz", 2, 1e-3};
    case Feature::kSpectralGravity: return {"Spectral gravity, Hz", 0, 1.0};
    case Feature::kSpectralDeviation: return {"Spectral deviation, Hz", 0, 1.0};
  }
  return {"?", 2, 1.0};
}

// "m (q1, q3)" at the feature's display precision.
inline std::string format_cell(Feature f, const Cell& c) {
  const auto d = display(f);
  return format_fixed(c.median * d.scale, d.decimals) + " (" + format_fixed(c.q1 * d.scale, d.decimals) + ", " +
         format_fixed(c.q3 * d.scale, d.decimals) + ")";
}

inline std::string table_to_markdown(const NormativeTable& t) {
  std::string out = "| Feature | L |";
  std::string rule = "|---|---|";
  for (const auto& g : t.groups) {
    std::size_t n = 0;
    for (const auto& r : t.rows)
      if (const auto it = r.cells.find(g); it != r.cells.end()) n = std::max(n, it->second.n);
    out += " " + g + " (n = " + std::to_string(n) + ") |";
    rule += "---|";
  }
  out += "\n" + rule + "\n";
  for (const auto& r : t.rows) {
    out += "| " + std::string(display(r.feature).label) + " | " + to_string(r.level) + " |";
    for (const auto& g : t.groups) {
      const auto it = r.cells.find(g);
      out += " " + (it == r.cells.end() ? std::string("-") : format_cell(r.feature, it->second)) + " |";
    }
    out += "\n";
  }
  return out;
}

inline std::string table_to_csv(const NormativeTable& t) {
  std::vector<csv::Row> rows{{"feature", "level", "group", "n", "median", "q1", "q3"}};
  for (const auto& r : t.rows)
    for (const auto& g : t.groups)
      if (const auto it = r.cells.find(g); it != r.cells.end())
        rows.push_back({std::string(name(r.feature)), to_string(r.level), g, std::to_string(it->second.n),
                        format_shortest(it->second.median), format_shortest(it->second.q1),
                        format_shortest(it->second.q3)});
  return csv::write(rows);
}

inline NormativeTable table_from_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  NormativeTable t;
  if (rows.empty()) return t;
  const csv::Row expected{"feature", "level", "group", "n", "median", "q1", "q3"};
  if (rows.front() != expected) fail(Errc::kInvalidArgument, "not a summary table CSV");
  std::set<std::string> groups;
  std::map<std::pair<int, int>, NormativeRow> by_key;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != expected.size()) fail(Errc::kInvalidArgument, "summary CSV row has the wrong width");
    const auto f = feature_from_name(row[0]);
    if (!f) fail(Errc::kInvalidArgument, "unknown feature '" + row[0] + "'");
    const auto level = level_from_string(row[1]);
    auto& r = by_key.try_emplace({static_cast<int>(*f), static_cast<int>(level)}, NormativeRow{*f, level, {}}).first->second;
    r.cells[row[2]] = {static_cast<std::size_t>(parse_double(row[3])), parse_double(row[4]), parse_double(row[5]),
                       parse_double(row[6])};
    groups.insert(row[2]);
  }
  t.groups.assign(groups.begin(), groups.end());
  for (auto& [k, r] : by_key) t.rows.push_back(std::move(r));
  return t;
}

inline nlohmann::json to_json(const NormativeTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json cells = nlohmann::json::object();
    for (const auto& [g, c] : r.cells) cells[g] = {{"n", c.n}, {"median", c.median}, {"q1", c.q1}, {"q3", c.q3}};
    rows.push_back({{"feature", std::string(name(r.feature))}, {"level", to_string(r.level)}, {"cells", cells}});
  }
  return {{"groups", t.groups}, {"rows", rows}};
}

inline NormativeTable table_from_json(const nlohmann::json& j) {
  NormativeTable t;
  try {
    t.groups = j.at("groups").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
      const auto f = feature_from_name(r.at("feature").get<std::string>());
      if (!f) fail(Errc::kInvalidArgument, "unknown feature in summary JSON");
      NormativeRow row{*f, level_from_string(r.at("level").get<std::string>()), {}};
      for (const auto& [g, c] : r.at("cells").items())
        row.cells[g] = {c.at("n").get<std::size_t>(), c.at("median").get<double>(), c.at("q1").get<double>(),
                        c.at("q3").get<double>()};
      t.rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::kInvalidArgument, std::string("summary JSON: ") + e.what());
  }
  return t;
}

enum class TableFormat { kCsv, kJson, kMarkdown };

inline TableFormat table_format_from_string(std::string_view s) {
  if (s == "csv") return TableFormat::kCsv;
  if (s == "json") return TableFormat::kJson;
  if (s == "markdown" || s == "md") return TableFormat::kMarkdown;
  fail(Errc::kBadConfig, "unknown table format '" + std::string(s) + "'");
}

inline std::string emit_table(const NormativeTable& t, TableFormat format) {
  switch (format) {
    case TableFormat::kCsv: return table_to_csv(t);
    case TableFormat::kJson: return to_json(t).dump(2) + "\n";
    case TableFormat::kMarkdown: return table_to_markdown(t);
  }
  return {};
}

}  // namespace vocalmark
