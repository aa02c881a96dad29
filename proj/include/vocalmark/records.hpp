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


// Feature records: one row of features per (recording, level), with CSV and
// JSON serialization at full precision.

#pragma once

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
#include "vocalmark/protocol/filename.hpp"

namespace vocalmark {

enum class Level { kSuprasegmental, kVowel };

inline std::string to_string(Level l) { return l == Level::kSuprasegmental ? "S" : "a"; }

inline Level level_from_string(std::string_view s) {
  if (s == "S") return Level::kSuprasegmental;
  if (s == "a") return Level::kVowel;
  fail(Errc::kInvalidArgument, "level must be S or a, got '" + std::string(s) + "'");
}

inline std::optional<Errc> errc_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(Errc::kBadConfig); ++i)
    if (to_string(static_cast<Errc>(i)) == s) return static_cast<Errc>(i);
  return std::nullopt;
}

struct FeatureRecord {
  std::string recording;  // file name
  Level level = Level::kSuprasegmental;
  FeatureValues features;
  std::optional<std::size_t> n_vowels;       // level a: instances found
  std::optional<std::size_t> n_rejected;     // level a: instances outside the audio
  nlohmann::json params = nlohmann::json::object();
  std::map<std::string, std::string> extra;  // pass-through columns such as a cohort label

  std::optional<protocol::RecordingId> id() const {
    try {
      return protocol::parse_recording_filename(recording);
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  // Value of an identity or pass-through column.
  std::optional<std::string> column(const std::string& key) const {
    if (key == "recording") return recording;
    if (key == "level") return to_string(level);
    if (auto it = extra.find(key); it != extra.end()) return it->second;
    if (const auto i = id()) {
      if (key == "participant") return i->participant;
      if (key == "device") return i->device;
      if (key == "day") return i->day;
      if (key == "session") return i->session;
      if (key == "task") return i->task;
    }
    return std::nullopt;
  }

  bool operator==(const FeatureRecord&) const = default;
};

inline constexpr std::array<const char*, 5> kIdColumns{"participant", "device", "day", "session", "task"};

inline std::string encode_errors(const FeatureValues& v) {
  std::string out;
  for (auto f : kAllFeatures)
    if (const auto e = v.error(f)) {
      if (!out.empty()) out += ";";
      out += std::string(name(f)) + ":" + std::string(to_string(*e));
    }
  return out;
}

inline void decode_errors(std::string_view s, FeatureValues& v) {
  while (!s.empty()) {
    const auto semi = s.find(';');
    const auto item = s.substr(0, semi);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) fail(Errc::kInvalidArgument, "bad error entry '" + std::string(item) + "'");
    const auto f = feature_from_name(item.substr(0, colon));
    const auto e = errc_from_string(item.substr(colon + 1));
    if (!f || !e) fail(Errc::kInvalidArgument, "bad error entry '" + std::string(item) + "'");
    v.set_error(*f, *e);
    if (semi == std::string_view::npos) break;
    s.remove_prefix(semi + 1);
  }
}

inline std::vector<std::string> record_header(const std::vector<FeatureRecord>& records) {
  std::vector<std::string> h{"recording"};
  for (auto c : kIdColumns) h.emplace_back(c);
  h.emplace_back("level");
  for (auto f : kAllFeatures) h.emplace_back(name(f));
  for (auto c : {"n_vowels", "n_rejected", "errors", "params"}) h.emplace_back(c);
  std::set<std::string> extra;
  for (const auto& r : records)
    for (const auto& [k, v] : r.extra) extra.insert(k);
  h.insert(h.end(), extra.begin(), extra.end());
  return h;
}

inline std::string records_to_csv(const std::vector<FeatureRecord>& records) {
  const auto header = record_header(records);
  std::vector<csv::Row> rows{header};
  for (const auto& r : records) {
    csv::Row row{r.recording};
    const auto id = r.id();
    for (auto c : kIdColumns) {
      std::optional<std::string> v;
      if (id) v = r.column(c);
      row.push_back(v.value_or(""));
    }
    row.push_back(to_string(r.level));
    for (auto f : kAllFeatures) row.push_back(r.features[f] ? format_shortest(*r.features[f]) : "");
    row.push_back(r.n_vowels ? std::to_string(*r.n_vowels) : "");
    row.push_back(r.n_rejected ? std::to_string(*r.n_rejected) : "");
    row.push_back(encode_errors(r.features));
    row.push_back(r.params.dump());
    for (std::size_t i = row.size(); i < header.size(); ++i) {
      const auto it = r.extra.find(header[i]);
      row.push_back(it == r.extra.end() ? "" : it->second);
    }
    rows.push_back(std::move(row));
  }
  return csv::write(rows);
}

// Reads any CSV with a "level" column and feature columns; identity columns
// derived from the file name are recomputed, unknown columns are kept in
// `extra`.
inline std::vector<FeatureRecord> records_from_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  std::vector<FeatureRecord> out;
  if (rows.empty()) return out;
  const auto& header = rows.front();
  auto find = [&](std::string_view col) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == col) return i;
    return std::nullopt;
  };
  const auto level_col = find("level");
  if (!level_col) fail(Errc::kInvalidArgument, "feature CSV has no 'level' column");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size())
      fail(Errc::kInvalidArgument, "CSV row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                                       " fields; header has " + std::to_string(header.size()));
    FeatureRecord rec;
    rec.level = level_from_string(row[*level_col]);
    for (std::size_t c = 0; c < header.size(); ++c) {
      const auto& col = header[c];
      const auto& cell = row[c];
      if (c == *level_col) continue;
      if (col == "recording") rec.recording = cell;
      else if (const auto f = feature_from_name(col)) {
        if (!cell.empty()) rec.features.values[static_cast<std::size_t>(*f)] = parse_double(cell);
      } else if (col == "n_vowels") {
        if (!cell.empty()) rec.n_vowels = static_cast<std::size_t>(parse_double(cell));
      } else if (col == "n_rejected") {
        if (!cell.empty()) rec.n_rejected = static_cast<std::size_t>(parse_double(cell));
      } else if (col == "errors") {
        decode_errors(cell, rec.features);
      } else if (col == "params") {
        if (!cell.empty()) rec.params = nlohmann::json::parse(cell);
      } else if (std::find(kIdColumns.begin(), kIdColumns.end(), col) != kIdColumns.end()) {
        if (!rec.id() && !cell.empty()) rec.extra[col] = cell;
      } else {
        rec.extra[col] = cell;
      }
    }
    // Identity columns only live in `extra` when the name does not carry them.
    if (rec.id())
      for (auto c : kIdColumns) rec.extra.erase(c);
    out.push_back(std::move(rec));
  }
  return out;
}

inline nlohmann::json to_json(const FeatureRecord& r) {
  nlohmann::json j;
  j["recording"] = r.recording;
  if (const auto id = r.id())
    for (auto c : kIdColumns) {
      const auto v = r.column(c);
      j[c] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    }
  j["level"] = to_string(r.level);
  nlohmann::json feats = nlohmann::json::object(), errs = nlohmann::json::object();
  for (auto f : kAllFeatures) {
    if (r.features[f]) feats[std::string(name(f))] = *r.features[f];
    else if (!(r.level == Level::kVowel && is_timing(f))) feats[std::string(name(f))] = nullptr;
    if (const auto e = r.features.error(f)) errs[std::string(name(f))] = std::string(to_string(*e));
  }
  j["features"] = feats;
  j["errors"] = errs;
  if (r.n_vowels) j["n_vowels"] = *r.n_vowels;
  if (r.n_rejected) j["n_rejected"] = *r.n_rejected;
  j["params"] = r.params;
  if (!r.extra.empty()) j["extra"] = r.extra;
  return j;
}

inline FeatureRecord record_from_json(const nlohmann::json& j) {
  FeatureRecord r;
  try {
    r.recording = j.at("recording").get<std::string>();
    r.level = level_from_string(j.at("level").get<std::string>());
    for (const auto& [k, v] : j.at("features").items()) {
      const auto f = feature_from_name(k);
      if (!f) fail(Errc::kInvalidArgument, "unknown feature '" + k + "'");
      if (!v.is_null()) r.features.values[static_cast<std::size_t>(*f)] = v.get<double>();
    }
    if (j.contains("errors"))
      for (const auto& [k, v] : j.at("errors").items()) {
        const auto f = feature_from_name(k);
        const auto e = errc_from_string(v.get<std::string>());
        if (!f || !e) fail(Errc::kInvalidArgument, "bad error entry '" + k + "'");
        r.features.errors[static_cast<std::size_t>(*f)] = *e;
      }
    if (j.contains("n_vowels")) r.n_vowels = j.at("n_vowels").get<std::size_t>();
    if (j.contains("n_rejected")) r.n_rejected = j.at("n_rejected").get<std::size_t>();
    if (j.contains("params")) r.params = j.at("params");
    if (j.contains("extra")) r.extra = j.at("extra").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::kInvalidArgument, std::string("feature record: ") + e.what());
  }
  return r;
}

inline std::string records_to_json(const std::vector<FeatureRecord>& records) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : records) a.push_back(to_json(r));
  return a.dump(2) + "\n";
}

inline std::vector<FeatureRecord> records_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::kInvalidArgument, std::string("feature JSON: ") + e.what());
  }
  if (!j.is_array()) fail(Errc::kInvalidArgument, "feature JSON must be an array of records");
  std::vector<FeatureRecord> out;
  for (const auto& r : j) out.push_back(record_from_json(r));
  return out;
}

}  // namespace vocalmark
